"""Translation of membership formulas into statements about codes, and the
check that truth is preserved between sets and their codes.

The code signature has ``WFE/1`` (is a valid code), ``ISO/2`` (code
equality) and ``MEM/2`` (code membership).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Sequence

from fmtkit.errors import SignatureError
from fmtkit.fol.parser import parse_formula, render_formula
from fmtkit.fol.syntax import (
    And, Atom, Equals, Exists, Forall, Formula,
    Iff, Implies, MEMBERSHIP, Member, Not, Or, Signature, Var,
)
from fmtkit.fol.transform import free_variables, unbound_bounded
from fmtkit.hf.codes import encode
from fmtkit.hf.sets import HFSet, hf_enumerate
from fmtkit.hf.universe import CodeUniverse, enumerate_wfe
from fmtkit.structures.evaluate import compile_formula
from fmtkit.structures.structure import FiniteStructure

CODE_SIG = Signature(predicates=(("WFE", 1), ("ISO", 2), ("MEM", 2)))
SET_SIG = Signature(membership=True)


def _wfe(v: Var) -> Atom:
    return Atom("WFE", (v,))


def translate(f: Formula) -> Formula:
    """Image of a pure membership formula over the code signature.

    ``x = y`` and ``x in y`` become ``WFE(x) & WFE(y) & ISO(x, y)`` and
    ``WFE(x) & WFE(y) & MEM(x, y)``; connectives are kept; ``exists y A``
    becomes ``exists y (A' & WFE(y))`` and ``forall y A`` becomes
    ``forall y (WFE(y) -> A')``.  Bounded quantifiers are unfolded first.
    """
    return _tr(unbound_bounded(f))


def _var(t) -> Var:
    if not isinstance(t, Var):
        raise SignatureError(f"only variables may occur in membership formulas, got {t!r}")
    return t


def _tr(f: Formula) -> Formula:
    if isinstance(f, (Equals, Member)):
        x, y = _var(f.left), _var(f.right)
        rel = "ISO" if isinstance(f, Equals) else "MEM"
        return And(And(_wfe(x), _wfe(y)), Atom(rel, (x, y)))
    if isinstance(f, Atom):
        raise SignatureError(f"unsupported symbol {f.pred!r} in a membership formula")
    if isinstance(f, Not):
        return Not(_tr(f.body))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_tr(f.left), _tr(f.right))
    if isinstance(f, Exists):
        return Exists(f.var, And(_tr(f.body), _wfe(Var(f.var))))
    if isinstance(f, Forall):
        return Forall(f.var, Implies(_wfe(Var(f.var)), _tr(f.body)))
    raise TypeError(f"unexpected node {f!r}")  # bounded nodes were unfolded


def hf_structure(sets: Sequence[HFSet]) -> FiniteStructure:
    """The sets as a structure for the membership signature."""
    index = {s: i for i, s in enumerate(sets)}
    rel = frozenset((index[x], index[y]) for y in sets for x in y.children if x in index)
    return FiniteStructure(SET_SIG, len(sets), relations={MEMBERSHIP: rel})


def code_structure(u: CodeUniverse) -> FiniteStructure:
    """Every code of the universe; ``WFE`` holds everywhere since only valid
    codes are enumerated, so the guard acts as a sort."""
    n = len(u.codes)
    iso = frozenset((i, j) for i in range(n) for j in range(n) if u.equal(i, j))
    return FiniteStructure(CODE_SIG, n, relations={
        "WFE": frozenset((i,) for i in range(n)),
        "ISO": iso,
        "MEM": u.member_pairs,
    })


@dataclass
class TransferReport:
    bound: int
    margin: int
    checks: int
    agreements: int
    per_formula: list[dict]
    mismatches: list[dict]
    elapsed: float

    @property
    def agreement_rate(self) -> float:
        return 1.0 if self.checks == 0 else self.agreements / self.checks

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "margin": self.margin,
            "checks": self.checks,
            "agreements": self.agreements,
            "agreement_rate": self.agreement_rate,
            "per_formula": self.per_formula,
            "mismatches": self.mismatches,
            "elapsed": round(self.elapsed, 3),
        }


def verify_truth_transfer(
    corpus: Sequence[Formula], m: int, margin: int = 1, cap: int | None = None, max_listed: int = 50,
) -> TransferReport:
    """Compare each formula on the sets of closure size <= m with its
    translation on the codes of size <= m, at all parameter tuples drawn from
    the sets of closure size <= m - margin."""
    start = time.perf_counter()
    sets = hf_enumerate(m)
    H = hf_structure(sets)
    u = enumerate_wfe(m, cap)
    C = code_structure(u)
    set_index = {s: i for i, s in enumerate(sets)}
    params = hf_enumerate(m - margin) if m - margin >= 1 else []
    code_of = {s: u.find(encode(s)) for s in params}
    checks = agreements = 0
    per_formula = []
    mismatches: list[dict] = []
    for f in corpus:
        theta = translate(f)
        fv = free_variables(f)
        tv = free_variables(theta)
        if set(tv) != set(fv):
            raise AssertionError("translation changed the free variables")
        hf_fn, code_fn = compile_formula(f), compile_formula(theta)
        n_ok = n_all = 0
        for tup in itertools.product(params, repeat=len(fv)):
            h = hf_fn(H, {v: set_index[s] for v, s in zip(fv, tup)})
            c = code_fn(C, {v: code_of[s] for v, s in zip(fv, tup)})
            n_all += 1
            if h == c:
                n_ok += 1
            elif len(mismatches) < max_listed:
                mismatches.append({
                    "formula": render_formula(f),
                    "assignment": {v: str(s) for v, s in zip(fv, tup)},
                    "sets": h,
                    "codes": c,
                })
        checks += n_all
        agreements += n_ok
        per_formula.append({"formula": render_formula(f), "checks": n_all, "agreements": n_ok})
    return TransferReport(m, margin, checks, agreements, per_formula, mismatches, time.perf_counter() - start)


# Default corpus for the command line and the acceptance suite.
DEFAULT_CORPUS = [
    "x = x",
    "x in y",
    "~(x = y)",
    "exists z (z in x)",
    "forall z ~(z in x)",
    "forall z (z in x -> z in y)",
    "forall z (z in x <-> z in y)",
    # pairing: z = {x, y}
    "forall w (w in z <-> (w = x | w = y))",
    "forall w (w in z <-> w = x)",
    "forall u in x forall v in u (v in x)",
    # x is an ordinal: transitive and linearly ordered by membership
    "(forall u in x forall v in u (v in x)) & (forall u in x forall v in x (u in v | u = v | v in u))",
    "exists z (z in x & forall w ~(w in z))",
    "exists y (x in y)",
    "forall y exists z (y in z)",
    "exists z forall w (w in z <-> w = x)",
    "forall u in x forall v in u ~(v = u)",
    "forall w (w in z <-> (w in x | w in y))",
    "forall w (w in z <-> (w in x & w in y))",
    "forall w (w in z <-> (w = x | w in x))",
    "exists u exists v (u in x & v in x & ~(u = v))",
    # f is a function: a set of ordered pairs {{a},{a,b}} no two sharing a first coordinate
    "(forall p in f exists a exists b forall s (s in p <-> ((forall t (t in s <-> t = a)) | (forall t (t in s <-> (t = a | t = b))))))"
    " & (forall p in f forall q in f ((exists a ((forall s in p (a in s)) & (forall s in q (a in s)))) -> p = q))",
    "forall y (y in x -> exists z (z in y))",
    "exists y forall z (z in y -> z in x)",
]


def default_corpus() -> list[Formula]:
    return [parse_formula(t, SET_SIG) for t in DEFAULT_CORPUS]

