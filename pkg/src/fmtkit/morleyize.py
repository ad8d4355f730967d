"""Definitional expansions: one new predicate per formula of a corpus.

Formulas are first normalised to a small connective basis (atoms, ``~``,
``&`` and ``exists`` in full mode; atoms, ``~``, ``&`` and bounded
``forall x in t`` in delta0 mode), closed under subformulas, and each
subformula ``phi`` with free variables ``x1..xn`` gets an n-ary predicate
named ``R_`` plus a hash of its rendering.  Linking axioms tie every new
predicate to its immediate subformulas.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Sequence

from fmtkit.errors import PreconditionError, SignatureError
from fmtkit.fol.parser import render_formula
from fmtkit.fol.syntax import (
    And, Atom, BoundedExists, BoundedForall, Equals, Exists, Forall, Formula,
    Iff, Implies, Member, Not, Or, Signature, Var, has_unbounded_quantifier,
    subformulas,
)
from fmtkit.fol.transform import free_variables, substitute, unbound_bounded
from fmtkit.structures.evaluate import extension
from fmtkit.structures.structure import FiniteStructure

FULL = "full"
DELTA0_MODE = "delta0"
MODES = (FULL, DELTA0_MODE)


def normalize(f: Formula, mode: str = FULL) -> Formula:
    """Rewrite *f* into the connective basis of *mode* (equivalent formula)."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == FULL:
        return _norm_full(unbound_bounded(f))
    if has_unbounded_quantifier(f):
        raise PreconditionError(f"delta0 mode needs bounded formulas: {render_formula(f)}")
    return _norm_delta0(f)


def _norm_common(f: Formula, go) -> Formula | None:
    if isinstance(f, (Atom, Equals, Member)):
        return f
    if isinstance(f, Not):
        return Not(go(f.body))
    if isinstance(f, And):
        return And(go(f.left), go(f.right))
    if isinstance(f, Or):
        return Not(And(Not(go(f.left)), Not(go(f.right))))
    if isinstance(f, Implies):
        return Not(And(go(f.left), Not(go(f.right))))
    if isinstance(f, Iff):
        a, b = go(f.left), go(f.right)
        return And(Not(And(a, Not(b))), Not(And(b, Not(a))))
    return None


def _norm_full(f: Formula) -> Formula:
    out = _norm_common(f, _norm_full)
    if out is not None:
        return out
    if isinstance(f, Exists):
        return Exists(f.var, _norm_full(f.body))
    if isinstance(f, Forall):
        return Not(Exists(f.var, Not(_norm_full(f.body))))
    raise TypeError(f"unexpected node {f!r}")


def _norm_delta0(f: Formula) -> Formula:
    out = _norm_common(f, _norm_delta0)
    if out is not None:
        return out
    if isinstance(f, BoundedForall):
        return BoundedForall(f.var, f.bound, _norm_delta0(f.body))
    if isinstance(f, BoundedExists):
        return Not(BoundedForall(f.var, f.bound, Not(_norm_delta0(f.body))))
    raise TypeError(f"unexpected node {f!r}")


@dataclass(frozen=True)
class AddedPredicate:
    name: str
    formula: Formula  # normalised
    variables: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.variables)

    def atom(self) -> Atom:
        return Atom(self.name, tuple(Var(v) for v in self.variables))


@dataclass(frozen=True)
class MorleySignature:
    base: Signature
    added: tuple[AddedPredicate, ...]
    mode: str

    @property
    def signature(self) -> Signature:
        return self.base.with_predicates([(p.name, p.arity) for p in self.added])

    def by_name(self, name: str) -> AddedPredicate:
        for p in self.added:
            if p.name == name:
                return p
        raise SignatureError(f"unknown added predicate {name!r}")

    def by_formula(self, f: Formula) -> AddedPredicate:
        g = normalize(f, self.mode)
        for p in self.added:
            if p.formula == g:
                return p
        raise SignatureError(f"formula not in the expansion: {render_formula(f)}")

    def manifest(self) -> dict:
        return {
            "base": self.base.render(),
            "added": [{"name": p.name, "formula": render_formula(p.formula), "arity": p.arity} for p in self.added],
            "mode": self.mode,
        }


def predicate_name(f: Formula, taken: set[str]) -> str:
    digest = hashlib.sha256(render_formula(f).encode("utf-8")).hexdigest()
    for width in itertools.count(8):
        name = "R_" + digest[:width]
        if name not in taken:
            return name
    raise AssertionError  # pragma: no cover


def build_expansion(
    sig: Signature, corpus: Sequence[Formula], mode: str = FULL
) -> tuple[MorleySignature, list[Formula]]:
    """Expansion closed under subformulas of the normalised corpus, with its axioms."""
    taken = set(sig.symbols())
    added: list[AddedPredicate] = []
    index: dict[Formula, AddedPredicate] = {}
    for f in corpus:
        for g in subformulas(normalize(f, mode)):
            if g in index:
                continue
            p = AddedPredicate(predicate_name(g, taken), g, free_variables(g))
            taken.add(p.name)
            index[g] = p
            added.append(p)
    exp = MorleySignature(sig, tuple(added), mode)
    return exp, [_axiom(p, index) for p in added]


def _close(vars_: Sequence[str], body: Formula) -> Formula:
    for v in reversed(vars_):
        body = Forall(v, body)
    return body


def _axiom(p: AddedPredicate, index: dict[Formula, AddedPredicate]) -> Formula:
    f = p.formula
    head = p.atom()
    if isinstance(f, (Atom, Equals, Member)):
        return _close(p.variables, Iff(head, f))
    if isinstance(f, Not):
        return _close(p.variables, Iff(head, Not(index[f.body].atom())))
    if isinstance(f, And):
        return _close(p.variables, Iff(head, And(index[f.left].atom(), index[f.right].atom())))
    if isinstance(f, Exists):
        return _close(p.variables, Iff(Exists(f.var, index[f.body].atom()), head))
    if isinstance(f, BoundedForall):
        return _close(p.variables, Iff(head, BoundedForall(f.var, f.bound, index[f.body].atom())))
    raise TypeError(f"unexpected node {f!r}")


def expand_structure(M: FiniteStructure, exp: MorleySignature) -> FiniteStructure:
    """M with every added predicate interpreted by the extension of its formula."""
    if M.sig != exp.base:
        raise PreconditionError("structure signature differs from the expansion base")
    rels = {p.name: extension(M, p.formula, p.variables) for p in exp.added}
    return M.expand(exp.signature, relations=rels)


def collapse_formula(f: Formula, exp: MorleySignature) -> Formula:
    """Replace every added predicate by its defining base formula."""
    base_preds = set(exp.base.predicate_arity)
    added = {p.name: p for p in exp.added}

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            if g.pred in base_preds:
                return g
            if g.pred not in added:
                raise SignatureError(f"unknown added predicate {g.pred!r}")
            p = added[g.pred]
            if len(g.args) != p.arity:
                raise SignatureError(f"predicate {g.pred!r} expects {p.arity} argument(s)")
            return substitute(p.formula, dict(zip(p.variables, g.args)))
        if isinstance(g, (Equals, Member)):
            return g
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, (Exists, Forall)):
            return type(g)(g.var, go(g.body))
        return type(g)(g.var, g.bound, go(g.body))

    return go(f)
