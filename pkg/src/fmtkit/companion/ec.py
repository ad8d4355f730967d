"""Existentially closed structures within bounds, the ec chain, and
Robinson's test over the bounded models of a theory."""

from __future__ import annotations

from dataclasses import dataclass, field

from fmtkit.errors import PreconditionError
from fmtkit.fol.parser import render_formula
from fmtkit.fol.syntax import Formula
from fmtkit.structures.embeddings import Sigma1Checker, Sigma1Witness
from fmtkit.structures.enumerate import DEFAULT_BUDGET, enumerate_models, extensions
from fmtkit.structures.evaluate import evaluate
from fmtkit.structures.structure import FiniteStructure, render_structure
from fmtkit.structures.theory import TheorySpec


def universal_violation(M: FiniteStructure, T: TheorySpec) -> Formula | None:
    for ax in T.universal_fragment:
        if not evaluate(M, ax):
            return ax
    return None


def require_universal(M: FiniteStructure, T: TheorySpec) -> None:
    bad = universal_violation(M, T)
    if bad is not None:
        raise PreconditionError(f"structure violates the universal axiom {render_formula(bad)!r}")


def witness_json(w: Sigma1Witness) -> dict:
    return {
        "formula": render_formula(w.formula),
        "parameters": {name: e for name, e in w.parameters},
        "realizers": list(w.realizers),
    }


@dataclass
class ECVerdict:
    structure: FiniteStructure
    n: int
    rank: int
    verdict: bool
    vacuous: bool = False
    superstructure: FiniteStructure | None = None
    witness: Sigma1Witness | None = None
    extensions_checked: int = 0

    def to_json(self) -> dict:
        out = {
            "structure": render_structure(self.structure),
            "bounds": {"n": self.n, "rank": self.rank},
            "verdict": self.verdict,
            "vacuous": self.vacuous,
            "extensions_checked": self.extensions_checked,
        }
        if self.witness is not None:
            out["superstructure"] = render_structure(self.superstructure)
            out["witness"] = witness_json(self.witness)
        return out


def is_ec(
    M: FiniteStructure,
    T: TheorySpec,
    n: int | None = None,
    r: int = 1,
    minimal_witness: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> ECVerdict:
    """Is M Sigma-1 elementary (at rank r) in every model of the universal
    axioms of T with at most n elements that extends it?

    The default ``n = |M| + r`` covers every witness tuple of the bounded
    sentences.  With *minimal_witness* the least witness over all extensions
    is reported; otherwise the search stops at the first failure.
    """
    require_universal(M, T)
    n = M.size + r if n is None else n
    checker = Sigma1Checker(M, r)
    universal = list(T.universal_fragment)
    best = None
    count = 0
    for k in range(1, n - M.size + 1):
        for N in extensions(M, k, universal, budget=budget):
            count += 1
            res = checker.check(N, range(M.size), minimal=minimal_witness)
            if res.verdict:
                continue
            if best is None or res.witness.key < best[1].key:
                best = (N, res.witness)
            if not minimal_witness:
                break
        if best is not None:
            break  # fewer new elements already give a witness
    if best is None:
        return ECVerdict(M, n, r, True, vacuous=count == 0, extensions_checked=count)
    return ECVerdict(M, n, r, False, False, best[0], best[1], count)


@dataclass
class ChainResult:
    start: FiniteStructure
    final: FiniteStructure
    stages: list[FiniteStructure]
    steps: list[dict]
    ec: bool
    partial: bool
    rank: int
    budget: int

    def to_json(self) -> dict:
        return {
            "start": render_structure(self.start),
            "final": render_structure(self.final),
            "stages": [render_structure(s) for s in self.stages],
            "steps": self.steps,
            "ec": self.ec,
            "partial": self.partial,
            "bounds": {"rank": self.rank, "budget": self.budget},
        }


def _holds_with_parameters(N: FiniteStructure, w: Sigma1Witness) -> bool:
    params = {name: e for name, e in w.parameters}
    return evaluate(N.expand(w.signature, constants=params), w.formula)


def ec_chain(M: FiniteStructure, T: TheorySpec, budget: int = 20, rank: int = 1) -> ChainResult:
    """Grow M until it passes :func:`is_ec` at *rank* or the size budget runs out.

    Each step takes the least witness of non-closure and adds the least
    extension (fewest new elements, then lexicographically least relations)
    in which the witnessed existential holds.
    """
    require_universal(M, T)
    universal = list(T.universal_fragment)
    stages = [M]
    steps: list[dict] = []
    cur = M
    while True:
        v = is_ec(cur, T, r=rank)
        if v.verdict:
            return ChainResult(M, cur, stages, steps, True, False, rank, budget)
        w = v.witness
        nxt = None
        for k in range(1, rank + 1):
            if cur.size + k > budget:
                break
            for N in extensions(cur, k, universal):
                if _holds_with_parameters(N, w):
                    nxt = N
                    break
            if nxt is not None:
                break
        if nxt is None:
            steps.append({"witness": witness_json(w), "added": 0, "note": "size budget exhausted"})
            return ChainResult(M, cur, stages, steps, False, True, rank, budget)
        steps.append({"witness": witness_json(w), "added": nxt.size - cur.size})
        stages.append(nxt)
        cur = nxt


@dataclass
class RobinsonReport:
    n: int
    rank: int
    verdicts: list[ECVerdict]
    model_complete: bool
    witness: ECVerdict | None
    cross_check: list[dict] = field(default_factory=list)

    @property
    def vacuous(self) -> bool:
        return not self.verdicts

    def to_json(self) -> dict:
        return {
            "bounds": {"n": self.n, "rank": self.rank},
            "model_complete": self.model_complete,
            "vacuous": self.vacuous,
            "models": len(self.verdicts),
            "ec_models": sum(1 for v in self.verdicts if v.verdict),
            "witness": None if self.witness is None else self.witness.to_json(),
            "cross_check": self.cross_check,
        }


def robinson_check(T: TheorySpec, n: int, r: int = 1, budget: int = DEFAULT_BUDGET, cross_check: bool = True) -> RobinsonReport:
    """Bounded Robinson test: is every model of T with at most n elements ec?"""
    from fmtkit.companion.search import generalize_witness, universal_equivalent_search

    verdicts = [is_ec(M, T, r=r, budget=budget) for M in enumerate_models(T, n, budget)]
    failing = next((v for v in verdicts if not v.verdict), None)
    checks: list[dict] = []
    if cross_check and failing is not None:
        # a model-complete theory makes every existential formula equivalent
        # to a universal one; the failing witness should have none
        phi = generalize_witness(failing.witness.formula, [name for name, _ in failing.witness.parameters])
        found = universal_equivalent_search(phi, T, n=n, budget=budget)
        checks.append({
            "formula": render_formula(phi),
            "universal": None if found.formula is None else render_formula(found.formula),
        })
    return RobinsonReport(n, r, verdicts, failing is None, failing, checks)
