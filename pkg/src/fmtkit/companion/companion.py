"""Bounded evidence that one theory is the model companion of another."""

from __future__ import annotations

from dataclasses import dataclass, field

from fmtkit.companion.clauses import forall_exists_sentence
from fmtkit.companion.ec import robinson_check
from fmtkit.companion.search import forall_exists_candidates, forall_exists_truth, valid_universal_sentences
from fmtkit.errors import PreconditionError
from fmtkit.fol.parser import render_formula
from fmtkit.structures.embeddings import enumerate_embeddings
from fmtkit.structures.enumerate import DEFAULT_BUDGET, enumerate_models
from fmtkit.structures.evaluate import evaluate
from fmtkit.structures.structure import FiniteStructure, render_structure
from fmtkit.structures.theory import TheorySpec


@dataclass
class Check:
    name: str
    passed: bool
    counterexamples: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "counterexamples": self.counterexamples, "details": self.details}


@dataclass
class CompanionReport:
    bounds: dict
    checks: list[Check]
    vacuous: bool

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {
            "bounds": self.bounds,
            "passed": self.passed,
            "vacuous": self.vacuous,
            "checks": [c.to_json() for c in self.checks],
        }


def _embeds_somewhere(M: FiniteStructure, targets: list[FiniteStructure]) -> bool:
    return any(M.size <= N.size and enumerate_embeddings(M, N) for N in targets)


def _mutual_extension(T_models, S_models, n: int, slack: int) -> Check:
    """Each model of one theory of size <= n - slack embeds in a model of the
    other of size <= n."""
    bad = []
    for label, src, dst in (("T", T_models, S_models), ("Tstar", S_models, T_models)):
        for M in src:
            if M.size <= n - slack and not _embeds_somewhere(M, dst):
                bad.append({"theory": label, "structure": render_structure(M)})
    return Check("mutually_extendable", not bad, bad, {"slack": slack})


def _universal_agreement(T_models, S_models, sig, variables: int, size: int) -> Check:
    t_valid = valid_universal_sentences(T_models, sig, variables, size)
    s_valid = valid_universal_sentences(S_models, sig, variables, size)
    t_set, s_set = set(t_valid), set(s_valid)
    bad = []
    for label, only, models in (("T", [s for s in t_valid if s not in s_set], S_models),
                                ("Tstar", [s for s in s_valid if s not in t_set], T_models)):
        for s in only:
            refuter = next(M for M in models if not evaluate(M, s))
            bad.append({"valid_in": label, "sentence": render_formula(s), "refuted_by": render_structure(refuter)})
    return Check("universal_fragments_agree", not bad, bad, {"t_sentences": len(t_valid), "tstar_sentences": len(s_valid)})


def _pi2_axiomatized(S: TheorySpec, S_models, n: int, variables: int, size: int, budget: int) -> Check:
    """Every structure of size <= n satisfying the bounded universal and
    forall-exists consequences of S satisfies the axioms of S."""
    universal = valid_universal_sentences(S_models, S.sig, variables, size)
    everywhere = (1 << len(S_models)) - 1
    tables: dict = {}
    pi2 = [
        forall_exists_sentence(space, xs, ys, lits)
        for space, xs, ys, lits in forall_exists_candidates(S.sig, size, 1, max(1, variables - 1))
        if S_models and forall_exists_truth(S_models, space, xs, ys, lits, tables) == everywhere
    ]
    # the universal consequences are clauses, so their models enumerate quickly
    candidates = enumerate_models(TheorySpec(S.sig, universal), n, budget)
    bad = []
    for M in candidates:
        if all(evaluate(M, s) for s in pi2):
            failed = [ax for ax in S.axioms if not evaluate(M, ax)]
            if failed:
                bad.append({"structure": render_structure(M), "axiom": render_formula(failed[0])})
    return Check("pi2_axiomatized", not bad, bad, {"universal": len(universal), "forall_exists": len(pi2)})


def model_companion_check(
    T: TheorySpec,
    Tstar: TheorySpec,
    n: int = 4,
    r: int = 1,
    variables: int = 2,
    size: int = 2,
    slack: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> CompanionReport:
    """Four bounded checks: mutual extendability, Robinson's test for Tstar,
    equal universal consequences, and Tstar following from its
    forall-exists consequences."""
    if T.sig != Tstar.sig:
        raise PreconditionError("the theories must share a signature")
    T_models = enumerate_models(T, n, budget)
    S_models = enumerate_models(Tstar, n, budget)
    rob = robinson_check(Tstar, n, r, budget, cross_check=False)
    robinson = Check(
        "robinson",
        rob.model_complete,
        [] if rob.witness is None else [rob.witness.to_json()],
        {"models": len(rob.verdicts), "caveat": "ec status is checked only against extensions within the bounds"},
    )
    checks = [
        _mutual_extension(T_models, S_models, n, slack),
        robinson,
        _universal_agreement(T_models, S_models, T.sig, variables, size),
        _pi2_axiomatized(Tstar, S_models, n, variables, size, budget),
    ]
    bounds = {"n": n, "rank": r, "variables": variables, "sentence_size": size}
    return CompanionReport(bounds, checks, not T_models or not S_models)
