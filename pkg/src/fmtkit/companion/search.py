"""Bounded searches for universal equivalents, universal separating
sentences and forall-exists sentences true in the ec structures.

Every result carries its bounds; "none" only means nothing was found within
them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from fmtkit.companion.clauses import (
    LiteralSpace, clause_formula, close, conjunction_formula, forall_exists_sentence,
    full_mask, iter_literal_sets, universal_sentence,
)
from fmtkit.companion.ec import is_ec
from fmtkit.errors import PreconditionError, StructureError
from fmtkit.fol.parser import render_formula
from fmtkit.fol.syntax import (
    Atom, BoundedExists, BoundedForall, Const, DELTA0, Equals, Formula, Member, Not,
    Pi, Sigma, Signature, Term, Var, conjoin, subformulas,
)
from fmtkit.fol.transform import classify, free_variables
from fmtkit.structures.canon import canonical_form
from fmtkit.structures.embeddings import enumerate_embeddings, is_embedding
from fmtkit.structures.enumerate import DEFAULT_BUDGET, enumerate_models
from fmtkit.structures.evaluate import evaluate, extension
from fmtkit.structures.structure import FiniteStructure, render_structure
from fmtkit.structures.theory import TheorySpec


def _bound_names(avoid: set[str], k: int) -> list[str]:
    base = ["y"] if k == 1 else [f"y{i}" for i in range(1, k + 1)]
    out = []
    for name in base:
        while name in avoid:
            name += "_"
        out.append(name)
    return out


def _replace_constants(f: Formula, mapping: dict[str, Var]) -> Formula:
    def t(x: Term) -> Term:
        if isinstance(x, Const):
            return mapping.get(x.name, x)
        return x

    if isinstance(f, Atom):
        return Atom(f.pred, tuple(t(a) for a in f.args))
    if isinstance(f, (Equals, Member)):
        return type(f)(t(f.left), t(f.right))
    if isinstance(f, Not):
        return Not(_replace_constants(f.body, mapping))
    if isinstance(f, (BoundedExists, BoundedForall)):
        return type(f)(f.var, t(f.bound), _replace_constants(f.body, mapping))
    if hasattr(f, "var"):
        return type(f)(f.var, _replace_constants(f.body, mapping))
    return type(f)(_replace_constants(f.left, mapping), _replace_constants(f.right, mapping))


def generalize_witness(f: Formula, constants: Sequence[str]) -> Formula:
    """Replace the parameter constants of a witness by free variables x, x1, ..."""
    names = ["x"] if len(constants) == 1 else [f"x{i}" for i in range(1, len(constants) + 1)]
    used = {g.var for g in subformulas(f) if hasattr(g, "var")}
    mapping = {}
    for c, name in zip(constants, names):
        while name in used:
            name += "_"
        mapping[c] = Var(name)
    return _replace_constants(f, mapping)


def _bounds(n: int, variables: int, size: int) -> dict:
    return {"n": n, "variables": variables, "sentence_size": size}


# -- universal equivalents ---------------------------------------------------------------


@dataclass
class EquivalentResult:
    phi: Formula
    formula: Formula | None
    bounds: dict
    models: int
    vacuous: bool

    def to_json(self) -> dict:
        return {
            "phi": render_formula(self.phi),
            "universal": None if self.formula is None else render_formula(self.formula),
            "bounds": self.bounds,
            "models": self.models,
            "vacuous": self.vacuous,
        }


def _clause_truth(tab: list[list[int]], lits: Sequence[int], rows: int, full: int) -> int:
    """Bitmask of outer rows where the universally closed clause holds."""
    out = 0
    for i in range(rows):
        m = 0
        for li in lits:
            m |= tab[li][i]
        if m == full:
            out |= 1 << i
    return out


def _greedy_cover(targets: int, candidates: list[tuple[int, tuple]]) -> list[tuple] | None:
    """Pick candidates (killing bitmask, payload) until every bit of *targets*
    is killed; earliest candidate wins ties."""
    chosen = []
    left = targets
    while left:
        best = max(candidates, key=lambda c: bin(c[0] & left).count("1"), default=None)
        if best is None or not best[0] & left:
            return None
        chosen.append(best[1])
        left &= ~best[0]
    return chosen


def _pad_variables(body: Formula | None, needed: Sequence[str]) -> Formula:
    """Conjoin ``v = v`` for each needed variable missing from *body*."""
    present = set(free_variables(body)) if body is not None else set()
    extra = [Equals(Var(v), Var(v)) for v in needed if v not in present]
    parts = ([body] if body is not None else []) + extra
    return conjoin(parts)


def universal_equivalent_search(
    phi: Formula,
    T: TheorySpec,
    n: int = 4,
    variables: int = 2,
    size: int = 2,
    budget: int = DEFAULT_BUDGET,
    models: Sequence[FiniteStructure] | None = None,
) -> EquivalentResult:
    """Look for ``forall ys (C1 & ... & Cm)``, clauses of at most *size*
    literals over the free variables of *phi* and at most *variables* bound
    ones, with the same extension as *phi* in every model of T up to size n.
    """
    cls = classify(phi)
    if cls not in (DELTA0, Sigma(1)):
        raise PreconditionError(f"expected a Sigma(1) formula, got {cls}")
    fv = list(free_variables(phi))
    models = list(enumerate_models(T, n, budget) if models is None else models)
    bounds = _bounds(n, variables, size)
    if not models:
        return EquivalentResult(phi, None, bounds, 0, True)
    target = 0
    offsets = []
    pos = 0
    for M in models:
        ext = extension(M, phi, fv)
        for i, row in enumerate(itertools.product(range(M.size), repeat=len(fv))):
            if row in ext:
                target |= 1 << (pos + i)
        offsets.append(pos)
        pos += M.size ** len(fv)
    everything = (1 << pos) - 1
    avoid = set(fv)
    for k in range(1, variables + 1):
        ys = _bound_names(avoid, k)
        space = LiteralSpace(T.sig, tuple(fv) + tuple(ys))
        tabs = [space.table(M, fv, ys) for M in models]
        implied: list[tuple[int, tuple]] = []
        for lits in iter_literal_sets(space, size, min_size=0):
            truth = 0
            for M, tab, off in zip(models, tabs, offsets):
                truth |= _clause_truth(tab, lits, M.size ** len(fv), full_mask(M, k)) << off
            if truth & target == target:
                implied.append((everything & ~truth, lits))
        cover = _greedy_cover(everything & ~target, implied)
        if cover is None:
            continue
        psi = _assemble(space, fv, ys, cover)
        # re-verify on the models by plain evaluation
        if all(extension(M, psi, fv) == extension(M, phi, fv) for M in models):
            return EquivalentResult(phi, psi, bounds, len(models), False)
    return EquivalentResult(phi, None, bounds, len(models), False)


def _assemble(space: LiteralSpace, fv: Sequence[str], ys: Sequence[str], clauses: Sequence[tuple]) -> Formula:
    body = conjoin(clause_formula(space, c) for c in clauses) if clauses else None
    present = set(free_variables(body)) if body is not None else set()
    used = [y for y in ys if y in present] or [ys[0]]
    body = _pad_variables(body, list(fv) + used)
    return close("A", used, body)


# -- separating universal sentences -----------------------------------------------------------


@dataclass
class SeparationResult:
    formula: Formula | None
    bounds: dict
    t_models: int
    s_models: int
    vacuous: bool
    embedding: dict | None = None

    def to_json(self) -> dict:
        return {
            "sentence": None if self.formula is None else render_formula(self.formula),
            "bounds": self.bounds,
            "t_models": self.t_models,
            "s_models": self.s_models,
            "vacuous": self.vacuous,
            "embedding": self.embedding,
        }


def universal_clause_truth(models: Sequence[FiniteStructure], space: LiteralSpace, max_size: int) -> list[tuple[tuple, int]]:
    """For each clause (size-then-lex order) the bitmask of *models* in which its
    universal closure holds."""
    k = len(space.variables)
    tabs = [space.table(M, (), space.variables) for M in models]
    out = []
    for lits in iter_literal_sets(space, max_size, min_size=0):
        truth = 0
        for j, (M, tab) in enumerate(zip(models, tabs)):
            m = 0
            for li in lits:
                m |= tab[li][0]
            if m == full_mask(M, k):
                truth |= 1 << j
        out.append((lits, truth))
    return out


def _first_embedding(S_models, T_models) -> dict | None:
    """Some S-model isomorphic to an induced substructure of some T-model."""
    subs: dict[tuple, tuple] = {}
    for B in T_models:
        for k in range(1, B.size + 1):
            for subset in itertools.combinations(range(B.size), k):
                try:
                    sub, elems = B.restrict(subset)
                except StructureError:
                    continue  # misses a constant
                form, order = canonical_form(sub)
                subs.setdefault(form, (B, tuple(elems[i] for i in order)))
    for A in S_models:
        form, order = canonical_form(A)
        if form in subs:
            B, images = subs[form]
            # position i of the canonical labelling is A's element order[i]
            emb = [0] * A.size
            for i, a in enumerate(order):
                emb[a] = images[i]
            assert is_embedding(A, B, emb)
            return {"s_model": render_structure(A), "t_model": render_structure(B), "images": emb}
    return None


def pi1_separation_search(
    T: TheorySpec,
    S: TheorySpec,
    n: int = 4,
    variables: int = 3,
    size: int = 3,
    budget: int = DEFAULT_BUDGET,
) -> SeparationResult:
    """A universal sentence true in every model of T and false in every model
    of S, both up to size n, built from clauses of at most *size* literals in
    at most *variables* variables."""
    if T.sig != S.sig:
        raise PreconditionError("the theories must share a signature")
    T_models = enumerate_models(T, n, budget)
    S_models = enumerate_models(S, n, budget)
    bounds = _bounds(n, variables, size)
    emb = _first_embedding(S_models, T_models)
    if not S_models:
        return SeparationResult(None, bounds, len(T_models), 0, True, emb)
    all_t = (1 << len(T_models)) - 1
    all_s = (1 << len(S_models)) - 1
    for k in range(1, variables + 1):
        space = LiteralSpace(T.sig, tuple(_bound_names(set(), k)))
        t_truth = universal_clause_truth(T_models, space, size)
        s_truth = universal_clause_truth(S_models, space, size)
        valid = [(all_s & ~st, lits) for (lits, tt), (_, st) in zip(t_truth, s_truth) if tt == all_t]
        cover = _greedy_cover(all_s, valid)
        if cover is None:
            continue
        if emb is not None:
            # a universal sentence true in a model holds in its substructures
            raise AssertionError("separating sentence found although an S-model embeds in a T-model")
        psi = universal_sentence(space, cover)
        assert all(evaluate(M, psi) for M in T_models)
        assert not any(evaluate(M, psi) for M in S_models)
        return SeparationResult(psi, bounds, len(T_models), len(S_models), False, None)
    return SeparationResult(None, bounds, len(T_models), len(S_models), False, emb)


# -- forall-exists sentences over ec structures --------------------------------------------------


def forall_exists_candidates(sig: Signature, size: int, outer: int, inner: int):
    """``(space, outer names, inner names, literals)`` for every
    forall-exists conjunction of at most *size* literals in which every
    quantified variable occurs, in canonical order."""
    for a in range(1, outer + 1):
        xs = ["x"] if a == 1 else [f"x{i}" for i in range(1, a + 1)]
        for b in range(1, inner + 1):
            ys = _bound_names(set(xs), b)
            space = LiteralSpace(sig, tuple(xs) + tuple(ys))
            names = set(xs) | set(ys)
            for lits in iter_literal_sets(space, size):
                body = conjunction_formula(space, lits)
                if set(free_variables(body)) == names:
                    yield space, xs, ys, lits


def forall_exists_truth(models: Sequence[FiniteStructure], space: LiteralSpace, xs, ys, lits, tables: dict) -> int:
    truth = 0
    for j, M in enumerate(models):
        key = (j, space.variables, len(xs))
        if key not in tables:
            tables[key] = space.table(M, xs, ys)
        tab = tables[key]
        ok = True
        for i in range(M.size ** len(xs)):
            m = full_mask(M, len(ys))
            for li in lits:
                m &= tab[li][i]
            if not m:
                ok = False
                break
        if ok:
            truth |= 1 << j
    return truth


@dataclass
class HullReport:
    theory: TheorySpec
    bounds: dict
    ec_structures: list[FiniteStructure]
    sentences: list[Formula]
    evidence: list[dict]
    vacuous: bool
    candidates: int = 0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "theory": self.theory.render(),
            "bounds": self.bounds,
            "vacuous": self.vacuous,
            "ec_structures": [render_structure(M) for M in self.ec_structures],
            "candidates": self.candidates,
            "sentences": [
                dict(ev, sentence=render_formula(s)) for s, ev in zip(self.sentences, self.evidence)
            ],
        }


def ec_structures(T: TheorySpec, n: int, r: int = 1, budget: int = DEFAULT_BUDGET) -> list[FiniteStructure]:
    """Models of the universal axioms of T with at most n elements that pass
    :func:`is_ec` at rank r and embed in a model of T of size at most n."""
    universal = T.universal_theory()
    full = enumerate_models(T, n, budget) if universal.axioms != T.axioms else None
    out = []
    for M in enumerate_models(universal, n, budget):
        if full is not None and not any(M.size <= N.size and enumerate_embeddings(M, N) for N in full):
            continue
        if is_ec(M, T, r=r, budget=budget).verdict:
            out.append(M)
    return out


def kaiser_hull_enumerate(
    T: TheorySpec,
    size: int = 2,
    n: int = 4,
    r: int = 1,
    outer: int = 1,
    inner: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> HullReport:
    """Forall-exists sentences (conjunctions of at most *size* literals) true
    in every ec structure of size at most n."""
    found = ec_structures(T, n, r, budget)
    bounds = {"n": n, "rank": r, "sentence_size": size, "outer": outer, "inner": inner}
    if not found:
        return HullReport(T, bounds, [], [], [], True)
    everywhere = (1 << len(found)) - 1
    tables: dict = {}
    sentences, evidence = [], []
    count = 0
    for space, xs, ys, lits in forall_exists_candidates(T.sig, size, outer, inner):
        count += 1
        if forall_exists_truth(found, space, xs, ys, lits, tables) != everywhere:
            continue
        s = forall_exists_sentence(space, xs, ys, lits)
        if classify(s) != Pi(2):
            continue
        sentences.append(s)
        # every ec structure models the universal axioms, so the first one is a model
        evidence.append({"ec_structures": len(found), "model": render_structure(found[0])})
    return HullReport(T, bounds, found, sentences, evidence, False, count)


def valid_universal_sentences(models: Sequence[FiniteStructure], sig: Signature, variables: int, size: int) -> list[Formula]:
    """Universal clause sentences true in all *models*, one per clause."""
    everywhere = (1 << len(models)) - 1
    out = []
    for k in range(1, variables + 1):
        space = LiteralSpace(sig, tuple(_bound_names(set(), k)))
        for lits, truth in universal_clause_truth(models, space, size):
            if truth == everywhere:
                out.append(universal_sentence(space, [lits]))
    return out

