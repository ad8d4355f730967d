"""Generation of finite models and one-point (or k-point) extensions.

Extensions of a relational structure are produced by a depth-first search
over the "free atoms" (relation tuples touching a new element).  Universal
axioms in prenex form are instantiated over the new tuples and each instance
is checked as soon as the last atom it reads has been decided, which prunes
most of the search for theories such as graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from fmtkit.errors import PreconditionError, ResourceError
from fmtkit.fol.syntax import (
    And, App, Atom, Equals, Formula, Iff, Implies, MEMBERSHIP, Member, Not, Or,
    Signature, Term, is_quantifier_free, subformulas,
)
from fmtkit.fol.transform import prenex_parts
from fmtkit.structures.canon import canonical_form
from fmtkit.structures.evaluate import evaluate
from fmtkit.structures.structure import FiniteStructure
from fmtkit.structures.theory import TheorySpec

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class _Clause:
    """A universal axiom ``forall vars. matrix`` with a quantifier-free matrix."""
    variables: tuple[str, ...]
    matrix: Formula


def _as_clause(ax: Formula) -> _Clause | None:
    prefix, matrix = prenex_parts(ax, unbounded_only=False)
    if any(q != "A" for q, _ in prefix) or not is_quantifier_free(matrix):
        return None
    if _has_function(matrix):
        return None
    return _Clause(tuple(v for _, v in prefix), matrix)


def _has_function(f: Formula) -> bool:
    for g in subformulas(f):
        terms: Sequence[Term] = ()
        if isinstance(g, Atom):
            terms = g.args
        elif isinstance(g, (Equals, Member)):
            terms = (g.left, g.right)
        if any(isinstance(t, App) for t in terms):
            return True
    return False


def _compile_qf(f: Formula) -> tuple[Callable[[Callable, dict], bool], Callable[[dict], list]]:
    """Return ``(truth, reads)`` for a function-free quantifier-free formula.

    ``truth(holds, env)`` evaluates with ``holds(rel, tuple)``; ``reads(env)``
    lists the ``(rel, tuple)`` atoms the formula depends on.
    """
    def val(t: Term):
        name = t.name
        return lambda env: env[name]

    if isinstance(f, (Atom, Member)):
        rel = f.pred if isinstance(f, Atom) else MEMBERSHIP
        args = [val(a) for a in (f.args if isinstance(f, Atom) else (f.left, f.right))]
        return (
            lambda holds, env: holds(rel, tuple(a(env) for a in args)),
            lambda env: [(rel, tuple(a(env) for a in args))],
        )
    if isinstance(f, Equals):
        l, r = val(f.left), val(f.right)
        return (lambda holds, env: l(env) == r(env)), (lambda env: [])
    if isinstance(f, Not):
        t, rd = _compile_qf(f.body)
        return (lambda holds, env: not t(holds, env)), rd
    lt, lr = _compile_qf(f.left)
    rt, rr = _compile_qf(f.right)
    reads = lambda env: lr(env) + rr(env)  # noqa: E731
    if isinstance(f, And):
        return (lambda h, e: lt(h, e) and rt(h, e)), reads
    if isinstance(f, Or):
        return (lambda h, e: lt(h, e) or rt(h, e)), reads
    if isinstance(f, Implies):
        return (lambda h, e: (not lt(h, e)) or rt(h, e)), reads
    if isinstance(f, Iff):
        return (lambda h, e: lt(h, e) == rt(h, e)), reads
    raise TypeError(f"not quantifier-free: {f!r}")


def split_axioms(axioms: Sequence[Formula]) -> tuple[list[_Clause], list[Formula]]:
    """Separate prunable universal clauses from axioms checked on complete structures."""
    clauses, rest = [], []
    for ax in axioms:
        c = _as_clause(ax)
        if c is None:
            rest.append(ax)
        else:
            clauses.append(c)
    return clauses, rest


def extensions(
    M: FiniteStructure,
    k: int,
    axioms: Sequence[Formula] = (),
    budget: int | None = DEFAULT_BUDGET,
) -> Iterator[FiniteStructure]:
    """All structures on ``0..|M|+k-1`` whose restriction to ``0..|M|-1`` is *M*
    and which satisfy *axioms*.

    Order: the free atoms are listed by relation (signature order) and tuple
    (lexicographic); structures come out in increasing order of their truth
    vector with ``False < True``.  Requires a function-free signature.
    """
    sig = M.sig
    if not sig.is_relational():
        raise PreconditionError("extensions need a function-free signature")
    n0, n = M.size, M.size + k
    atoms: list[tuple[str, tuple[int, ...]]] = []
    for name, arity in sig.relation_symbols():
        for t in itertools.product(range(n), repeat=arity):
            if any(x >= n0 for x in t):
                atoms.append((name, t))
    index = {a: i for i, a in enumerate(atoms)}
    state: dict[tuple[str, tuple[int, ...]], bool] = {}

    def holds(rel: str, t: tuple[int, ...]) -> bool:
        a = (rel, t)
        if a in index:
            return state[a]
        return t in M.relations[rel]

    clauses, rest = split_axioms(axioms)
    buckets: list[list] = [[] for _ in range(len(atoms) + 1)]  # bucket 0: no free atom read
    consts = dict(M.constants)
    for cl in clauses:
        truth, reads = _compile_qf(cl.matrix)
        nv = len(cl.variables)
        for tup in itertools.product(range(n), repeat=nv):
            env = dict(consts)
            env.update(zip(cl.variables, tup))
            deps = [index[a] for a in reads(env) if a in index]
            buckets[(max(deps) + 1) if deps else 0].append((truth, env))

    if any(not truth(holds, env) for truth, env in buckets[0]):
        return
    count = 0
    values = [False] * len(atoms)

    def build() -> FiniteStructure:
        rels = {name: set(M.relations[name]) for name, _ in sig.relation_symbols()}
        for (name, t), v in zip(atoms, values):
            if v:
                rels[name].add(t)
        return FiniteStructure(sig, n, consts, {}, {r: frozenset(ts) for r, ts in rels.items()})

    def dfs(i: int) -> Iterator[FiniteStructure]:
        nonlocal count
        if i == len(atoms):
            count += 1
            if budget is not None and count > budget:
                raise ResourceError(f"extension search exceeded budget of {budget} candidates")
            N = build()
            if all(evaluate(N, ax) for ax in rest):
                yield N
            return
        for v in (False, True):
            values[i] = v
            state[atoms[i]] = v
            if all(truth(holds, env) for truth, env in buckets[i + 1]):
                yield from dfs(i + 1)
        del state[atoms[i]]

    yield from dfs(0)


def empty_structure(sig: Signature) -> FiniteStructure:
    return FiniteStructure(sig, 0, {}, {}, {})


def _augmentable(T: TheorySpec) -> bool:
    sig = T.sig
    if sig.functions or sig.constants:
        return False
    # nullary atoms would be frozen by the empty starting structure
    if any(arity == 0 for _, arity in sig.relation_symbols()):
        return False
    return all(_as_clause(ax) is not None for ax in T.universal_fragment)


def enumerate_models(T: TheorySpec, n: int, budget: int = DEFAULT_BUDGET) -> list[FiniteStructure]:
    """One representative per isomorphism class of models of *T* with
    ``1 <= size <= n``, canonically relabelled, ordered by (size, form)."""
    if n < 1:
        raise PreconditionError("size bound must be at least 1")
    if _augmentable(T):
        return _by_augmentation(T, n, budget)
    return _by_brute_force(T, n, budget)


def _by_augmentation(T: TheorySpec, n: int, budget: int) -> list[FiniteStructure]:
    # Every model of the universal clauses of size s+1 has one of size s as a
    # substructure, so one-point extensions of representatives reach all.
    universal = list(T.universal_fragment)
    others = [ax for ax in T.axioms if ax not in set(universal)]
    level = [empty_structure(T.sig)]
    out: list[tuple[tuple, FiniteStructure]] = []
    spent = 0
    for _ in range(n):
        seen: dict[tuple, FiniteStructure] = {}
        for rep in level:
            for N in extensions(rep, 1, universal, budget=None):
                spent += 1
                if spent > budget:
                    raise ResourceError(f"model enumeration exceeded budget of {budget} candidates")
                form, order = canonical_form(N)
                if form not in seen:
                    seen[form] = N.relabel(order)
        level = [seen[f] for f in sorted(seen)]
        out.extend((f, seen[f]) for f in sorted(seen) if all(evaluate(seen[f], ax) for ax in others))
    return [N for _, N in out]


def _all_structures(sig: Signature, size: int) -> Iterator[FiniteStructure]:
    rel_slots = [
        (name, list(itertools.product(range(size), repeat=arity))) for name, arity in sig.relation_symbols()
    ]
    func_slots = [(name, list(itertools.product(range(size), repeat=arity))) for name, arity in sig.functions]
    const_choices = itertools.product(range(size), repeat=len(sig.constants))
    for cs in const_choices:
        consts = dict(zip(sig.constants, cs))
        func_tables = [itertools.product(range(size), repeat=len(args)) for _, args in func_slots]
        for fvals in itertools.product(*[list(t) for t in func_tables]):
            funcs = {name: dict(zip(args, vals)) for (name, args), vals in zip(func_slots, fvals)}
            for rbits in itertools.product(*[itertools.product((False, True), repeat=len(ts)) for _, ts in rel_slots]):
                rels = {
                    name: frozenset(t for t, b in zip(ts, bits) if b)
                    for (name, ts), bits in zip(rel_slots, rbits)
                }
                yield FiniteStructure(sig, size, consts, funcs, rels)


def count_candidates(sig: Signature, size: int) -> int:
    total = size ** len(sig.constants)
    for _, arity in sig.functions:
        total *= size ** (size ** arity)
    for _, arity in sig.relation_symbols():
        total *= 2 ** (size ** arity)
    return total


def _by_brute_force(T: TheorySpec, n: int, budget: int) -> list[FiniteStructure]:
    total = sum(count_candidates(T.sig, s) for s in range(1, n + 1))
    if total > budget:
        raise ResourceError(f"model enumeration needs {total} candidates, budget is {budget}")
    out: list[tuple[tuple, FiniteStructure]] = []
    for size in range(1, n + 1):
        seen: dict[tuple, FiniteStructure] = {}
        for N in _all_structures(T.sig, size):
            if all(evaluate(N, ax) for ax in T.axioms):
                form, order = canonical_form(N)
                if form not in seen:
                    seen[form] = N.relabel(order)
        out.extend((f, seen[f]) for f in sorted(seen))
    return [N for _, N in out]


def models_of(T: TheorySpec, size: int, budget: int = DEFAULT_BUDGET) -> list[FiniteStructure]:
    return [N for N in enumerate_models(T, size, budget) if N.size == size]
