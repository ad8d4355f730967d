"""Canonical forms of finite structures for isomorphism testing.

The canonical form is the lexicographically least "block string" over all
orderings of the universe, where block ``i`` records the constants naming
position ``i`` and the truth of every relation tuple whose largest position
is ``i``.  The search is exhaustive; it only skips orderings that a colour
refinement or an interchangeable pair of elements shows cannot matter.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from fmtkit.structures.structure import FiniteStructure


def _relations(M: FiniteStructure) -> list[tuple[int, frozenset]]:
    """(arity, tuples) per relation, function graphs included."""
    out = [(arity, M.relations[name]) for name, arity in M.sig.relation_symbols()]
    for fname, arity in M.sig.functions:
        out.append((arity + 1, frozenset(k + (v,) for k, v in M.functions[fname].items())))
    return out


@lru_cache(maxsize=None)
def _position_tuples(arity: int, i: int) -> tuple[tuple[int, ...], ...]:
    """Tuples over ``0..i`` whose maximum is ``i``, in lexicographic order."""
    if arity == 0:
        return ()
    return tuple(t for t in itertools.product(range(i + 1), repeat=arity) if max(t) == i)


def refine_colors(M: FiniteStructure) -> list[int]:
    """Isomorphism-invariant colouring of the universe (iterated refinement)."""
    rels = _relations(M)
    incidence: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(M.size)]
    for ri, (_, tuples) in enumerate(rels):
        for t in tuples:
            for x in set(t):
                incidence[x].append((ri, t))
    keys = [(M.names_of[v],) for v in range(M.size)]
    colors = _rank(keys)
    while True:
        keys = []
        for v in range(M.size):
            sig = sorted(
                (ri, tuple(p for p, x in enumerate(t) if x == v), tuple(colors[x] for x in t))
                for ri, t in incidence[v]
            )
            keys.append((colors[v], tuple(sig)))
        new = _rank(keys)
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _rank(keys: list) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _twin_classes(M: FiniteStructure, colors: list[int]) -> list[int]:
    """Class id per element; elements share a class when swapping them is an automorphism."""
    rels = _relations(M)
    parent = list(range(M.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, w in itertools.combinations(range(M.size), 2):
        if colors[v] != colors[w] or M.names_of[v] or M.names_of[w] or find(v) == find(w):
            continue
        swap = {v: w, w: v}
        if all(
            all(tuple(swap.get(x, x) for x in t) in tuples for t in tuples)
            for _, tuples in rels
        ):
            parent[find(w)] = find(v)
    return [find(x) for x in range(M.size)]


def canonical_form(M: FiniteStructure) -> tuple[tuple, tuple[int, ...]]:
    """``(form, order)``: the canonical form and an ordering achieving it.

    ``order[i]`` is the element of *M* placed at position ``i``; two
    structures over the same signature are isomorphic iff their forms agree.
    """
    n = M.size
    if n == 0:
        return (0, (), ()), ()
    rels = _relations(M)
    colors = refine_colors(M)
    twins = _twin_classes(M, colors)
    slots = sorted(colors)
    best: list | None = None
    best_perm: tuple[int, ...] = ()
    cur: list = []
    perm: list[int] = []
    used = [False] * n

    def block(i: int) -> tuple:
        bits = []
        for arity, tuples in rels:
            for pt in _position_tuples(arity, i):
                bits.append(tuple(perm[p] for p in pt) in tuples)
        return (M.names_of[perm[i]], tuple(bits))

    def dfs(i: int) -> None:
        nonlocal best, best_perm
        if i == n:
            if best is None or cur < best:
                best = list(cur)
                best_perm = tuple(perm)
            return
        tight = best is not None and cur == best[:i]
        tried: set[int] = set()
        for v in range(n):
            if used[v] or colors[v] != slots[i] or twins[v] in tried:
                continue
            tried.add(twins[v])
            perm.append(v)
            blk = block(i)
            if tight and blk > best[i]:
                perm.pop()
                continue
            used[v] = True
            cur.append(blk)
            dfs(i + 1)
            cur.pop()
            used[v] = False
            perm.pop()

    dfs(0)
    # nullary relations belong to no position
    header = tuple(() in tuples for arity, tuples in rels if arity == 0)
    return (n, header, tuple(best)), best_perm


def canonical_structure(M: FiniteStructure) -> FiniteStructure:
    return M.relabel(canonical_form(M)[1])


def is_isomorphic(M: FiniteStructure, N: FiniteStructure) -> bool:
    if M.sig != N.sig or M.size != N.size:
        return False
    return canonical_form(M)[0] == canonical_form(N)[0]
