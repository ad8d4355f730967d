"""Codes of hereditarily finite sets as pointed well-founded extensional relations.

A code ``(m, R)`` lives on nodes ``0..m-1``; an edge ``(u, v)`` means "u is a
member of v" and node 0 is the coded set.  Decoding is the collapse
``G(v) = {G(u) : (u, v) in R}`` evaluated at 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from fmtkit.errors import InvalidCodeError
from fmtkit.hf.sets import HFSet

CLAUSES = ("domain", "acyclic", "top", "extensional", "reachable")


@dataclass(frozen=True)
class Code:
    m: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, m: int, edges: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "edges", frozenset((int(u), int(v)) for u, v in edges))

    @cached_property
    def sort_key(self) -> tuple:
        return (self.m, tuple(sorted(self.edges)))

    @cached_property
    def preds(self) -> tuple[frozenset[int], ...]:
        """``preds[v]``: nodes u with ``(u, v)`` in R."""
        out: list[set[int]] = [set() for _ in range(max(self.m, 0))]
        for u, v in self.edges:
            if 0 <= v < self.m:
                out[v].add(u)
        return tuple(frozenset(s) for s in out)

    def __str__(self) -> str:
        return render_code(self)


def render_code(c: Code) -> str:
    return f"{c.m}; edges: " + ", ".join(f"({u},{v})" for u, v in sorted(c.edges))


def parse_code(text: str) -> Code:
    """Parse ``"m; edges: (u,v), ..."`` (the edge list may be empty)."""
    m = re.fullmatch(r"\s*(\d+)\s*;\s*edges\s*:\s*(.*?)\s*", text, re.S)
    if m is None:
        raise ValueError(f"cannot parse code {text!r}; expected 'm; edges: (u,v), ...'")
    body = m.group(2)
    edges = []
    pos = 0
    for em in re.finditer(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", body):
        if body[pos:em.start()].strip(" ,\t\n"):
            raise ValueError(f"unexpected text {body[pos:em.start()]!r} in edge list")
        edges.append((int(em.group(1)), int(em.group(2))))
        pos = em.end()
    if body[pos:].strip(" ,\t\n"):
        raise ValueError(f"unexpected text {body[pos:]!r} in edge list")
    return Code(int(m.group(1)), edges)


# -- validity -------------------------------------------------------------------


def _find_cycle(c: Code) -> list[int] | None:
    succ: dict[int, list[int]] = {v: [] for v in range(c.m)}
    for u, v in sorted(c.edges):
        succ[u].append(v)
    color = [0] * c.m  # 0 new, 1 on stack, 2 done
    stack: list[int] = []

    def visit(v: int) -> list[int] | None:
        color[v] = 1
        stack.append(v)
        for w in succ[v]:
            if color[w] == 1:
                return stack[stack.index(w):] + [w]
            if color[w] == 0:
                found = visit(w)
                if found:
                    return found
        stack.pop()
        color[v] = 2
        return None

    for v in range(c.m):
        if color[v] == 0:
            found = visit(v)
            if found:
                return found
    return None


def wfe_violations(c: Code) -> list[tuple[str, str]]:
    """Failed validity clauses as ``(clause, explanation)``, in clause order."""
    if c.m < 1:
        return [("domain", "domain size must be at least 1")]
    bad = [(u, v) for u, v in c.edges if not (0 <= u < c.m and 0 <= v < c.m)]
    if bad:
        return [("domain", f"edges {sorted(bad)} leave the domain 0..{c.m - 1}")]
    out: list[tuple[str, str]] = []
    cycle = _find_cycle(c)
    if cycle:
        out.append(("acyclic", "cycle " + " -> ".join(str(v) for v in cycle)))
    top_out = sorted(v for u, v in c.edges if u == 0)
    if top_out:
        out.append(("top", f"top node 0 has outgoing edges to {top_out}"))
    seen: dict[frozenset[int], int] = {}
    for v in range(c.m):
        p = c.preds[v]
        if p in seen:
            out.append(("extensional", f"nodes {seen[p]} and {v} have the same predecessors {sorted(p)}"))
            break
        seen[p] = v
    reach = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for u in c.preds[v]:
            if u not in reach:
                reach.add(u)
                frontier.append(u)
    missing = sorted(set(range(c.m)) - reach)
    if missing:
        out.append(("reachable", f"nodes {missing} do not lead to the top node"))
    return out


def is_wfe(c: Code) -> bool:
    return not wfe_violations(c)


def require_wfe(c: Code) -> None:
    bad = wfe_violations(c)
    if bad:
        clauses = tuple(k for k, _ in bad)
        raise InvalidCodeError("invalid code: " + "; ".join(f"{k}: {msg}" for k, msg in bad), clauses)


# -- collapse and canonical codes -------------------------------------------------


def _topological(c: Code) -> list[int]:
    indeg = [len(c.preds[v]) for v in range(c.m)]
    succ: dict[int, list[int]] = {v: [] for v in range(c.m)}
    for u, v in c.edges:
        succ[u].append(v)
    ready = sorted(v for v in range(c.m) if indeg[v] == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in sorted(succ[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort()
    return order


def collapse(c: Code) -> list[HFSet]:
    """``G(v)`` for every node, computed bottom-up."""
    require_wfe(c)
    g: list[HFSet | None] = [None] * c.m
    for v in _topological(c):
        g[v] = HFSet.of(g[u] for u in c.preds[v])
    return g  # type: ignore[return-value]


def decode(c: Code) -> HFSet:
    return collapse(c)[0]


def encode(a: HFSet) -> Code:
    """Canonical code: node 0 is *a*, the rest of ``tc({a})`` in canonical order."""
    rest = sorted(x for x in a.tc if x is not a)
    nodes = [a] + rest
    label = {x: i for i, x in enumerate(nodes)}
    edges = [(label[y], label[x]) for x in nodes for y in x.children]
    return Code(len(nodes), edges)


# -- isomorphism-based equality and membership ---------------------------------------


def code_invariant(c: Code) -> tuple:
    indeg = sorted(len(p) for p in c.preds)
    outdeg = [0] * c.m
    for u, _ in c.edges:
        outdeg[u] += 1
    return (c.m, len(c.edges), tuple(indeg), tuple(sorted(outdeg)))


def pointed_isomorphism(r: Code, s: Code) -> tuple[int, ...] | None:
    """A bijection ``f`` with ``f(0) = 0`` and ``(u,v) in R <-> (f(u),f(v)) in S``."""
    if r.m != s.m or len(r.edges) != len(s.edges):
        return None
    m = r.m
    r_in = [len(p) for p in r.preds]
    s_in = [len(p) for p in s.preds]
    img = [-1] * m
    used = [False] * m

    def ok(v: int) -> bool:
        for u in range(m):
            if img[u] < 0:
                continue
            if ((u, v) in r.edges) != ((img[u], img[v]) in s.edges):
                return False
            if ((v, u) in r.edges) != ((img[v], img[u]) in s.edges):
                return False
        return True

    def dfs(v: int) -> bool:
        if v == m:
            return True
        for w in range(m):
            if used[w] or r_in[v] != s_in[w] or (v == 0) != (w == 0):
                continue
            img[v] = w
            used[w] = True
            if ok(v) and dfs(v + 1):
                return True
            used[w] = False
            img[v] = -1
        return False

    return tuple(img) if dfs(0) else None


def subcode(s: Code, alpha: int) -> Code:
    """Restriction of *s* to the nodes with a path to *alpha*, with *alpha* on top.

    Nodes are renumbered: alpha becomes 0, the others keep their relative order.
    """
    reach = {alpha}
    frontier = [alpha]
    while frontier:
        v = frontier.pop()
        for u in s.preds[v]:
            if u not in reach:
                reach.add(u)
                frontier.append(u)
    order = [alpha] + sorted(reach - {alpha})
    label = {x: i for i, x in enumerate(order)}
    return Code(len(order), [(label[u], label[v]) for u, v in s.edges if u in reach and v in reach])


def codes_equal(r: Code, s: Code, method: str = "iso") -> bool:
    """Whether two valid codes denote the same set.

    ``method="iso"`` looks for a pointed isomorphism; ``"collapse"``
    compares the decoded sets.
    """
    require_wfe(r)
    require_wfe(s)
    if method == "collapse":
        return decode(r) is decode(s)
    if method != "iso":
        raise ValueError(f"unknown method {method!r}")
    return pointed_isomorphism(r, s) is not None


def codes_member(r: Code, s: Code, method: str = "iso") -> bool:
    """Whether the set coded by *r* is a member of the set coded by *s*.

    ``method="iso"`` tests *r* against the sub-codes of *s* below each
    predecessor of the top; ``"collapse"`` decodes both sides.
    """
    require_wfe(r)
    require_wfe(s)
    if method == "collapse":
        return decode(r) in decode(s)
    if method != "iso":
        raise ValueError(f"unknown method {method!r}")
    return any(pointed_isomorphism(r, subcode(s, a)) is not None for a in sorted(s.preds[0]))


# -- enumeration ------------------------------------------------------------------------


def candidate_pairs(m: int) -> list[tuple[int, int]]:
    """Edges that may occur in a valid code on m nodes (no loops, none leaving node 0)."""
    return [(u, v) for u in range(1, m) for v in range(m) if u != v]


def iter_valid_codes(m: int) -> Iterable[Code]:
    """Valid codes with exactly m nodes, ordered by their edge bitmask.

    Pairs ``(0, v)`` and loops ``(v, v)`` can never occur in a valid code, so
    only the remaining ``(m-1)**2`` pairs are varied.
    """
    pairs = candidate_pairs(m)
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        c = Code(m, edges)
        if _quick_valid(c):
            yield c


def _quick_valid(c: Code) -> bool:
    preds = c.preds
    if len(set(preds)) != c.m:
        return False
    return is_wfe(c)


def valid_code_count(m: int) -> int:
    return sum(1 for _ in iter_valid_codes(m))

