"""Brute-force reference implementations used only by the tests.

None of these import the package's algorithms; they work on plain Python
frozensets, tuples and networkx graphs.
"""

from __future__ import annotations

import itertools

import networkx as nx


# -- hereditarily finite sets ----------------------------------------------------------------


def tc_with_self(a: frozenset) -> frozenset:
    out = {a}
    stack = [a]
    while stack:
        x = stack.pop()
        for y in x:
            if y not in out:
                out.add(y)
                stack.append(y)
    return frozenset(out)


def hf_sets(m: int) -> set[frozenset]:
    """All sets a with |tc({a})| <= m.  Such a set has at most m-1 members,
    each again of closure size <= m-1."""
    if m < 1:
        return set()
    if m == 1:
        return {frozenset()}
    smaller = hf_sets(m - 1)
    out = set()
    pool = sorted(smaller, key=lambda s: (len(tc_with_self(s)), repr(sorted(map(repr, s)))))
    for k in range(0, m):
        for members in itertools.combinations(pool, k):
            a = frozenset(members)
            if len(tc_with_self(a)) <= m:
                out.add(a)
    return out


# -- codes by brute force over all relations -----------------------------------------------------


def all_relations(m: int):
    pairs = [(u, v) for u in range(m) for v in range(m)]
    for mask in range(1 << len(pairs)):
        yield frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)


def naive_valid(m: int, edges: frozenset) -> bool:
    preds = [frozenset(u for u, v in edges if v == w) for w in range(m)]
    if any(u == 0 for u, _ in edges):
        return False
    if len(set(preds)) != m:
        return False
    # acyclic: repeatedly strip nodes with no remaining predecessors
    alive = set(range(m))
    while True:
        leaves = {w for w in alive if not (preds[w] & alive)}
        if not leaves:
            break
        alive -= leaves
    if alive:
        return False
    # every node reaches 0 along edges
    reach = {0}
    changed = True
    while changed:
        changed = False
        for u, v in edges:
            if v in reach and u not in reach:
                reach.add(u)
                changed = True
    return reach == set(range(m))


def naive_collapse(m: int, edges: frozenset, node: int = 0) -> frozenset:
    return frozenset(naive_collapse(m, edges, u) for u, v in edges if v == node)


def brute_codes(m: int) -> list[tuple[int, frozenset]]:
    """Valid codes with exactly m nodes found by testing every relation on m nodes."""
    return [(m, e) for e in all_relations(m) if naive_valid(m, e)]


# -- graphs ----------------------------------------------------------------------------------------


def atlas(max_order: int) -> list[nx.Graph]:
    return [g for g in nx.graph_atlas_g() if 1 <= g.number_of_nodes() <= max_order]


def is_n_ec(g: nx.Graph, n: int) -> bool:
    """Every disjoint A, B with |A| + |B| = n admits z adjacent to all of A
    and to none of B."""
    nodes = list(g.nodes)
    for a_size in range(n + 1):
        for A in itertools.combinations(nodes, a_size):
            rest = [v for v in nodes if v not in A]
            for B in itertools.combinations(rest, n - a_size):
                if not any(all(g.has_edge(z, a) for a in A) and not any(g.has_edge(z, b) for b in B) for z in nodes):
                    return False
    return True


def graph_edges(g: nx.Graph) -> list[tuple[int, int]]:
    index = {v: i for i, v in enumerate(g.nodes)}
    return [(index[u], index[v]) for u, v in g.edges]


# -- one-variable existential formulas --------------------------------------------------------------


def exists_one_literal(edges: set, size: int, params: dict[str, int]):
    """Truth of every ``exists y L`` with L a single literal over edge and
    equality, with y and the named parameters as terms; keyed by text."""
    terms = ["y"] + sorted(params)
    out = {}
    for s, t in itertools.product(terms, repeat=2):
        if "y" not in (s, t):
            continue
        for neg in (False, True):
            val = any(
                ((( _v(s, y, params), _v(t, y, params)) in edges) != neg)
                for y in range(size)
            )
            out[("~" if neg else "") + f"edge({s},{t})"] = val
    for p in sorted(params):
        for neg in (False, True):
            out[("~" if neg else "") + f"y={p}"] = any((y == params[p]) != neg for y in range(size))
    return out


def _v(term: str, y: int, params: dict[str, int]) -> int:
    return y if term == "y" else params[term]


# -- naive first-order evaluation ---------------------------------------------------------------------


def naive_eval(f, size: int, rels: dict[str, set], env: dict[str, int] | None = None) -> bool:
    """Direct recursive evaluation of a relational formula (variables only,
    no function symbols) by walking the tree; shares no code with the
    compiled evaluator."""
    env = env or {}
    kind = type(f).__name__
    if kind == "Atom":
        return tuple(env[a.name] for a in f.args) in rels[f.pred]
    if kind == "Equals":
        return env[f.left.name] == env[f.right.name]
    if kind == "Not":
        return not naive_eval(f.body, size, rels, env)
    if kind in ("And", "Or", "Implies", "Iff"):
        a = naive_eval(f.left, size, rels, env)
        b = naive_eval(f.right, size, rels, env)
        return {"And": a and b, "Or": a or b, "Implies": (not a) or b, "Iff": a == b}[kind]
    if kind in ("Exists", "Forall"):
        vals = (naive_eval(f.body, size, rels, {**env, f.var: d}) for d in range(size))
        return any(vals) if kind == "Exists" else all(vals)
    raise TypeError(f"naive_eval does not handle {kind}")


def nx_relations(g: nx.Graph) -> tuple[int, dict[str, set]]:
    edges = set()
    for u, v in graph_edges(g):
        edges |= {(u, v), (v, u)}
    return g.number_of_nodes(), {"edge": edges}
