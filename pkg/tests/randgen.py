"""Seeded random formulas and structures for the property and acceptance tests."""

from __future__ import annotations

import itertools
import random

from fmtkit.fol import (
    And, Atom, BoundedExists, BoundedForall, Equals, Exists, Forall, Iff, Implies,
    Member, Not, Or, Signature, Var,
)
from fmtkit.structures import FiniteStructure

VARS = ("x", "y", "z")
GRAPH_P = Signature(predicates=(("edge", 2), ("P", 1)))
SETS_GRAPH = Signature(predicates=(("edge", 2), ("P", 1)), membership=True)


def random_atom(rng: random.Random, sig: Signature, variables=VARS):
    v = lambda: Var(rng.choice(variables))  # noqa: E731
    kinds = ["eq"] + [name for name, _ in sig.predicates] + (["in"] if sig.membership else [])
    kind = rng.choice(kinds)
    if kind == "eq":
        return Equals(v(), v())
    if kind == "in":
        return Member(v(), v())
    arity = dict(sig.predicates)[kind]
    return Atom(kind, tuple(v() for _ in range(arity)))


def random_formula(rng: random.Random, sig: Signature, depth: int = 3, rank: int = 2, bounded: bool = False, variables=VARS):
    """A formula with at most *rank* nested quantifiers; bounded quantifiers
    appear only when *bounded* and the signature has membership."""
    if depth <= 0 or rng.random() < 0.25:
        return random_atom(rng, sig, variables)
    choices = ["not", "and", "or", "imp", "iff"]
    if rank > 0:
        choices += ["ex", "all"] * 2
        if bounded and sig.membership:
            choices += ["bex", "ball"]
    c = rng.choice(choices)
    sub = lambda r=rank: random_formula(rng, sig, depth - 1, r, bounded, variables)  # noqa: E731
    if c == "not":
        return Not(sub())
    if c in ("and", "or", "imp", "iff"):
        return {"and": And, "or": Or, "imp": Implies, "iff": Iff}[c](sub(), sub())
    x = rng.choice(variables)
    if c == "ex":
        return Exists(x, sub(rank - 1))
    if c == "all":
        return Forall(x, sub(rank - 1))
    bound = Var(rng.choice([v for v in variables if v != x] or variables))
    cls = BoundedExists if c == "bex" else BoundedForall
    return cls(x, bound, sub(rank - 1))


def random_structure(rng: random.Random, sig: Signature, size: int, density: float = 0.4) -> FiniteStructure:
    rels = {}
    for name, arity in sig.relation_symbols():
        rels[name] = frozenset(t for t in itertools.product(range(size), repeat=arity) if rng.random() < density)
    return FiniteStructure(sig, size, relations=rels)


def random_graph(rng: random.Random, size: int, density: float = 0.5) -> FiniteStructure:
    from fmtkit.structures import graph

    edges = [(i, j) for i in range(size) for j in range(i + 1, size) if rng.random() < density]
    return graph(size, edges)
