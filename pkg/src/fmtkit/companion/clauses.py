"""Literal spaces and bitmask tables for bounded sentence searches.

A literal space fixes variables and the flat atoms over them (relations,
membership, and equalities between distinct terms).  For a structure and a
split of the variables into an outer and an inner block, ``table[l][i]`` is
the bitmask of inner assignments satisfying literal ``l`` at outer
assignment ``i``.  Clauses (disjunctions) and conjunctions of literals are then
evaluated with bitwise operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from fmtkit.errors import PreconditionError
from fmtkit.fol.syntax import (
    Atom, Const, Equals, Exists, Forall, Formula, MEMBERSHIP, Member, Not,
    Signature, Term, Var, conjoin, disjoin,
)
from fmtkit.structures.evaluate import compile_formula
from fmtkit.structures.structure import FiniteStructure


@dataclass(frozen=True)
class LiteralSpace:
    sig: Signature
    variables: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.sig.functions:
            raise PreconditionError("bounded sentence searches need a function-free signature")

    @cached_property
    def terms(self) -> tuple[Term, ...]:
        return tuple(Var(v) for v in self.variables) + tuple(Const(c) for c in self.sig.constants)

    @cached_property
    def atoms(self) -> tuple[Formula, ...]:
        """Atoms mentioning at least one variable, relations first, then equalities."""
        out: list[Formula] = []
        for name, arity in self.sig.relation_symbols():
            for args in itertools.product(self.terms, repeat=arity):
                if arity and not any(isinstance(t, Var) for t in args):
                    continue
                out.append(Member(*args) if name == MEMBERSHIP else Atom(name, args))
        for s, t in itertools.combinations(self.terms, 2):
            if isinstance(s, Var) or isinstance(t, Var):
                out.append(Equals(s, t))
        return tuple(out)

    def literal(self, index: int) -> Formula:
        atom = self.atoms[index // 2]
        return atom if index % 2 == 0 else Not(atom)

    @property
    def literal_count(self) -> int:
        return 2 * len(self.atoms)

    def consistent(self, lits: Sequence[int]) -> bool:
        """No atom occurs with both signs."""
        atoms = [li // 2 for li in lits]
        return len(set(atoms)) == len(atoms)

    def table(self, M: FiniteStructure, outer: Sequence[str], inner: Sequence[str]) -> list[list[int]]:
        outer, inner = tuple(outer), tuple(inner)
        fns = [compile_formula(a) for a in self.atoms]
        outer_rows = list(itertools.product(range(M.size), repeat=len(outer)))
        inner_rows = list(itertools.product(range(M.size), repeat=len(inner)))
        tab = [[0] * len(outer_rows) for _ in range(self.literal_count)]
        env: dict[str, int] = {}
        for i, o in enumerate(outer_rows):
            env.update(zip(outer, o))
            for j, w in enumerate(inner_rows):
                env.update(zip(inner, w))
                bit = 1 << j
                for a, fn in enumerate(fns):
                    if fn(M, env):
                        tab[2 * a][i] |= bit
                    else:
                        tab[2 * a + 1][i] |= bit
        return tab


def full_mask(M: FiniteStructure, inner_count: int) -> int:
    return (1 << (M.size ** inner_count)) - 1


def clause_formula(space: LiteralSpace, lits: Sequence[int]) -> Formula:
    """Disjunction of the literals (``~(v = v)`` for the empty clause)."""
    if not lits:
        return Not(Equals(Var(space.variables[0]), Var(space.variables[0])))
    return disjoin(space.literal(li) for li in lits)


def conjunction_formula(space: LiteralSpace, lits: Sequence[int]) -> Formula:
    return conjoin(space.literal(li) for li in lits)


def close(prefix: str, variables: Sequence[str], body: Formula) -> Formula:
    for v in reversed(tuple(variables)):
        body = Forall(v, body) if prefix == "A" else Exists(v, body)
    return body


def universal_sentence(space: LiteralSpace, clauses: Sequence[Sequence[int]]) -> Formula:
    """``forall vars (C1 & C2 & ...)`` for clauses over *space*."""
    return close("A", space.variables, conjoin(clause_formula(space, c) for c in clauses))


def forall_exists_sentence(space: LiteralSpace, outer: Sequence[str], inner: Sequence[str], lits: Sequence[int]) -> Formula:
    return close("A", outer, close("E", inner, conjunction_formula(space, lits)))


def iter_literal_sets(space: LiteralSpace, max_size: int, min_size: int = 1):
    """Consistent literal index tuples of size ``min_size..max_size`` in size-then-lex order."""
    for s in range(min_size, max_size + 1):
        for combo in itertools.combinations(range(space.literal_count), s):
            if space.consistent(combo):
                yield combo

