"""Tarskian satisfaction over finite structures.

Formulas are compiled once into nested closures (cached per formula) and then
run against any structure with an environment dict.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from fmtkit.errors import EvaluationError
from fmtkit.fol.syntax import (
    App, And, Atom, BoundedExists, BoundedForall, Const, Equals, Exists, Forall,
    Formula, Iff, Implies, MEMBERSHIP, Member, Not, Or, Term, Var, subformulas,
)
from fmtkit.fol.transform import free_variables
from fmtkit.structures.structure import FiniteStructure

Env = dict
_Fn = Callable[[FiniteStructure, Env], bool]
_TermFn = Callable[[FiniteStructure, Env], int]
_MISSING = object()


def _compile_term(t: Term) -> _TermFn:
    if isinstance(t, Var):
        name = t.name
        return lambda M, env: env[name]
    if isinstance(t, Const):
        name = t.name
        return lambda M, env: M.constants[name]
    fname = t.func
    args = [_compile_term(a) for a in t.args]
    if len(args) == 1:
        a0 = args[0]
        return lambda M, env: M.functions[fname][(a0(M, env),)]
    return lambda M, env: M.functions[fname][tuple(a(M, env) for a in args)]


def _quantifier(var: str, body: _Fn, exists: bool, domain) -> _Fn:
    def run(M: FiniteStructure, env: Env) -> bool:
        old = env.get(var, _MISSING)
        try:
            for x in domain(M, env):
                env[var] = x
                if body(M, env) is exists:
                    return exists
            return not exists
        finally:
            if old is _MISSING:
                env.pop(var, None)
            else:
                env[var] = old
    return run


@lru_cache(maxsize=65536)
def compile_formula(f: Formula) -> _Fn:
    """Closure ``fn(M, env) -> bool``; *env* must bind the free variables."""
    if isinstance(f, Atom):
        pred = f.pred
        args = [_compile_term(a) for a in f.args]
        return lambda M, env: tuple(a(M, env) for a in args) in M.relations[pred]
    if isinstance(f, Equals):
        l, r = _compile_term(f.left), _compile_term(f.right)
        return lambda M, env: l(M, env) == r(M, env)
    if isinstance(f, Member):
        l, r = _compile_term(f.left), _compile_term(f.right)
        return lambda M, env: (l(M, env), r(M, env)) in M.relations[MEMBERSHIP]
    if isinstance(f, Not):
        b = compile_formula(f.body)
        return lambda M, env: not b(M, env)
    if isinstance(f, And):
        l, r = compile_formula(f.left), compile_formula(f.right)
        return lambda M, env: l(M, env) and r(M, env)
    if isinstance(f, Or):
        l, r = compile_formula(f.left), compile_formula(f.right)
        return lambda M, env: l(M, env) or r(M, env)
    if isinstance(f, Implies):
        l, r = compile_formula(f.left), compile_formula(f.right)
        return lambda M, env: (not l(M, env)) or r(M, env)
    if isinstance(f, Iff):
        l, r = compile_formula(f.left), compile_formula(f.right)
        return lambda M, env: l(M, env) == r(M, env)
    if isinstance(f, (Exists, Forall)):
        return _quantifier(f.var, compile_formula(f.body), isinstance(f, Exists), lambda M, env: range(M.size))
    bound = _compile_term(f.bound)
    return _quantifier(
        f.var, compile_formula(f.body), isinstance(f, BoundedExists),
        lambda M, env: M.members[bound(M, env)],
    )


def _uses_membership(f: Formula) -> bool:
    return any(isinstance(g, (Member, BoundedExists, BoundedForall)) for g in subformulas(f))


def check_assignment(M: FiniteStructure, f: Formula, a: Mapping[str, int]) -> None:
    for v in free_variables(f):
        if v not in a:
            raise EvaluationError(f"free variable {v!r} is unassigned")
        if not 0 <= a[v] < M.size:
            raise EvaluationError(f"variable {v!r} assigned {a[v]} outside the universe")
    if not M.sig.membership and _uses_membership(f):
        raise EvaluationError("membership or bounded quantifier used but the signature has no membership relation")


def evaluate(M: FiniteStructure, f: Formula, a: Mapping[str, int] | None = None) -> bool:
    """Truth of *f* in *M* under the assignment *a*."""
    a = dict(a or {})
    check_assignment(M, f, a)
    try:
        return compile_formula(f)(M, a)
    except KeyError as exc:
        raise EvaluationError(f"symbol not interpreted in structure: {exc}") from None


def satisfies(M: FiniteStructure, sentences: Sequence[Formula]) -> bool:
    return all(evaluate(M, s) for s in sentences)


def extension(M: FiniteStructure, f: Formula, variables: Sequence[str] | None = None) -> frozenset:
    """Set of tuples (over *variables*, default the free variables) satisfying *f*."""
    vs = tuple(free_variables(f)) if variables is None else tuple(variables)
    missing = set(free_variables(f)) - set(vs)
    if missing:
        raise EvaluationError(f"free variables {sorted(missing)} not listed")
    check_assignment(M, f, {v: 0 for v in vs} if M.size else {})
    fn = compile_formula(f)
    out = []
    for tup in itertools.product(range(M.size), repeat=len(vs)):
        if fn(M, dict(zip(vs, tup))):
            out.append(tup)
    return frozenset(out)
