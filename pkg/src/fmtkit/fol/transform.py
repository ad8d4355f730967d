"""Syntactic transformations: free variables, substitution, prenex form,
complexity classification and relativization."""

from __future__ import annotations

from typing import Iterable, Mapping

from fmtkit.fol.syntax import (
    App, And, Atom, BoundedExists, BoundedForall, ComplexityClass, Const,
    DELTA0, Equals, Exists, Forall, Formula, Iff, Implies, Member, Not, Or,
    Term, Var, has_unbounded_quantifier, subformulas, term_vars,
)


def free_variables(f: Formula) -> tuple[str, ...]:
    """Free variables of *f* in order of first occurrence."""
    out: dict[str, None] = {}

    def walk(g: Formula, bound: frozenset[str]) -> None:
        if isinstance(g, Atom):
            for a in g.args:
                _add_term(a, bound)
        elif isinstance(g, (Equals, Member)):
            _add_term(g.left, bound)
            _add_term(g.right, bound)
        elif isinstance(g, Not):
            walk(g.body, bound)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left, bound)
            walk(g.right, bound)
        elif isinstance(g, (Exists, Forall)):
            walk(g.body, bound | {g.var})
        else:
            _add_term(g.bound, bound)
            walk(g.body, bound | {g.var})

    def _add_term(t: Term, bound: frozenset[str]) -> None:
        for v in term_vars(t):
            if v not in bound:
                out.setdefault(v, None)

    walk(f, frozenset())
    return tuple(out)


def all_names(f: Formula) -> set[str]:
    """Every variable name occurring in *f*, free or bound."""
    names: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            for a in g.args:
                names.update(term_vars(a))
        elif isinstance(g, (Equals, Member)):
            names.update(term_vars(g.left))
            names.update(term_vars(g.right))
        elif isinstance(g, (Exists, Forall)):
            names.add(g.var)
        elif isinstance(g, (BoundedExists, BoundedForall)):
            names.add(g.var)
            names.update(term_vars(g.bound))
    return names


class FreshNames:
    """Deterministic supply of ``v0, v1, ...`` avoiding a set of names."""

    def __init__(self, avoid: Iterable[str] = (), prefix: str = "v"):
        self.avoid = set(avoid)
        self.prefix = prefix
        self.i = 0

    def __call__(self) -> str:
        while True:
            name = f"{self.prefix}{self.i}"
            self.i += 1
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def substitute_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Const):
        return t
    return App(t.func, tuple(substitute_term(a, mapping) for a in t.args))


def substitute(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Capture-avoiding simultaneous substitution of terms for free variables."""
    mapping = {k: v for k, v in mapping.items()}
    incoming: set[str] = set()
    for t in mapping.values():
        incoming.update(term_vars(t))
    fresh = FreshNames(all_names(f) | incoming | set(mapping))

    def go(g: Formula, m: dict[str, Term]) -> Formula:
        if not m:
            return g
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(substitute_term(a, m) for a in g.args))
        if isinstance(g, Equals):
            return Equals(substitute_term(g.left, m), substitute_term(g.right, m))
        if isinstance(g, Member):
            return Member(substitute_term(g.left, m), substitute_term(g.right, m))
        if isinstance(g, Not):
            return Not(go(g.body, m))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(go(g.left, m), go(g.right, m))
        bound = substitute_term(g.bound, m) if isinstance(g, (BoundedExists, BoundedForall)) else None
        inner = {k: v for k, v in m.items() if k != g.var}
        var = g.var
        clash = any(var in set(term_vars(t)) for k, t in inner.items() if k in free_variables(g.body))
        if clash:
            new = fresh()
            inner[var] = Var(new)
            var = new
        body = go(g.body, inner)
        if bound is None:
            return type(g)(var, body)
        return type(g)(var, bound, body)

    return go(f, mapping)


def eliminate_iff(f: Formula) -> Formula:
    """Rewrite ``a <-> b`` as ``(a -> b) & (b -> a)``; other nodes kept."""
    if isinstance(f, (Atom, Equals, Member)):
        return f
    if isinstance(f, Not):
        return Not(eliminate_iff(f.body))
    if isinstance(f, Iff):
        a, b = eliminate_iff(f.left), eliminate_iff(f.right)
        return And(Implies(a, b), Implies(b, a))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(eliminate_iff(f.left), eliminate_iff(f.right))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, eliminate_iff(f.body))
    return type(f)(f.var, f.bound, eliminate_iff(f.body))


def unbound_bounded(f: Formula, keep_delta0: bool = False) -> Formula:
    """Replace bounded quantifiers by their unbounded equivalents.

    ``forall x in t A`` becomes ``forall x (x in t -> A)`` and
    ``exists x in t A`` becomes ``exists x (x in t & A)``.  With
    *keep_delta0*, bounded subtrees free of unbounded quantifiers are left
    alone.
    """
    if isinstance(f, (Atom, Equals, Member)):
        return f
    if isinstance(f, Not):
        return Not(unbound_bounded(f.body, keep_delta0))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(unbound_bounded(f.left, keep_delta0), unbound_bounded(f.right, keep_delta0))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, unbound_bounded(f.body, keep_delta0))
    if keep_delta0 and not has_unbounded_quantifier(f):
        return f
    body = unbound_bounded(f.body, keep_delta0)
    guard = Member(Var(f.var), f.bound)
    if isinstance(f, BoundedForall):
        return Forall(f.var, Implies(guard, body))
    return Exists(f.var, And(guard, body))


def rename_bound(f: Formula) -> Formula:
    """Make every binder use a distinct name that is not free in *f*.

    The first binder of a name keeps it when possible; later or clashing
    binders get ``v0, v1, ...`` in pre-order, left to right.
    """
    free = set(free_variables(f))
    fresh = FreshNames(all_names(f))
    used: set[str] = set()

    def go(g: Formula, m: dict[str, str]) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(_ren(a, m) for a in g.args))
        if isinstance(g, Equals):
            return Equals(_ren(g.left, m), _ren(g.right, m))
        if isinstance(g, Member):
            return Member(_ren(g.left, m), _ren(g.right, m))
        if isinstance(g, Not):
            return Not(go(g.body, m))
        if isinstance(g, (And, Or, Implies, Iff)):
            left = go(g.left, m)
            return type(g)(left, go(g.right, m))
        bound = _ren(g.bound, m) if isinstance(g, (BoundedExists, BoundedForall)) else None
        var = g.var
        if var in free or var in used:
            var = fresh()
        used.add(var)
        body = go(g.body, {**m, g.var: var})
        if bound is None:
            return type(g)(var, body)
        return type(g)(var, bound, body)

    def _ren(t: Term, m: dict[str, str]) -> Term:
        return substitute_term(t, {k: Var(v) for k, v in m.items()})

    return go(f, {})


_DUAL = {"A": "E", "E": "A"}


def _pull(f: Formula, unbounded_only: bool) -> tuple[list[tuple[str, str]], Formula]:
    if isinstance(f, (Atom, Equals, Member)):
        return [], f
    if isinstance(f, (BoundedExists, BoundedForall)):
        if unbounded_only and not has_unbounded_quantifier(f):
            return [], f
        return _pull(unbound_bounded(f), unbounded_only)
    if isinstance(f, Not):
        p, m = _pull(f.body, unbounded_only)
        return [(_DUAL[q], v) for q, v in p], Not(m)
    if isinstance(f, (And, Or)):
        pa, ma = _pull(f.left, unbounded_only)
        pb, mb = _pull(f.right, unbounded_only)
        return pa + pb, type(f)(ma, mb)
    if isinstance(f, Implies):
        pa, ma = _pull(f.left, unbounded_only)
        pb, mb = _pull(f.right, unbounded_only)
        return [(_DUAL[q], v) for q, v in pa] + pb, Implies(ma, mb)
    if isinstance(f, Exists):
        p, m = _pull(f.body, unbounded_only)
        return [("E", f.var)] + p, m
    if isinstance(f, Forall):
        p, m = _pull(f.body, unbounded_only)
        return [("A", f.var)] + p, m
    raise TypeError(f"unexpected node {f!r}")  # Iff removed beforehand


def prefix_class(prefix) -> ComplexityClass:
    """Class of a quantifier prefix given as a sequence of "A"/"E" marks."""
    marks = [q for q in prefix]
    if not marks:
        return DELTA0
    blocks = 1
    for a, b in zip(marks, marks[1:]):
        if a != b:
            blocks += 1
    return ComplexityClass("Sigma" if marks[0] == "E" else "Pi", blocks)


def prenex_parts(f: Formula, unbounded_only: bool = False) -> tuple[list[tuple[str, str]], Formula]:
    """Quantifier prefix ``[("A"|"E", var), ...]`` and matrix of *f*."""
    g = rename_bound(eliminate_iff(f))
    return _pull(g, unbounded_only)


def to_prenex(f: Formula, unbounded_only: bool = False) -> tuple[Formula, ComplexityClass]:
    """Prenex form of *f* together with its quantifier-block class.

    With *unbounded_only* bounded quantifiers whose scope has no unbounded
    quantifier stay inside the matrix and do not count as alternations.
    """
    prefix, matrix = prenex_parts(f, unbounded_only)
    out = matrix
    for q, v in reversed(prefix):
        out = Forall(v, out) if q == "A" else Exists(v, out)
    return out, prefix_class([q for q, _ in prefix])


def classify(f: Formula) -> ComplexityClass:
    """``Delta0`` when every quantifier is bounded, else the class of the
    prenex form with Delta0 subformulas kept in the matrix."""
    if not has_unbounded_quantifier(f):
        return DELTA0
    return to_prenex(f, unbounded_only=True)[1]


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def relativize(f: Formula, guard: str) -> Formula:
    """Restrict every unbounded quantifier of *f* to the unary predicate *guard*."""
    for g in subformulas(f):
        if isinstance(g, (Exists, Forall, BoundedExists, BoundedForall)) and g.var == guard:
            raise ValueError(f"guard name {guard!r} is used as a bound variable")

    def go(g: Formula) -> Formula:
        if isinstance(g, (Atom, Equals, Member)):
            return g
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, Exists):
            return Exists(g.var, And(Atom(guard, (Var(g.var),)), go(g.body)))
        if isinstance(g, Forall):
            return Forall(g.var, Implies(Atom(guard, (Var(g.var),)), go(g.body)))
        return type(g)(g.var, g.bound, go(g.body))

    return go(f)


def universal_closure(f: Formula) -> Formula:
    out = f
    for v in reversed(free_variables(f)):
        out = Forall(v, out)
    return out
