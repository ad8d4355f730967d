"""Signatures, terms and formula trees for first-order logic.

All node classes are frozen dataclasses, so formulas compare structurally and
can be used as dictionary keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from fmtkit.errors import SignatureError

#: Name under which the membership relation is stored in structures.
MEMBERSHIP = "in"

KEYWORDS = frozenset({"forall", "exists", "in"})


@dataclass(frozen=True)
class Signature:
    """Constants, function symbols and predicate symbols with arities.

    ``membership`` switches on the distinguished binary relation written
    ``x in y``.
    """

    constants: tuple[str, ...] = ()
    functions: tuple[tuple[str, int], ...] = ()
    predicates: tuple[tuple[str, int], ...] = ()
    membership: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "constants", tuple(self.constants))
        object.__setattr__(self, "functions", tuple((n, int(a)) for n, a in self.functions))
        object.__setattr__(self, "predicates", tuple((n, int(a)) for n, a in self.predicates))
        names = list(self.constants) + [n for n, _ in self.functions] + [n for n, _ in self.predicates]
        seen: set[str] = set()
        for name in names:
            if name in seen:
                raise SignatureError(f"symbol {name!r} declared twice")
            if name in KEYWORDS:
                raise SignatureError(f"{name!r} is a reserved word")
            seen.add(name)
        for name, arity in self.functions:
            if arity < 1:
                raise SignatureError(f"function {name!r} needs arity >= 1")
        for name, arity in self.predicates:
            # 0-ary predicates only arise from sentences in Morley expansions
            if arity < 0:
                raise SignatureError(f"predicate {name!r} has negative arity")

    @property
    def function_arity(self) -> dict[str, int]:
        return dict(self.functions)

    @property
    def predicate_arity(self) -> dict[str, int]:
        return dict(self.predicates)

    def relation_symbols(self) -> tuple[tuple[str, int], ...]:
        """Predicates plus the membership relation when enabled."""
        if self.membership:
            return self.predicates + ((MEMBERSHIP, 2),)
        return self.predicates

    def symbols(self) -> frozenset[str]:
        return frozenset(self.constants) | {n for n, _ in self.functions} | {n for n, _ in self.predicates}

    def is_relational(self) -> bool:
        return not self.functions

    def with_constants(self, names) -> "Signature":
        return Signature(self.constants + tuple(names), self.functions, self.predicates, self.membership)

    def with_predicates(self, preds) -> "Signature":
        return Signature(self.constants, self.functions, self.predicates + tuple(preds), self.membership)

    def render(self) -> str:
        parts = [f"const {c};" for c in self.constants]
        parts += [f"func {n}/{a};" for n, a in self.functions]
        parts += [f"pred {n}/{a};" for n, a in self.predicates]
        if self.membership:
            parts.append("membership;")
        return " ".join(parts)


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class App:
    func: str
    args: tuple["Term", ...]


Term = Union[Var, Const, App]


def term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, App):
        for a in t.args:
            yield from term_vars(a)


# -- formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True)
class Member:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class BoundedExists:
    var: str
    bound: Term
    body: "Formula"


@dataclass(frozen=True)
class BoundedForall:
    var: str
    bound: Term
    body: "Formula"


Formula = Union[
    Atom, Equals, Member, Not, And, Or, Implies, Iff,
    Exists, Forall, BoundedExists, BoundedForall,
]

ATOMIC = (Atom, Equals, Member)
BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Exists, Forall)
BOUNDED = (BoundedExists, BoundedForall)


def conjoin(parts) -> Formula:
    """Left-nested conjunction of a non-empty sequence."""
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjoin(parts) -> Formula:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def subformulas(f: Formula) -> Iterator[Formula]:
    """Post-order traversal (children before parents)."""
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, QUANTIFIERS + BOUNDED):
        yield from subformulas(f.body)
    yield f


def has_unbounded_quantifier(f: Formula) -> bool:
    return any(isinstance(g, QUANTIFIERS) for g in subformulas(f))


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, QUANTIFIERS + BOUNDED) for g in subformulas(f))


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, ATOMIC):
        return 0
    if isinstance(f, Not):
        return quantifier_rank(f.body)
    if isinstance(f, BINARY):
        return max(quantifier_rank(f.left), quantifier_rank(f.right))
    return 1 + quantifier_rank(f.body)


def formula_size(f: Formula) -> int:
    """Number of nodes (terms not counted)."""
    return sum(1 for _ in subformulas(f))


@dataclass(frozen=True, order=True)
class ComplexityClass:
    """``Delta0`` (n == 0), ``Sigma(n)`` or ``Pi(n)`` for n >= 1."""

    kind: str
    n: int = field(default=0)

    def __post_init__(self) -> None:
        if self.kind == "Delta0":
            if self.n != 0:
                raise ValueError("Delta0 carries n = 0")
        elif self.kind in ("Sigma", "Pi"):
            if self.n < 1:
                raise ValueError(f"{self.kind}(n) needs n >= 1")
        else:
            raise ValueError(f"unknown complexity class {self.kind!r}")

    def __str__(self) -> str:
        return "Delta0" if self.kind == "Delta0" else f"{self.kind}({self.n})"

    @classmethod
    def parse(cls, text: str) -> "ComplexityClass":
        text = text.strip()
        if text == "Delta0":
            return cls("Delta0")
        kind, _, rest = text.partition("(")
        return cls(kind, int(rest.rstrip(")")))


DELTA0 = ComplexityClass("Delta0")


def Sigma(n: int) -> ComplexityClass:  # noqa: N802 - mirrors the notation
    return ComplexityClass("Sigma", n)


def Pi(n: int) -> ComplexityClass:  # noqa: N802
    return ComplexityClass("Pi", n)
