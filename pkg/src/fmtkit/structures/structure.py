"""Finite structures over a signature and their plain-text file format.

File format, one clause per symbol::

    size 4; pred edge = {(0,1),(1,0),(1,2),(2,1)}; const c = 0;
    func f = {(0,1),(1,2),(2,0),(3,3)}; membership = {(0,1)};

Function clauses list graph tuples ``(args..., value)``.  When no signature
is supplied, predicate arities are read from ``pred name/arity = ...`` or
inferred from the tuples.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from fmtkit.errors import StructureError
from fmtkit.fol.syntax import MEMBERSHIP, Signature


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    """Universe ``0..size-1`` with interpretations of every symbol.

    ``relations`` holds each predicate (and ``"in"`` when the signature has
    membership) as a frozenset of tuples; ``functions`` maps argument tuples
    to values and must be total.
    """

    sig: Signature
    size: int
    constants: Mapping[str, int] = field(default_factory=dict)
    functions: Mapping[str, Mapping[tuple[int, ...], int]] = field(default_factory=dict)
    relations: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = self.size
        if n < 0:
            raise StructureError("negative universe size")
        rels = {}
        for name, arity in self.sig.relation_symbols():
            tuples = frozenset(tuple(t) for t in self.relations.get(name, ()))
            for t in tuples:
                if len(t) != arity or any(not (0 <= x < n) for x in t):
                    raise StructureError(f"bad tuple {t} for {name}/{arity} on universe of size {n}")
            rels[name] = tuples
        extra = set(self.relations) - set(rels)
        if extra:
            raise StructureError(f"relations not in signature: {sorted(extra)}")
        consts = {}
        for c in self.sig.constants:
            if c not in self.constants:
                raise StructureError(f"constant {c!r} not interpreted")
            v = int(self.constants[c])
            if not 0 <= v < n:
                raise StructureError(f"constant {c!r} = {v} outside universe")
            consts[c] = v
        funcs = {}
        for fname, arity in self.sig.functions:
            table = self.functions.get(fname)
            if table is None:
                raise StructureError(f"function {fname!r} not interpreted")
            table = {tuple(k): int(v) for k, v in table.items()}
            for args in itertools.product(range(n), repeat=arity):
                if args not in table:
                    raise StructureError(f"function {fname!r} undefined at {args}")
                if not 0 <= table[args] < n:
                    raise StructureError(f"function {fname!r} leaves the universe at {args}")
            funcs[fname] = table
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constants", consts)
        object.__setattr__(self, "functions", funcs)

    # -- identity --
    @cached_property
    def key(self) -> tuple:
        return (
            self.sig,
            self.size,
            tuple(sorted(self.constants.items())),
            tuple((f, tuple(sorted(t.items()))) for f, t in sorted(self.functions.items())),
            tuple((r, tuple(sorted(ts))) for r, ts in sorted(self.relations.items())),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteStructure) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"FiniteStructure({render_structure(self)!r})"

    # -- access --
    @property
    def universe(self) -> range:
        return range(self.size)

    def holds(self, rel: str, tup: tuple[int, ...]) -> bool:
        return tup in self.relations[rel]

    @cached_property
    def members(self) -> dict[int, tuple[int, ...]]:
        """``members[t]`` lists every ``u`` with ``(u, t)`` in the membership relation."""
        out: dict[int, list[int]] = {x: [] for x in range(self.size)}
        for u, t in sorted(self.relations.get(MEMBERSHIP, ())):
            out[t].append(u)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def names_of(self) -> dict[int, tuple[str, ...]]:
        out: dict[int, list[str]] = {x: [] for x in range(self.size)}
        for c, v in sorted(self.constants.items()):
            out[v].append(c)
        return {k: tuple(v) for k, v in out.items()}

    # -- derived structures --
    def relabel(self, perm: Sequence[int]) -> "FiniteStructure":
        """Structure whose element ``i`` is this structure's ``perm[i]``."""
        inv = {old: new for new, old in enumerate(perm)}
        return FiniteStructure(
            self.sig,
            self.size,
            {c: inv[v] for c, v in self.constants.items()},
            {f: {tuple(inv[a] for a in k): inv[v] for k, v in t.items()} for f, t in self.functions.items()},
            {r: frozenset(tuple(inv[a] for a in tup) for tup in ts) for r, ts in self.relations.items()},
        )

    def restrict(self, subset: Iterable[int]) -> tuple["FiniteStructure", tuple[int, ...]]:
        """Induced substructure on *subset* (renumbered in increasing order).

        Returns the substructure and the tuple of original elements.  The
        subset must contain every constant and be closed under functions.
        """
        elems = tuple(sorted(set(subset)))
        inv = {old: new for new, old in enumerate(elems)}
        for c, v in self.constants.items():
            if v not in inv:
                raise StructureError(f"subset misses constant {c!r}")
        funcs = {}
        for f, table in self.functions.items():
            sub = {}
            for k, v in table.items():
                if all(a in inv for a in k):
                    if v not in inv:
                        raise StructureError(f"subset not closed under {f!r}")
                    sub[tuple(inv[a] for a in k)] = inv[v]
            funcs[f] = sub
        rels = {
            r: frozenset(tuple(inv[a] for a in t) for t in ts if all(a in inv for a in t))
            for r, ts in self.relations.items()
        }
        return FiniteStructure(self.sig, len(elems), {c: inv[v] for c, v in self.constants.items()}, funcs, rels), elems

    def expand(self, sig: Signature, constants=None, functions=None, relations=None) -> "FiniteStructure":
        """Same universe over a larger signature with extra interpretations."""
        return FiniteStructure(
            sig,
            self.size,
            {**self.constants, **(constants or {})},
            {**self.functions, **(functions or {})},
            {**self.relations, **(relations or {})},
        )

    def reduct(self, sig: Signature) -> "FiniteStructure":
        return FiniteStructure(
            sig,
            self.size,
            {c: self.constants[c] for c in sig.constants},
            {f: self.functions[f] for f, _ in sig.functions},
            {r: self.relations[r] for r, _ in sig.relation_symbols()},
        )


def graph(n: int, edges: Iterable[tuple[int, int]], pred: str = "edge", symmetric: bool = True) -> FiniteStructure:
    """Convenience constructor for (symmetric) graphs."""
    es = set()
    for a, b in edges:
        es.add((a, b))
        if symmetric:
            es.add((b, a))
    return FiniteStructure(Signature(predicates=((pred, 2),)), n, relations={pred: frozenset(es)})


# -- text format ---------------------------------------------------------------

_TUPLE_RE = re.compile(r"\(([^()]*)\)")


def _parse_tuples(text: str) -> list[tuple[int, ...]]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise StructureError(f"expected {{...}}, got {text!r}")
    body = text[1:-1].strip()
    out = []
    pos = 0
    for m in _TUPLE_RE.finditer(body):
        gap = body[pos:m.start()].strip().strip(",").strip()
        if gap:
            raise StructureError(f"unexpected text {gap!r} in tuple list")
        inner = m.group(1).strip()
        out.append(tuple(int(x) for x in inner.split(",")) if inner else ())
        pos = m.end()
    if body[pos:].strip().strip(","):
        raise StructureError(f"unexpected text {body[pos:]!r} in tuple list")
    return out


def parse_structure(text: str, sig: Signature | None = None) -> FiniteStructure:
    """Parse the clause format described in the module docstring."""
    size = None
    consts: dict[str, int] = {}
    funcs: dict[str, dict] = {}
    rels: dict[str, list] = {}
    arities: dict[str, int] = {}
    func_arities: dict[str, int] = {}
    membership = False
    for clause in _split_clauses(text):
        m = re.fullmatch(r"size\s+(\d+)", clause)
        if m:
            size = int(m.group(1))
            continue
        m = re.fullmatch(r"const\s+([A-Za-z_]\w*)\s*=\s*(\d+)", clause)
        if m:
            consts[m.group(1)] = int(m.group(2))
            continue
        m = re.fullmatch(r"(pred|func)\s+([A-Za-z_]\w*)(?:\s*/\s*(\d+))?\s*=\s*(\{.*\})", clause, re.S)
        if m:
            kind, name, ar, body = m.groups()
            tuples = _parse_tuples(body)
            if kind == "pred":
                rels[name] = tuples
                if ar is not None:
                    arities[name] = int(ar)
                elif tuples:
                    arities[name] = len(tuples[0])
                elif sig is None:
                    raise StructureError(f"cannot infer arity of empty predicate {name!r}; write {name}/k")
            else:
                funcs[name] = {t[:-1]: t[-1] for t in tuples}
                if ar is not None:
                    func_arities[name] = int(ar)
                elif tuples:
                    func_arities[name] = len(tuples[0]) - 1
            continue
        m = re.fullmatch(r"membership\s*=\s*(\{.*\})", clause, re.S)
        if m:
            membership = True
            rels[MEMBERSHIP] = _parse_tuples(m.group(1))
            continue
        raise StructureError(f"unrecognised clause {clause!r}")
    if size is None:
        raise StructureError("missing 'size n' clause")
    if sig is None:
        sig = Signature(tuple(consts), tuple(func_arities.items()), tuple(arities.items()), membership)
    return FiniteStructure(sig, size, consts, funcs, {k: frozenset(v) for k, v in rels.items()})


def _split_clauses(text: str) -> list[str]:
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    return [c.strip() for c in " ".join(lines).split(";") if c.strip()]


def _fmt_tuples(ts) -> str:
    return "{" + ",".join("(" + ",".join(str(x) for x in t) + ")" for t in sorted(ts)) + "}"


def render_structure(M: FiniteStructure) -> str:
    parts = [f"size {M.size}"]
    for c in M.sig.constants:
        parts.append(f"const {c} = {M.constants[c]}")
    for f, arity in M.sig.functions:
        graph_ = [k + (v,) for k, v in M.functions[f].items()]
        parts.append(f"func {f}/{arity} = {_fmt_tuples(graph_)}")
    for p, arity in M.sig.predicates:
        parts.append(f"pred {p}/{arity} = {_fmt_tuples(M.relations[p])}")
    if M.sig.membership:
        parts.append(f"membership = {_fmt_tuples(M.relations[MEMBERSHIP])}")
    return "; ".join(parts) + ";"
