"""Hash-consed hereditarily finite sets.

Every set is interned, so equal sets are the same object and comparisons by
identity are valid.  The canonical order compares rank first and then the
sorted child lists lexicographically.
"""

from __future__ import annotations

import threading
from functools import cached_property
from typing import Iterable

from fmtkit.errors import ResourceError

_TABLE: dict[tuple, "HFSet"] = {}
_LOCK = threading.Lock()


class HFSet:
    """A hereditarily finite set; build with :meth:`of` rather than the constructor."""

    __slots__ = ("children", "rank", "key", "_hash", "__dict__")

    def __init__(self, children: tuple["HFSet", ...], rank: int, key: tuple):
        self.children = children
        self.rank = rank
        self.key = key
        self._hash = hash(key)

    @staticmethod
    def of(elements: Iterable["HFSet"] = ()) -> "HFSet":
        kids = sorted(set(elements), key=lambda s: s.key)
        rank = 1 + max((k.rank for k in kids), default=-1)
        key = (rank, tuple(k.key for k in kids))
        found = _TABLE.get(key)
        if found is not None:
            return found
        with _LOCK:
            found = _TABLE.get(key)
            if found is None:
                found = HFSet(tuple(kids), rank, key)
                _TABLE[key] = found
        return found

    # identity semantics follow from interning
    def __eq__(self, other: object) -> bool:
        return self is other

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "HFSet") -> bool:
        return self.key < other.key

    def __le__(self, other: "HFSet") -> bool:
        return self.key <= other.key

    def __contains__(self, item: "HFSet") -> bool:
        return item in self.member_set

    def __iter__(self):
        return iter(self.children)

    def __len__(self) -> int:
        return len(self.children)

    @cached_property
    def member_set(self) -> frozenset["HFSet"]:
        return frozenset(self.children)

    @cached_property
    def tc(self) -> frozenset["HFSet"]:
        """``tc({a})``: the set together with everything hereditarily in it."""
        out = {self}
        for k in self.children:
            out |= k.tc
        return frozenset(out)

    @property
    def tc_size(self) -> int:
        return len(self.tc)

    def __str__(self) -> str:
        return "{" + ",".join(str(k) for k in self.children) + "}"

    def __repr__(self) -> str:
        return f"HFSet({self})"


EMPTY = HFSet.of()


def singleton(a: HFSet) -> HFSet:
    return HFSet.of([a])


def pair(a: HFSet, b: HFSet) -> HFSet:
    return HFSet.of([a, b])


def ordinal(n: int) -> HFSet:
    """The von Neumann ordinal ``n``."""
    out: list[HFSet] = []
    for _ in range(n):
        out.append(HFSet.of(out))
    return HFSet.of(out)


def parse_hf(text: str) -> HFSet:
    """Parse braces notation such as ``{{},{{}}}`` (spaces allowed)."""
    s = "".join(text.split())
    pos = 0

    def parse() -> HFSet:
        nonlocal pos
        if pos >= len(s) or s[pos] != "{":
            raise ValueError(f"expected '{{' at offset {pos} in {text!r}")
        pos += 1
        kids = []
        if pos < len(s) and s[pos] == "}":
            pos += 1
            return HFSet.of()
        while True:
            kids.append(parse())
            if pos < len(s) and s[pos] == ",":
                pos += 1
                continue
            if pos < len(s) and s[pos] == "}":
                pos += 1
                return HFSet.of(kids)
            raise ValueError(f"expected ',' or '}}' at offset {pos} in {text!r}")

    out = parse()
    if pos != len(s):
        raise ValueError(f"trailing input at offset {pos} in {text!r}")
    return out


MAX_TC_BOUND = 7


def hf_enumerate(tc_bound: int, max_bound: int = MAX_TC_BOUND) -> list[HFSet]:
    """All sets ``a`` with ``|tc({a})| <= tc_bound`` in canonical order."""
    if tc_bound < 1:
        raise ValueError("tc_bound must be at least 1")
    if tc_bound > max_bound:
        raise ResourceError(f"tc_bound {tc_bound} exceeds the cap of {max_bound}")
    return list(_enumerate(tc_bound))


def _enumerate(bound: int) -> tuple[HFSet, ...]:
    if bound == 1:
        return (EMPTY,)
    smaller = _enumerate(bound - 1)
    out: list[HFSet] = []
    chosen: list[HFSet] = []

    # elements of a lie in tc({a}) minus a, so the union of their closures
    # has at most bound - 1 members
    def dfs(start: int, closure: frozenset) -> None:
        out.append(HFSet.of(chosen))
        for i in range(start, len(smaller)):
            x = smaller[i]
            grown = closure | x.tc
            if len(grown) <= bound - 1:
                chosen.append(x)
                dfs(i + 1, grown)
                chosen.pop()

    dfs(0, frozenset())
    return tuple(sorted(set(out)))
