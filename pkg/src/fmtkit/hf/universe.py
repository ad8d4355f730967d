"""The universe of all valid codes up to a domain bound, and the check that
its quotient by code equality is the hereditarily finite sets under membership.

Code equality and membership in :class:`CodeUniverse` are computed with the
isomorphism route (pointed isomorphisms and sub-codes); decoding by collapse
is only used on the other side of the comparison.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from functools import cached_property

from fmtkit.errors import ResourceError
from fmtkit.hf.codes import (
    Code, code_invariant, decode, iter_valid_codes, pointed_isomorphism, subcode,
)
from fmtkit.hf.sets import HFSet, hf_enumerate

DEFAULT_MAX_M = 5


def max_m() -> int:
    return int(os.environ.get("FMTKIT_MAX_M", DEFAULT_MAX_M))


@dataclass
class CodeUniverse:
    """All valid codes with at most ``m`` nodes, in (size, edge bitmask) order.

    ``classes[i]`` is the equality class of code ``i`` (classes numbered by
    first occurrence) and ``member_pairs`` holds the index pairs ``(i, j)``
    with code i a member of code j.
    """

    m: int
    codes: list[Code]
    classes: list[int] = field(default_factory=list)
    member_pairs: frozenset[tuple[int, int]] = frozenset()

    @cached_property
    def index(self) -> dict[Code, int]:
        return {c: i for i, c in enumerate(self.codes)}

    def equal(self, i: int, j: int) -> bool:
        return self.classes[i] == self.classes[j]

    def member(self, i: int, j: int) -> bool:
        return (i, j) in self.member_pairs

    def find(self, code: Code) -> int:
        """Index of a code equal to *code* (the code itself if present)."""
        if code in self.index:
            return self.index[code]
        for i in self._buckets.get(code_invariant(code), ()):
            if pointed_isomorphism(code, self.codes[i]) is not None:
                return i
        raise KeyError(f"no code equal to {code} in the universe")

    @cached_property
    def _buckets(self) -> dict[tuple, list[int]]:
        out: dict[tuple, list[int]] = {}
        for i, c in enumerate(self.codes):
            out.setdefault(code_invariant(c), []).append(i)
        return out

    @property
    def class_count(self) -> int:
        return len(set(self.classes))


def enumerate_wfe(m: int, cap: int | None = None) -> CodeUniverse:
    """Every valid code with ``1..m`` nodes, with equality and membership."""
    cap = max_m() if cap is None else cap
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > cap:
        raise ResourceError(f"m = {m} exceeds the cap of {cap}")
    codes = [c for size in range(1, m + 1) for c in iter_valid_codes(size)]
    u = CodeUniverse(m, codes)
    u.classes = _iso_classes(u)
    u.member_pairs = _member_pairs(u)
    return u


def _iso_classes(u: CodeUniverse) -> list[int]:
    classes = [-1] * len(u.codes)
    reps: dict[tuple, list[int]] = {}  # invariant -> indices of class representatives
    next_id = 0
    for i, c in enumerate(u.codes):
        bucket = reps.setdefault(code_invariant(c), [])
        for r in bucket:
            if pointed_isomorphism(c, u.codes[r]) is not None:
                classes[i] = classes[r]
                break
        else:
            classes[i] = next_id
            next_id += 1
            bucket.append(i)
    return classes


def _member_pairs(u: CodeUniverse) -> frozenset[tuple[int, int]]:
    by_class: dict[int, list[int]] = {}
    for i, k in enumerate(u.classes):
        by_class.setdefault(k, []).append(i)
    pairs = set()
    for j, s in enumerate(u.codes):
        for alpha in sorted(s.preds[0]):
            i = u.find(subcode(s, alpha))
            for i2 in by_class[u.classes[i]]:
                pairs.add((i2, j))
    return frozenset(pairs)


@dataclass
class CodingReport:
    bound: int
    code_count: int
    class_count: int
    hf_count: int
    equivalence: bool
    congruence: bool
    bijection: bool
    membership_preserved: bool
    mismatches: list[str]
    elapsed: float

    @property
    def isomorphic(self) -> bool:
        return self.equivalence and self.congruence and self.bijection and self.membership_preserved and not self.mismatches

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "code_count": self.code_count,
            "class_count": self.class_count,
            "hf_count": self.hf_count,
            "equivalence": self.equivalence,
            "congruence": self.congruence,
            "bijection": self.bijection,
            "membership_preserved": self.membership_preserved,
            "isomorphic": self.isomorphic,
            "mismatches": self.mismatches,
            "elapsed": round(self.elapsed, 3),
        }


def verify_coding_isomorphism(m: int, cap: int | None = None, max_listed: int = 20) -> CodingReport:
    """Check that codes modulo equality, with code membership, match the
    hereditarily finite sets of closure size <= m under membership."""
    start = time.perf_counter()
    u = enumerate_wfe(m, cap)
    mismatches: list[str] = []

    def note(msg: str) -> None:
        if len(mismatches) < max_listed:
            mismatches.append(msg)

    # (i) equality is an equivalence: checked pairwise inside invariant buckets,
    # and codes in different buckets are never isomorphic
    equivalence = True
    for bucket in u._buckets.values():
        for a in bucket:
            for b in bucket:
                rel = pointed_isomorphism(u.codes[a], u.codes[b]) is not None
                if rel != u.equal(a, b):
                    equivalence = False
                    note(f"equality of codes {a} and {b} is not transitive/symmetric")
    # (ii) membership respects equality
    congruence = True
    members_by_class: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for i, j in u.member_pairs:
        members_by_class.setdefault((u.classes[i], u.classes[j]), set()).add((i, j))
    sizes: dict[int, int] = {}
    for k in u.classes:
        sizes[k] = sizes.get(k, 0) + 1
    for (ki, kj), pairs in members_by_class.items():
        if len(pairs) != sizes[ki] * sizes[kj]:
            congruence = False
            note(f"membership between classes {ki} and {kj} depends on representatives")
    # (iii) the quotient map to decoded sets
    decoded = [decode(c) for c in u.codes]
    image: dict[int, HFSet] = {}
    bijection = True
    for i, k in enumerate(u.classes):
        if k in image and image[k] is not decoded[i]:
            bijection = False
            note(f"class {k} decodes to both {image[k]} and {decoded[i]}")
        image.setdefault(k, decoded[i])
    targets = hf_enumerate(m)
    if len(set(image.values())) != len(image):
        bijection = False
        note("two classes decode to the same set")
    if set(image.values()) != set(targets):
        bijection = False
        missing = sorted(set(targets) - set(image.values()))
        extra = sorted(set(image.values()) - set(targets))
        note(f"image differs from the enumerated sets: missing {[str(x) for x in missing]}, extra {[str(x) for x in extra]}")
    membership_preserved = True
    reps = {}
    for i, k in enumerate(u.classes):
        reps.setdefault(k, i)
    for ki, i in reps.items():
        for kj, j in reps.items():
            if u.member(i, j) != (image[ki] in image[kj]):
                membership_preserved = False
                note(f"membership of {image[ki]} in {image[kj]} not mirrored by codes {i}, {j}")
    return CodingReport(
        m, len(u.codes), u.class_count, len(targets), equivalence, congruence, bijection,
        membership_preserved, mismatches, time.perf_counter() - start,
    )
