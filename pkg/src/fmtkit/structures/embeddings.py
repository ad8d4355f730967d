"""Embeddings, bounded Sigma-1 elementarity and atomic diagrams.

The Sigma-1 check is schematic: a sentence ``exists y1..yk (L1 & ... & Ls)``
with ``k, s <= rank`` and flat literals ``Li`` over parameters from M is
searched for.  For each literal we precompute the set of k-tuples of M
satisfying it as a bitmask; a conjunction true in N at some tuple fails in M
exactly when the AND of its bitmasks is zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from fmtkit.errors import PreconditionError
from fmtkit.fol.syntax import (
    App, Atom, Const, Equals, Exists, Formula, MEMBERSHIP, Member, Not,
    Signature, Var, conjoin,
)
from fmtkit.structures.structure import FiniteStructure


@dataclass(frozen=True)
class Embedding:
    """Injective map ``i -> images[i]`` from the universe of M into N."""

    images: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __len__(self) -> int:
        return len(self.images)

    def to_json(self) -> list[int]:
        return list(self.images)


def identity(M: FiniteStructure) -> Embedding:
    return Embedding(tuple(range(M.size)))


def is_embedding(M: FiniteStructure, N: FiniteStructure, e: Embedding | Sequence[int]) -> bool:
    img = e.images if isinstance(e, Embedding) else tuple(e)
    if M.sig != N.sig or len(img) != M.size or len(set(img)) != len(img):
        return False
    if any(not 0 <= x < N.size for x in img):
        return False
    for c, v in M.constants.items():
        if N.constants[c] != img[v]:
            return False
    for f, table in M.functions.items():
        ntab = N.functions[f]
        for args, v in table.items():
            if ntab[tuple(img[a] for a in args)] != img[v]:
                return False
    for r, arity in M.sig.relation_symbols():
        mt, nt = M.relations[r], N.relations[r]
        for t in itertools.product(range(M.size), repeat=arity):
            if (t in mt) != (tuple(img[a] for a in t) in nt):
                return False
    return True


def enumerate_embeddings(M: FiniteStructure, N: FiniteStructure) -> list[Embedding]:
    """All embeddings of M into N in lexicographic order of image tuples."""
    if M.sig != N.sig:
        raise PreconditionError("embeddings need structures over the same signature")
    rels = [(M.relations[r], N.relations[r], arity) for r, arity in M.sig.relation_symbols()]
    forced = {v: N.constants[c] for c, v in M.constants.items()}
    # a name per element: elements named by two constants must agree in N
    for c, v in M.constants.items():
        if forced[v] != N.constants[c]:
            return []
    out: list[Embedding] = []
    img: list[int] = []
    used: set[int] = set()

    def consistent(i: int) -> bool:
        for mt, nt, arity in rels:
            for t in itertools.product(range(i + 1), repeat=arity):
                if i not in t:
                    continue
                if (t in mt) != (tuple(img[a] for a in t) in nt):
                    return False
        for f, table in M.functions.items():
            ntab = N.functions[f]
            for args, v in table.items():
                if v <= i and all(a <= i for a in args) and (i == v or i in args):
                    if ntab[tuple(img[a] for a in args)] != img[v]:
                        return False
        return True

    def dfs(i: int) -> None:
        if i == M.size:
            out.append(Embedding(tuple(img)))
            return
        choices = [forced[i]] if i in forced else range(N.size)
        for x in choices:
            if x in used:
                continue
            img.append(x)
            used.add(x)
            if consistent(i):
                dfs(i + 1)
            used.discard(x)
            img.pop()

    dfs(0)
    return out


# -- naming helpers -------------------------------------------------------------


def fresh_prefix(sig: Signature, preferred: str, count: int) -> str:
    """First prefix p (starting with *preferred*) with ``p0..p{count-1}`` unused in *sig*."""
    taken = sig.symbols()
    for p in [preferred] + [f"{preferred}{ch}" for ch in "abcdefghijklmnopqrstuvwxyz"]:
        if not any(f"{p}{i}" in taken for i in range(count)) and p not in taken:
            return p
    raise PreconditionError("could not find fresh names")  # pragma: no cover


def element_names(sig: Signature, n: int) -> list[str]:
    p = fresh_prefix(sig, "c", n)
    return [f"{p}{i}" for i in range(n)]


def variable_names(sig: Signature, k: int) -> list[str]:
    taken = sig.symbols()
    if k == 1 and "y" not in taken:
        return ["y"]
    p = fresh_prefix(sig, "y", k + 1)
    return [f"{p}{i + 1}" for i in range(k)]


# -- atomic diagram -------------------------------------------------------------


def diagram_signature(M: FiniteStructure) -> tuple[Signature, list[str]]:
    names = element_names(M.sig, M.size)
    return M.sig.with_constants(names), names


def atomic_diagram(M: FiniteStructure) -> list[Formula]:
    """Atomic and negated atomic sentences true in M over one new constant per element.

    Order: relation literals (signature order, tuples lexicographic), function
    values ``f(c..) = cj``, constants ``d = ci``, then ``~(ci = cj)`` for
    ``i < j``.  Trivial identities ``ci = ci`` are left out.
    """
    _, names = diagram_signature(M)
    c = [Const(x) for x in names]
    out: list[Formula] = []
    for r, arity in M.sig.relation_symbols():
        for t in itertools.product(range(M.size), repeat=arity):
            args = tuple(c[a] for a in t)
            atom = Member(*args) if r == MEMBERSHIP else Atom(r, args)
            out.append(atom if t in M.relations[r] else Not(atom))
    for f, arity in M.sig.functions:
        for args in itertools.product(range(M.size), repeat=arity):
            out.append(Equals(App(f, tuple(c[a] for a in args)), c[M.functions[f][args]]))
    for name in M.sig.constants:
        out.append(Equals(Const(name), c[M.constants[name]]))
    for i, j in itertools.combinations(range(M.size), 2):
        out.append(Not(Equals(c[i], c[j])))
    return out


def diagram_structure(N: FiniteStructure, M: FiniteStructure, images: Sequence[int]) -> FiniteStructure:
    """N expanded by interpreting M's element constants via *images*."""
    sig, names = diagram_signature(M)
    return N.expand(sig, constants=dict(zip(names, images)))


# -- bounded Sigma-1 elementarity -----------------------------------------------

# a slot is ("p", element of M) or ("y", variable index); flat atoms are
# ("R", relation, slots), ("F", function, slots + result slot), ("E", (s, t))


@dataclass(frozen=True)
class Sigma1Witness:
    """``exists vars (literals)`` true in N but false in M."""

    k: int
    literals: tuple[tuple[tuple, bool], ...]
    formula: Formula
    signature: Signature
    parameters: tuple[tuple[str, int], ...]  # (constant name, element of M)
    realizers: tuple[int, ...]  # the tuple of N witnessing the formula
    key: tuple


@dataclass(frozen=True)
class Sigma1Result:
    verdict: bool
    rank: int
    witness: Sigma1Witness | None = None


class _Level:
    """Literal universe and bitmasks for k existential variables over M."""

    def __init__(self, M: FiniteStructure, k: int):
        self.k = k
        slots = [("p", e) for e in range(M.size)] + [("y", i) for i in range(k)]
        atoms: list[tuple] = []
        for r, arity in M.sig.relation_symbols():
            for args in itertools.product(slots, repeat=arity):
                if any(s[0] == "y" for s in args):
                    atoms.append(("R", r, args))
        for f, arity in M.sig.functions:
            for args in itertools.product(slots, repeat=arity + 1):
                if any(s[0] == "y" for s in args):
                    atoms.append(("F", f, args))
        for s, t in itertools.combinations(slots, 2):
            if s[0] == "y" or t[0] == "y":
                atoms.append(("E", "=", (s, t)))
        self.atoms = atoms
        self.tuples = list(itertools.product(range(M.size), repeat=k))
        full = (1 << len(self.tuples)) - 1
        masks = []
        for atom in atoms:
            m = 0
            for j, ys in enumerate(self.tuples):
                if _atom_true(M, atom, None, ys):
                    m |= 1 << j
            masks.append(m)
        # literal index 2*a is the positive literal, 2*a+1 the negative one
        self.lit_masks = []
        for m in masks:
            self.lit_masks.append(m)
            self.lit_masks.append(full & ~m)


def _slot_value(slot: tuple, emb: Sequence[int] | None, ys: Sequence[int]) -> int:
    if slot[0] == "y":
        return ys[slot[1]]
    return slot[1] if emb is None else emb[slot[1]]


def _atom_true(X: FiniteStructure, atom: tuple, emb: Sequence[int] | None, ys: Sequence[int]) -> bool:
    kind, name, args = atom
    vals = tuple(_slot_value(s, emb, ys) for s in args)
    if kind == "R":
        return vals in X.relations[name]
    if kind == "F":
        return X.functions[name][vals[:-1]] == vals[-1]
    return vals[0] == vals[1]


class Sigma1Checker:
    """Reusable bounded Sigma-1 test for a fixed M and rank."""

    def __init__(self, M: FiniteStructure, rank: int):
        if rank < 1:
            raise PreconditionError("rank must be at least 1")
        self.M = M
        self.rank = rank
        self.levels = [_Level(M, k) for k in range(1, rank + 1)]

    def check(self, N: FiniteStructure, e: Embedding | Sequence[int], minimal: bool = True) -> Sigma1Result:
        """Search for an existential sentence true in N and false in M.

        With *minimal* the least witness is returned: fewest variables, then
        fewest literals, then literal order.  Otherwise the first one found.
        """
        img = e.images if isinstance(e, Embedding) else tuple(e)
        image = set(img)
        best: tuple | None = None
        best_info = None
        for level in self.levels:
            k = level.k
            for ys in itertools.product(range(N.size), repeat=k):
                if all(y in image for y in ys):
                    continue  # such tuples are mirrored in M
                true_lits = []
                for a, atom in enumerate(level.atoms):
                    true_lits.append(2 * a if _atom_true(N, atom, img, ys) else 2 * a + 1)
                found = self._failing_subset(level, true_lits, best if minimal else None)
                if found is not None:
                    key = (k, len(found), found)
                    if best is None or key < best:
                        best, best_info = key, (level, ys)
                    if not minimal:
                        break
            if best is not None:
                break
        if best is None:
            return Sigma1Result(True, self.rank)
        level, ys = best_info
        return Sigma1Result(False, self.rank, self._witness(level, best, ys))

    def _failing_subset(self, level: _Level, lits: list[int], bound: tuple | None) -> tuple[int, ...] | None:
        masks = level.lit_masks
        for s in range(1, self.rank + 1):
            if bound is not None and (level.k, s) > bound[:2]:
                return None
            for combo in itertools.combinations(lits, s):
                acc = masks[combo[0]]
                for li in combo[1:]:
                    acc &= masks[li]
                    if not acc:
                        break
                if not acc:
                    return combo
        return None

    def _witness(self, level: _Level, key: tuple, ys: tuple[int, ...]) -> Sigma1Witness:
        M = self.M
        names = element_names(M.sig, M.size)
        vnames = variable_names(M.sig, level.k)
        used_params: set[int] = set()

        def term(slot):
            if slot[0] == "y":
                return Var(vnames[slot[1]])
            used_params.add(slot[1])
            return Const(names[slot[1]])

        lits = []
        parts = []
        for li in key[2]:
            atom = level.atoms[li // 2]
            positive = li % 2 == 0
            kind, name, args = atom
            if kind == "R":
                ts = tuple(term(s) for s in args)
                f: Formula = Member(*ts) if name == MEMBERSHIP else Atom(name, ts)
            elif kind == "F":
                ts = tuple(term(s) for s in args)
                f = Equals(App(name, ts[:-1]), ts[-1])
            else:
                f = Equals(term(args[0]), term(args[1]))
            parts.append(f if positive else Not(f))
            lits.append((atom, positive))
        body = conjoin(parts)
        for v in reversed(vnames):
            body = Exists(v, body)
        params = tuple((names[e], e) for e in sorted(used_params))
        sig = M.sig.with_constants([p for p, _ in params])
        return Sigma1Witness(level.k, tuple(lits), body, sig, params, tuple(ys), key)


def is_sigma1_elementary(
    M: FiniteStructure, N: FiniteStructure, e: Embedding | Sequence[int], rank: int
) -> Sigma1Result:
    """Bounded test of ``M`` being Sigma-1 elementary in ``N`` along ``e``."""
    if not is_embedding(M, N, e):
        raise PreconditionError("not an embedding")
    return Sigma1Checker(M, rank).check(N, e)
