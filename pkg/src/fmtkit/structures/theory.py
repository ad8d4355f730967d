"""Finite theories: a signature plus axiom sentences.

Theory files hold declaration lines (``const``, ``func``, ``pred``,
``membership``) followed by one axiom per line; ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from fmtkit.errors import SignatureError
from fmtkit.fol.parser import is_declaration, parse_formula, parse_signature, render_formula
from fmtkit.fol.syntax import DELTA0, Formula, Pi, Signature
from fmtkit.fol.transform import classify, free_variables


@dataclass(frozen=True)
class TheorySpec:
    sig: Signature
    axioms: tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "axioms", tuple(self.axioms))
        for ax in self.axioms:
            fv = free_variables(ax)
            if fv:
                raise SignatureError(f"axiom {render_formula(ax)!r} has free variables {list(fv)}")

    @cached_property
    def universal_fragment(self) -> tuple[Formula, ...]:
        """Axioms classified ``Pi(1)`` or ``Delta0``."""
        return tuple(ax for ax in self.axioms if classify(ax) in (DELTA0, Pi(1)))

    def universal_theory(self) -> "TheorySpec":
        return TheorySpec(self.sig, self.universal_fragment)

    def with_axioms(self, extra: Sequence[Formula]) -> "TheorySpec":
        return TheorySpec(self.sig, self.axioms + tuple(extra))

    def render(self) -> str:
        lines = [d for d in self.sig.render().split(" ") if d]
        lines += [render_formula(ax) for ax in self.axioms]
        return "\n".join(lines) + "\n"


def parse_theory(text: str) -> TheorySpec:
    decls: list[str] = []
    axiom_lines: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if is_declaration(line):
            decls.append(line)
        else:
            axiom_lines.append(line)
    sig = parse_signature(";".join(decls))
    return TheorySpec(sig, tuple(parse_formula(a, sig) for a in axiom_lines))


def theory_from_strings(sig: Signature | str, axioms: Sequence[str]) -> TheorySpec:
    if isinstance(sig, str):
        sig = parse_signature(sig)
    return TheorySpec(sig, tuple(parse_formula(a, sig) for a in axioms))


GRAPH_SIG = Signature(predicates=(("edge", 2),))


def graph_theory() -> TheorySpec:
    """Irreflexive symmetric binary relation ``edge``."""
    return theory_from_strings(GRAPH_SIG, [
        "forall x ~edge(x, x)",
        "forall x forall y (edge(x, y) -> edge(y, x))",
    ])
