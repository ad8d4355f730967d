"""Existentially closed structures, Robinson's test, Kaiser hulls and model
companions, all within explicit size and rank bounds."""

from fmtkit.companion.clauses import LiteralSpace
from fmtkit.companion.companion import Check, CompanionReport, model_companion_check
from fmtkit.companion.ec import (
    ChainResult, ECVerdict, RobinsonReport, ec_chain, is_ec, robinson_check,
    universal_violation,
)
from fmtkit.companion.search import (
    EquivalentResult, HullReport, SeparationResult, ec_structures,
    generalize_witness, kaiser_hull_enumerate, pi1_separation_search,
    universal_equivalent_search, valid_universal_sentences,
)

__all__ = [
    "ChainResult", "Check", "CompanionReport", "ECVerdict", "EquivalentResult",
    "HullReport", "LiteralSpace", "RobinsonReport", "SeparationResult",
    "ec_chain", "ec_structures", "generalize_witness", "is_ec",
    "kaiser_hull_enumerate", "model_companion_check", "pi1_separation_search",
    "robinson_check", "universal_equivalent_search", "universal_violation",
    "valid_universal_sentences",
]
