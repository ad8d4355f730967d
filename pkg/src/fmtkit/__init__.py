"""Bounded, executable finite model theory: formulas, finite structures,
Morleyization, codes of hereditarily finite sets, and model companions."""

__version__ = "0.1.0"
