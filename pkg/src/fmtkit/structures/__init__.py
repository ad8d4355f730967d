"""Finite structures: evaluation, enumeration, embeddings and Sigma-1 checks."""

from fmtkit.structures.canon import canonical_form, canonical_structure, is_isomorphic, refine_colors
from fmtkit.structures.embeddings import (
    Embedding, Sigma1Checker, Sigma1Result, Sigma1Witness, atomic_diagram,
    diagram_signature, diagram_structure, element_names, enumerate_embeddings,
    identity, is_embedding, is_sigma1_elementary, variable_names,
)
from fmtkit.structures.enumerate import (
    empty_structure, enumerate_models, extensions, models_of, split_axioms,
)
from fmtkit.structures.evaluate import compile_formula, evaluate, extension, satisfies
from fmtkit.structures.structure import FiniteStructure, graph, parse_structure, render_structure
from fmtkit.structures.theory import GRAPH_SIG, TheorySpec, graph_theory, parse_theory, theory_from_strings

__all__ = [
    "Embedding", "FiniteStructure", "GRAPH_SIG", "Sigma1Checker", "Sigma1Result",
    "Sigma1Witness", "TheorySpec", "atomic_diagram", "canonical_form",
    "canonical_structure", "compile_formula", "diagram_signature",
    "diagram_structure", "element_names", "empty_structure",
    "enumerate_embeddings", "enumerate_models", "evaluate", "extension",
    "extensions", "graph", "graph_theory", "identity", "is_embedding",
    "is_isomorphic", "is_sigma1_elementary", "models_of", "parse_structure",
    "parse_theory", "refine_colors", "render_structure", "satisfies",
    "split_axioms", "theory_from_strings", "variable_names",
]
