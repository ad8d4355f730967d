"""First-order syntax: signatures, formula trees, parsing and transformations."""

from fmtkit.fol.parser import (
    is_declaration, parse_formula, parse_signature, parse_term, render_formula,
    render_term,
)
from fmtkit.fol.syntax import (
    ATOMIC, App, And, Atom, BoundedExists, BoundedForall, ComplexityClass,
    Const, DELTA0, Equals, Exists, Forall, Formula, Iff, Implies, MEMBERSHIP,
    Member, Not, Or, Pi, Sigma, Signature, Term, Var, conjoin, disjoin,
    formula_size, has_unbounded_quantifier, is_quantifier_free,
    quantifier_rank, subformulas,
)
from fmtkit.fol.transform import (
    FreshNames, classify, eliminate_iff, free_variables, is_sentence,
    prefix_class, prenex_parts, relativize, rename_bound, substitute,
    to_prenex, unbound_bounded, universal_closure,
)

__all__ = [
    "ATOMIC", "App", "And", "Atom", "BoundedExists", "BoundedForall",
    "ComplexityClass", "Const", "DELTA0", "Equals", "Exists", "Forall",
    "Formula", "FreshNames", "Iff", "Implies", "MEMBERSHIP", "Member", "Not",
    "Or", "Pi", "Sigma", "Signature", "Term", "Var", "classify", "conjoin",
    "disjoin", "eliminate_iff", "formula_size", "free_variables",
    "has_unbounded_quantifier", "is_declaration", "is_quantifier_free",
    "is_sentence", "parse_formula", "parse_signature", "parse_term",
    "prefix_class", "prenex_parts", "quantifier_rank", "relativize",
    "render_formula", "render_term", "rename_bound", "subformulas",
    "substitute", "to_prenex", "unbound_bounded", "universal_closure",
]
