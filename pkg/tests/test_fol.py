import random

import pytest
from hypothesis import given, settings, strategies as st

from fmtkit.errors import FormulaSyntaxError, SignatureError
from fmtkit.fol import (
    DELTA0, Atom, BoundedForall, Equals, Exists, Forall, Member, Not, Pi, Sigma, Signature, Var,
    classify, formula_size, free_variables, has_unbounded_quantifier, parse_formula,
    parse_signature, relativize, render_formula, to_prenex,
)
from fmtkit.structures import evaluate
from randgen import GRAPH_P, SETS_GRAPH, random_formula, random_structure

SIG = parse_signature("const c; pred P/1, Q/1, edge/2, Z/1; membership;")


def p(text, sig=SIG):
    return parse_formula(text, sig)


def test_parse_membership_atom():
    assert p("x in y") == Member(Var("x"), Var("y"))


def test_parse_bounded_forall():
    assert p("forall x in y (x = x)") == BoundedForall("x", Var("y"), Equals(Var("x"), Var("x")))


def test_syntax_error_reports_position():
    with pytest.raises(FormulaSyntaxError) as e:
        p("edge(x")
    assert e.value.position == 7


def test_undeclared_and_arity_errors():
    with pytest.raises(SignatureError):
        p("R(x)")
    with pytest.raises(SignatureError):
        p("edge(x)")


@pytest.mark.parametrize("f, text", [
    (Member(Var("x"), Var("y")), "x in y"),
    (Not(Equals(Var("x"), Var("y"))), "~(x = y)"),
    (Forall("x", Exists("y", Atom("edge", (Var("x"), Var("y"))))), "forall x exists y edge(x, y)"),
])
def test_render_examples(f, text):
    assert render_formula(f) == text


@pytest.mark.parametrize("text, fv", [
    ("x in y", ("x", "y")),
    ("forall x (x in y)", ("y",)),
    ("forall x (x = x)", ()),
    ("edge(y, x) & exists y P(y)", ("y", "x")),
])
def test_free_variables(text, fv):
    assert free_variables(p(text)) == fv


@pytest.mark.parametrize("text, prenex, cls", [
    ("~(exists x P(x))", "forall x ~P(x)", Pi(1)),
    ("(forall x P(x)) -> Q(c)", "exists x (P(x) -> Q(c))", Sigma(1)),
    ("forall x exists y edge(x,y)", "forall x exists y edge(x, y)", Pi(2)),
])
def test_prenex_examples(text, prenex, cls):
    g, k = to_prenex(p(text))
    assert render_formula(g) == prenex
    assert k == cls


def test_classify_bounded_is_delta0():
    assert classify(p("forall x in y exists z in x (z = z)")) == DELTA0
    # a bounded quantifier over an unbounded one is unfolded: forall x (x in y -> exists z ...)
    assert classify(p("forall x in y exists z (z in x)")) == Pi(2)


def test_unbounded_only_keeps_bounded_in_matrix():
    g, k = to_prenex(p("exists u (forall x in y (x in u))"), unbounded_only=True)
    assert k == Sigma(1)
    assert isinstance(g, Exists)


@pytest.mark.parametrize("text, out", [
    ("exists x P(x)", "exists x (Z(x) & P(x))"),
    ("forall x P(x)", "forall x (Z(x) -> P(x))"),
    ("P(c)", "P(c)"),
])
def test_relativize_examples(text, out):
    assert render_formula(relativize(p(text), "Z")) == out


def test_relativize_rejects_bound_guard():
    with pytest.raises(ValueError):
        relativize(Exists("Z", Atom("P", (Var("Z"),))), "Z")


# -- properties --------------------------------------------------------------------------------


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([GRAPH_P, SETS_GRAPH]))
def test_round_trip(seed, sig):
    f = random_formula(random.Random(seed), sig, depth=4, rank=3, bounded=True)
    if formula_size(f) > 12:
        return
    assert parse_formula(render_formula(f), sig) == f


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_prenex_equivalent(seed):
    rng = random.Random(seed)
    f = random_formula(rng, SETS_GRAPH, depth=4, rank=2, bounded=True)
    M = random_structure(rng, SETS_GRAPH, rng.randint(1, 3))
    a = {v: rng.randrange(M.size) for v in free_variables(f)}
    for unbounded_only in (False, True):
        g, _ = to_prenex(f, unbounded_only)
        assert evaluate(M, g, a) == evaluate(M, f, a)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_delta0_has_no_unbounded_quantifier(seed):
    f = random_formula(random.Random(seed), SETS_GRAPH, depth=4, rank=2, bounded=True)
    if classify(f) == DELTA0:
        assert not has_unbounded_quantifier(f)
    else:
        assert has_unbounded_quantifier(f)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_relativization_matches_substructure(seed):
    rng = random.Random(seed)
    sig = Signature(predicates=(("edge", 2), ("P", 1), ("Z", 1)))
    f = random_formula(rng, GRAPH_P, depth=4, rank=2)
    N = random_structure(rng, sig, rng.randint(1, 4))
    Z = sorted({t[0] for t in N.relations["Z"]})
    if not Z:
        return
    sub, elems = N.restrict(Z)
    back = {old: new for new, old in enumerate(elems)}
    a = {v: rng.choice(Z) for v in free_variables(f)}
    assert evaluate(N, relativize(f, "Z"), a) == evaluate(sub, f, {v: back[e] for v, e in a.items()})
