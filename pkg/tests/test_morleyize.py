import random

import pytest
from hypothesis import given, settings, strategies as st

from fmtkit.errors import PreconditionError, SignatureError
from fmtkit.fol import Atom, Var, classify, free_variables, parse_formula, render_formula, DELTA0
from fmtkit.morleyize import DELTA0_MODE, FULL, build_expansion, collapse_formula, expand_structure, normalize
from fmtkit.structures import GRAPH_SIG, evaluate, extension, graph
from randgen import GRAPH_P, SETS_GRAPH, random_formula, random_structure


def g(text, sig=GRAPH_SIG):
    return parse_formula(text, sig)


def test_existential_schema():
    exp, axioms = build_expansion(GRAPH_SIG, [g("exists y edge(x,y)")], FULL)
    base = exp.by_formula(g("edge(x,y)"))
    ex = exp.by_formula(g("exists y edge(x,y)"))
    assert [p.name for p in exp.added] == [base.name, ex.name]
    assert ex.arity == 1 and base.arity == 2
    assert render_formula(axioms[0]) == f"forall x forall y ({base.name}(x, y) <-> edge(x, y))"
    assert render_formula(axioms[1]) == f"forall x ((exists y {base.name}(x, y)) <-> {ex.name}(x))"


def test_empty_corpus():
    exp, axioms = build_expansion(GRAPH_SIG, [], FULL)
    assert exp.signature == GRAPH_SIG
    assert axioms == []


def test_negation_schema():
    exp, axioms = build_expansion(GRAPH_SIG, [g("~(x = y)")], FULL)
    eq = exp.by_formula(g("x = y"))
    neq = exp.by_formula(g("~(x = y)"))
    assert render_formula(axioms[-1]) == f"forall x forall y ({neq.name}(x, y) <-> ~{eq.name}(x, y))"


def test_names_are_fresh_and_stable():
    exp1, _ = build_expansion(GRAPH_SIG, [g("exists y edge(x,y)")], FULL)
    exp2, _ = build_expansion(GRAPH_SIG, [g("exists y edge(x,y)")], FULL)
    assert exp1.manifest() == exp2.manifest()
    assert all(p.name.startswith("R_") and p.name not in GRAPH_SIG.symbols() for p in exp1.added)


def test_delta0_mode_rejects_unbounded():
    sig = SETS_GRAPH
    with pytest.raises(PreconditionError):
        build_expansion(sig, [g("exists u (u in y)", sig)], DELTA0_MODE)
    exp, axioms = build_expansion(sig, [g("forall u in x (u in y)", sig)], DELTA0_MODE)
    assert all(classify(p.formula) == DELTA0 for p in exp.added)
    M = random_structure(random.Random(3), sig, 3)
    assert all(evaluate(expand_structure(M, exp), a) for a in axioms)


@pytest.mark.parametrize("edges, expected", [
    ([(0, 1)], {(0,), (1,)}),
    ([], set()),
])
def test_expand_structure_examples(edges, expected):
    exp, _ = build_expansion(GRAPH_SIG, [g("exists y edge(x,y)")], FULL)
    E = expand_structure(graph(2, edges), exp)
    assert extension(E, exp.by_formula(g("exists y edge(x,y)")).atom()) == frozenset(expected)


def test_identity_predicate_is_full():
    exp, _ = build_expansion(GRAPH_SIG, [g("x = x")], FULL)
    M = graph(3, [(0, 1)])
    E = expand_structure(M, exp)
    assert extension(E, exp.added[0].atom()) == frozenset((i,) for i in range(3))


def test_collapse_examples():
    exp, _ = build_expansion(GRAPH_SIG, [g("exists y edge(x,y)"), g("~(x = y)")], FULL)
    ex = exp.by_formula(g("exists y edge(x,y)"))
    eq = exp.by_formula(g("x = y"))
    sig = exp.signature
    assert render_formula(collapse_formula(parse_formula(f"{ex.name}(x)", sig), exp)) == "exists y edge(x, y)"
    assert render_formula(collapse_formula(parse_formula(f"~{eq.name}(x, y)", sig), exp)) == "~(x = y)"
    base = g("edge(x, y) & x = y")
    assert collapse_formula(base, exp) == base


def test_collapse_unknown_predicate():
    exp, _ = build_expansion(GRAPH_SIG, [g("edge(x,y)")], FULL)
    with pytest.raises(SignatureError):
        collapse_formula(Atom("R_unknown", (Var("x"),)), exp)


# -- properties ---------------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_quantifier_elimination_at_the_corpus(seed):
    rng = random.Random(seed)
    f = random_formula(rng, GRAPH_P, depth=4, rank=3)
    exp, axioms = build_expansion(GRAPH_P, [f], FULL)
    M = random_structure(rng, GRAPH_P, rng.randint(1, 4))
    E = expand_structure(M, exp)
    assert all(evaluate(E, a) for a in axioms)
    for p in exp.added:
        assert extension(E, p.atom(), p.variables) == extension(M, p.formula, p.variables)
    fv = free_variables(f)
    R = exp.by_formula(f)
    assert extension(E, R.atom(), R.variables) == extension(M, normalize(f), R.variables)
    assert extension(M, collapse_formula(R.atom(), exp), R.variables) == extension(E, R.atom(), R.variables)
    assert set(R.variables) == set(fv)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_expansion_is_unique_and_conservative(seed):
    rng = random.Random(seed)
    f = random_formula(rng, GRAPH_P, depth=3, rank=2)
    exp, _ = build_expansion(GRAPH_P, [f], FULL)
    M = random_structure(rng, GRAPH_P, rng.randint(1, 4))
    E1, E2 = expand_structure(M, exp), expand_structure(M, exp)
    assert E1 == E2
    sentence = random_formula(rng, GRAPH_P, depth=3, rank=2)
    for v in reversed(free_variables(sentence)):
        sentence = parse_formula(f"forall {v} ({render_formula(sentence)})", GRAPH_P)
    assert evaluate(M, sentence) == evaluate(E1, sentence)


def test_definable_families_coincide():
    # each added atom defines what its formula defines in M, and each corpus formula what its atom defines
    rng = random.Random(11)
    corpus = [random_formula(rng, GRAPH_P, depth=3, rank=2, variables=("x", "y")) for _ in range(6)]
    exp, _ = build_expansion(GRAPH_P, corpus, FULL)
    for size in range(1, 5):
        M = random_structure(rng, GRAPH_P, size)
        E = expand_structure(M, exp)
        for p in exp.added:
            vs = p.variables
            assert extension(E, p.atom(), vs) == extension(M, collapse_formula(p.atom(), exp), vs)
        for f in corpus:
            R = exp.by_formula(f)
            assert extension(M, f, R.variables) == extension(E, R.atom(), R.variables)


def test_quantifier_free_in_expansion():
    # every corpus formula is equivalent in the expansion to an atom
    f = g("forall x exists y (edge(x, y) & ~(x = y))")
    exp, _ = build_expansion(GRAPH_SIG, [f], FULL)
    R = exp.by_formula(f)
    for edges in [[], [(0, 1)], [(0, 1), (1, 2)]]:
        M = graph(3, edges)
        assert evaluate(expand_structure(M, exp), R.atom()) == evaluate(M, f)


def test_normalize_keeps_extensions():
    rng = random.Random(5)
    for _ in range(100):
        f = random_formula(rng, SETS_GRAPH, depth=4, rank=2, bounded=True)
        M = random_structure(rng, SETS_GRAPH, rng.randint(1, 3))
        vs = free_variables(f)
        assert extension(M, normalize(f, FULL), vs) == extension(M, f, vs)


def test_delta0_normalize_on_bounded_formulas():
    rng = random.Random(6)
    n = 0
    for _ in range(400):
        f = random_formula(rng, SETS_GRAPH, depth=4, rank=2, bounded=True)
        if classify(f) != DELTA0:
            continue
        n += 1
        M = random_structure(rng, SETS_GRAPH, rng.randint(1, 3))
        vs = free_variables(f)
        assert extension(M, normalize(f, DELTA0_MODE), vs) == extension(M, f, vs)
    assert n > 20

