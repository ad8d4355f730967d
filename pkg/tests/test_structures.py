import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from fmtkit.errors import EvaluationError, PreconditionError, ResourceError
from fmtkit.fol import free_variables, is_quantifier_free, parse_formula, parse_signature, render_formula
from fmtkit.hf import hf_structure, hf_enumerate
from fmtkit.structures import (
    GRAPH_SIG, FiniteStructure, atomic_diagram, canonical_form, diagram_signature,
    enumerate_embeddings, enumerate_models, evaluate, extension, graph, graph_theory,
    identity, is_embedding, is_isomorphic, is_sigma1_elementary, parse_structure,
    render_structure, theory_from_strings,
)
import oracles
from randgen import GRAPH_P, random_formula, random_graph, random_structure

K1 = graph(1, [])
K2 = graph(2, [(0, 1)])
K3 = graph(3, [(0, 1), (1, 2), (0, 2)])
C4 = graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def g(text):
    return parse_formula(text, GRAPH_SIG)


# -- evaluation -------------------------------------------------------------------------------------


def test_evaluate_examples():
    assert evaluate(K3, g("forall x forall y (x = y | edge(x,y))"))
    assert not evaluate(graph(2, []), g("exists x exists y edge(x,y)"))


def test_evaluate_on_small_hf_structure():
    sets = hf_enumerate(3)  # V_3: the four sets of rank at most 2
    assert len(sets) == 4
    sig = parse_signature("membership;")
    H = hf_structure(sets)
    empty = [i for i, s in enumerate(sets) if str(s) == "{}"][0]
    assert evaluate(H, parse_formula("exists y (x in y)", sig), {"x": empty})


def test_evaluate_errors():
    with pytest.raises(EvaluationError):
        evaluate(K2, g("edge(x, y)"), {"x": 0})
    with pytest.raises(EvaluationError):
        evaluate(K2, g("x = x"), {"x": 5})


def test_structure_text_round_trip():
    M = parse_structure("size 4; pred edge = {(0,1),(1,0),(1,2),(2,1)};")
    assert M.size == 4
    assert parse_structure(render_structure(M)) == M


# -- enumeration --------------------------------------------------------------------------------------


def test_graphs_up_to_three():
    models = enumerate_models(graph_theory(), 3)
    assert len(models) == 7
    assert [M.size for M in models] == sorted(M.size for M in models)


@pytest.mark.parametrize("order", [1, 2, 3, 4, 5, 6])
def test_graph_counts_match_atlas(order):
    expected = sum(1 for h in oracles.atlas(order) if h.number_of_nodes() == order)
    assert sum(1 for M in enumerate_models(graph_theory(), order) if M.size == order) == expected


def test_inconsistent_theory_has_no_models():
    T = theory_from_strings("pred P/1", ["exists x P(x)", "forall x ~P(x)"])
    assert enumerate_models(T, 4) == []


def test_unary_predicate_one_point():
    assert len(enumerate_models(theory_from_strings("pred P/1", []), 1)) == 2


def test_brute_force_budget():
    T = theory_from_strings("pred P/1; func f/1", ["exists x P(f(x))"])
    with pytest.raises(ResourceError):
        enumerate_models(T, 5, budget=1000)


def test_functions_enumerate_by_brute_force():
    T = theory_from_strings("func f/1", ["forall x f(f(x)) = x"])
    # involutions on up to 3 points up to conjugacy: 1 + 2 + 2
    assert len(enumerate_models(T, 3)) == 5


# -- embeddings and Sigma-1 checks -----------------------------------------------------------------


def test_embedding_examples():
    assert len(enumerate_embeddings(K1, K2)) == 2
    assert enumerate_embeddings(K3, C4) == []
    assert identity(C4) in enumerate_embeddings(C4, C4)


def test_sigma1_identity():
    assert is_sigma1_elementary(C4, C4, identity(C4), 2).verdict


def test_k1_in_k2_fails():
    res = is_sigma1_elementary(K1, K2, [0], 1)
    assert not res.verdict
    assert render_formula(res.witness.formula) == "exists y edge(c0, y)"


def test_c4_in_c4_plus_isolated_vertex():
    # the new vertex is a common non-neighbour of the adjacent pair 0, 1,
    # which no vertex of C4 is; two literals suffice at rank 2
    N = graph(5, [(0, 1), (1, 2), (2, 3), (3, 0)])
    res = is_sigma1_elementary(C4, N, identity(C4), 2)
    assert not res.verdict
    text = render_formula(res.witness.formula)
    assert text == "exists y (~edge(c0, y) & ~edge(c1, y))"
    assert any((0, y) not in N.relations["edge"] and (1, y) not in N.relations["edge"] for y in range(5))
    assert not any((0, y) not in C4.relations["edge"] and (1, y) not in C4.relations["edge"] for y in range(4))
    assert is_sigma1_elementary(C4, N, identity(C4), 1).verdict


def test_sigma1_requires_embedding():
    with pytest.raises(PreconditionError):
        is_sigma1_elementary(K2, K2, [0, 0], 1)


def test_diagram_examples():
    assert "~edge(c0, c0)" in [render_formula(f) for f in atomic_diagram(K1)]
    assert "edge(c0, c1)" in [render_formula(f) for f in atomic_diagram(K2)]
    assert "~edge(c0, c1)" in [render_formula(f) for f in atomic_diagram(graph(2, []))]


# -- properties ---------------------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_embeddings_preserve_quantifier_free_formulas(seed):
    rng = random.Random(seed)
    M = random_structure(rng, GRAPH_P, rng.randint(1, 3))
    N = random_structure(rng, GRAPH_P, rng.randint(M.size, 4))
    for e in enumerate_embeddings(M, N):
        assert is_embedding(M, N, e)
        for _ in range(5):
            f = random_formula(rng, GRAPH_P, depth=3, rank=0)
            assert is_quantifier_free(f)
            a = {v: rng.randrange(M.size) for v in free_variables(f)}
            assert evaluate(M, f, a) == evaluate(N, f, {v: e(x) for v, x in a.items()})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_embeddings_are_exactly_the_injective_preserving_maps(seed):
    rng = random.Random(seed)
    M = random_structure(rng, GRAPH_P, rng.randint(1, 3))
    N = random_structure(rng, GRAPH_P, rng.randint(1, 4))
    brute = [
        imgs for imgs in itertools.permutations(range(N.size), M.size)
        if all((t in M.relations[r]) == (tuple(imgs[i] for i in t) in N.relations[r])
               for r, k in M.sig.relation_symbols() for t in itertools.product(range(M.size), repeat=k))
    ]
    assert [e.images for e in enumerate_embeddings(M, N)] == brute


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_diagram_adequacy(seed):
    rng = random.Random(seed)
    M = random_graph(rng, rng.randint(1, 3))
    N = random_graph(rng, rng.randint(1, 4))
    dsig, names = diagram_signature(M)
    diagram = atomic_diagram(M)
    satisfiable = any(
        all(evaluate(N.expand(dsig, constants=dict(zip(names, imgs))), f) for f in diagram)
        for imgs in itertools.product(range(N.size), repeat=M.size)
    )
    assert satisfiable == bool(enumerate_embeddings(M, N))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_canonical_form_is_an_isomorphism_invariant(seed):
    rng = random.Random(seed)
    M = random_structure(rng, GRAPH_P, rng.randint(1, 5))
    perm = list(range(M.size))
    rng.shuffle(perm)
    P = M.relabel(perm)
    assert canonical_form(P)[0] == canonical_form(M)[0]
    assert is_isomorphic(M, P)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_rank_one_check_matches_formula_enumeration(seed):
    rng = random.Random(seed)
    M = random_graph(rng, rng.randint(1, 3))
    N = random_graph(rng, rng.randint(M.size, 5))
    embs = enumerate_embeddings(M, N)
    if not embs:
        return
    e = embs[0]
    names = {f"c{i}": i for i in range(M.size)}
    in_m = oracles.exists_one_literal(set(M.relations["edge"]), M.size, names)
    in_n = oracles.exists_one_literal(set(N.relations["edge"]), N.size, {k: e(v) for k, v in names.items()})
    expected = all(in_m[k] or not in_n[k] for k in in_m)
    assert is_sigma1_elementary(M, N, e, 1).verdict == expected


def test_extension_matches_evaluate():
    f = g("exists y edge(x, y)")
    assert extension(K2, f) == frozenset({(0,), (1,)})
    assert extension(graph(2, []), f) == frozenset()


def test_structures_are_values():
    assert FiniteStructure(GRAPH_SIG, 2, relations={"edge": {(0, 1), (1, 0)}}) == K2
    assert len({K2, graph(2, [(1, 0)])}) == 1


def test_nullary_predicates():
    # models up to isomorphism: the truth of R times the number of points in P,
    # minus those where neither R holds nor P is inhabited
    T = theory_from_strings("pred R/0, P/1", ["R | exists x P(x)"])
    models = enumerate_models(T, 3)
    assert [sum(1 for M in models if M.size == s) for s in (1, 2, 3)] == [3, 5, 7]
    A = parse_structure("size 2; pred R/0 = {()}; pred P/1 = {(0)};")
    B = parse_structure("size 2; pred R/0 = {}; pred P/1 = {(0)};")
    assert not is_isomorphic(A, B)
    assert is_isomorphic(A, A.relabel([1, 0]))
