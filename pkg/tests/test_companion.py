import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from fmtkit.companion import (
    ec_chain, ec_structures, is_ec, kaiser_hull_enumerate, model_companion_check,
    pi1_separation_search, robinson_check, universal_equivalent_search,
)
from fmtkit.companion.clauses import forall_exists_sentence
from fmtkit.companion.search import forall_exists_candidates
from fmtkit.errors import PreconditionError
from fmtkit.fol import Pi, classify, free_variables, parse_formula, render_formula
from fmtkit.structures import (
    GRAPH_SIG, enumerate_embeddings, enumerate_models, evaluate, extension, extensions,
    graph, graph_theory, is_sigma1_elementary, render_structure, theory_from_strings,
)
import oracles

G = graph_theory()
K1 = graph(1, [])
K2 = graph(2, [(0, 1)])
C4 = graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
IRR = "forall x ~edge(x,x)"
SYM = "forall x forall y (edge(x,y) -> edge(y,x))"
POINT = theory_from_strings(GRAPH_SIG, [IRR, SYM, "forall x forall y x = y"])
EXT1 = G.with_axioms([parse_formula("forall x exists y edge(x,y)", GRAPH_SIG)])


def g(text):
    return parse_formula(text, GRAPH_SIG)


def to_nx(M):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(M.size))
    h.add_edges_from(t for t in M.relations["edge"] if t[0] < t[1])
    return h


# -- is_ec ---------------------------------------------------------------------------------------------


def test_one_vertex_graph_is_not_ec():
    v = is_ec(K1, G, n=3)
    assert not v.verdict
    assert v.superstructure == K2
    assert render_formula(v.witness.formula) == "exists y edge(c0, y)"


def test_c4_is_not_ec_at_rank_two():
    v = is_ec(C4, G, n=5, r=2)
    assert not v.verdict
    phi = v.witness.formula
    # exhaustive superstructure search: one new vertex with any neighbourhood
    params = dict(v.witness.parameters)
    found = False
    for nbrs in itertools.product([0, 1], repeat=4):
        N = graph(5, [(0, 1), (1, 2), (2, 3), (3, 0)] + [(i, 4) for i in range(4) if nbrs[i]])
        if evaluate(N.expand(v.witness.signature, constants=params), phi):
            found = True
    assert found
    assert not evaluate(C4.expand(v.witness.signature, constants=params), phi)


def test_vacuous_when_no_extension_exists():
    v = is_ec(K1, POINT, n=4, r=2)
    assert v.verdict and v.vacuous


def test_precondition_names_axiom():
    loop = graph(1, [(0, 0)], symmetric=False)
    with pytest.raises(PreconditionError, match="edge"):
        is_ec(loop, G)


def test_verdict_true_has_no_counterexample():
    # re-check by brute force over all one-vertex extensions and rank-1 formulas
    for M in enumerate_models(G, 4):
        v = is_ec(M, G, r=1)
        failing = False
        for N in extensions(M, 1, G.universal_fragment):
            if not is_sigma1_elementary(M, N, range(M.size), 1).verdict:
                failing = True
        assert v.verdict == (not failing)


# -- ec chain --------------------------------------------------------------------------------------------


def test_chain_from_k1():
    res = ec_chain(K1, G, budget=20)
    assert res.ec and not res.partial
    assert is_ec(res.final, G, r=1).verdict
    assert oracles.is_n_ec(to_nx(res.final), 1)


def test_chain_fixpoint():
    res = ec_chain(K2, G, budget=20)
    assert res.final == K2 and res.stages == [K2]


def test_chain_budget_exhausted():
    res = ec_chain(K1, G, budget=1)
    assert res.partial and not res.ec


def test_chain_soundness_and_determinism():
    for M in enumerate_models(G, 4):
        res = ec_chain(M, G, budget=20)
        for a, b in zip(res.stages, res.stages[1:]):
            assert b.restrict(range(a.size))[0] == a
        for s in res.stages:
            assert all(evaluate(s, ax) for ax in G.universal_fragment)
        assert res.to_json() == ec_chain(M, G, budget=20).to_json()


# -- Robinson's test ----------------------------------------------------------------------------------


def test_graphs_not_model_complete():
    rep = robinson_check(G, 4)
    assert not rep.model_complete
    assert rep.witness.structure == K1 and rep.witness.superstructure == K2
    assert rep.cross_check and rep.cross_check[0]["universal"] is None


def test_single_point_theory_model_complete():
    rep = robinson_check(POINT, 4)
    assert rep.model_complete and len(rep.verdicts) == 1


def test_extension_axioms_at_smallest_order():
    smallest = min(h.number_of_nodes() for h in oracles.atlas(7) if oracles.is_n_ec(h, 1))
    rep = robinson_check(EXT1, smallest)
    for v in rep.verdicts:
        assert v.verdict == oracles.is_n_ec(to_nx(v.structure), 1)


# -- universal equivalents and separation -----------------------------------------------------------------


def test_valid_formula_has_tautological_equivalent():
    res = universal_equivalent_search(g("exists y (y = x)"), G)
    assert res.formula is not None
    assert classify(res.formula) == Pi(1)
    assert free_variables(res.formula) == ("x",)
    for M in enumerate_models(G, 4):
        assert extension(M, res.formula) == frozenset((i,) for i in range(M.size))


def test_no_universal_equivalent_for_having_a_neighbour():
    assert universal_equivalent_search(g("exists y edge(x,y)"), G).formula is None


def test_empty_formula_gets_contradiction():
    res = universal_equivalent_search(g("exists y edge(y,y)"), G)
    assert res.formula is not None and classify(res.formula) == Pi(1)
    assert all(not evaluate(M, res.formula) for M in enumerate_models(G, 4))


def test_universal_search_precondition():
    with pytest.raises(PreconditionError):
        universal_equivalent_search(g("forall x exists y edge(x,y)"), G)


def test_no_universal_equivalent_by_exhaustive_formula_search():
    # every universal formula with one bound variable and up to two literals over x, y
    # either misses or exceeds the extension of "exists y edge(x,y)" on K1 or K2
    phi = g("exists y edge(x,y)")
    models = [K1, graph(2, []), K2]
    atoms = ["edge(x, x)", "edge(x, y)", "edge(y, x)", "edge(y, y)", "x = y"]
    lits = atoms + [f"~({a})" for a in atoms]
    for k in (1, 2):
        for combo in itertools.combinations(lits, k):
            psi = g("forall y (" + " | ".join(combo) + ")")
            if "x" not in free_variables(psi):
                continue
            assert any(extension(M, psi, ("x",)) != extension(M, phi, ("x",)) for M in models)


TRIANGLE_FREE = G.with_axioms([g("forall x forall y forall z ~(edge(x,y) & edge(y,z) & edge(x,z))")])
HAS_TRIANGLE = G.with_axioms([g("exists x exists y exists z (edge(x,y) & edge(y,z) & edge(x,z))")])


def test_separation_triangle():
    res = pi1_separation_search(TRIANGLE_FREE, HAS_TRIANGLE)
    assert res.formula is not None and classify(res.formula) == Pi(1)
    assert render_formula(res.formula) == "forall y1 forall y2 forall y3 (~edge(y1, y2) | ~edge(y1, y3) | ~edge(y2, y3))"


def test_separation_identity_case():
    res = pi1_separation_search(G, G)
    assert res.formula is None and res.embedding is not None


def test_separation_self_loop():
    T = theory_from_strings(GRAPH_SIG, [IRR])
    S = theory_from_strings(GRAPH_SIG, ["exists x edge(x,x)"])
    res = pi1_separation_search(T, S, n=3)
    assert render_formula(res.formula) == "forall y ~edge(y, y)"


POOL = [
    IRR, SYM, "exists x edge(x,x)", "forall x exists y edge(x,y)", "exists x exists y edge(x,y)",
    "forall x forall y (edge(x,y) | x = y)", "exists x exists y ~(x = y)", "forall x forall y x = y",
]


@settings(max_examples=25, deadline=None)
@given(st.sets(st.sampled_from(POOL), max_size=3), st.sets(st.sampled_from(POOL), max_size=3))
def test_separation_is_sound(t_axioms, s_axioms):
    T = theory_from_strings(GRAPH_SIG, sorted(t_axioms))
    S = theory_from_strings(GRAPH_SIG, sorted(s_axioms))
    res = pi1_separation_search(T, S, n=3, variables=2, size=2)
    T_models, S_models = enumerate_models(T, 3), enumerate_models(S, 3)
    if any(enumerate_embeddings(A, B) for A in S_models for B in T_models if A.size <= B.size):
        assert res.formula is None
    if res.formula is not None:
        assert all(evaluate(M, res.formula) for M in T_models)
        assert not any(evaluate(M, res.formula) for M in S_models)


# -- Kaiser hull -----------------------------------------------------------------------------------------


def test_hull_of_graphs():
    rep = kaiser_hull_enumerate(G, size=2, n=4)
    texts = [render_formula(s) for s in rep.sentences]
    assert "forall x exists y (edge(x, y) & ~(x = y))" in texts
    for s in rep.sentences:
        assert classify(s) == Pi(2)
        assert all(evaluate(M, s) for M in rep.ec_structures)
        assert "forall x edge(x, x)" != render_formula(s)
    # every ec structure found is a graph without isolated vertices (the rank-1 oracle)
    assert all(oracles.is_n_ec(to_nx(M), 1) for M in rep.ec_structures)


def test_hull_single_point():
    rep = kaiser_hull_enumerate(POINT, size=2, n=3)
    assert rep.ec_structures == [K1]
    expected = [
        forall_exists_sentence(space, xs, ys, lits)
        for space, xs, ys, lits in forall_exists_candidates(GRAPH_SIG, 2, 1, 1)
        if evaluate(K1, forall_exists_sentence(space, xs, ys, lits))
    ]
    assert rep.sentences == expected


def test_hull_vacuous():
    T = theory_from_strings(GRAPH_SIG, ["exists x edge(x,x)", IRR])
    assert kaiser_hull_enumerate(T, n=3).vacuous


# -- model companion --------------------------------------------------------------------------------------


def test_companion_graphs_and_extension_axioms():
    rep = model_companion_check(G, EXT1, n=4)
    assert rep.check("mutually_extendable").passed
    assert rep.check("universal_fragments_agree").passed
    assert rep.check("robinson").details["caveat"]


def test_companion_single_point():
    assert model_companion_check(POINT, POINT, n=3).passed


def test_companion_detects_new_universal_axiom():
    S = G.with_axioms([g("forall x forall y ~edge(x,y)")])
    rep = model_companion_check(G, S, n=3)
    check = rep.check("universal_fragments_agree")
    assert not check.passed
    assert any(c["valid_in"] == "Tstar" for c in check.counterexamples)


# -- bounded properties of ec structures ----------------------------------------------------------------


def test_ec_structures_model_universal_axioms():
    for M in enumerate_models(G, 4):
        if is_ec(M, G).verdict:
            assert all(evaluate(M, ax) for ax in G.universal_fragment)


def test_ec_depends_only_on_universal_part():
    for M in enumerate_models(G, 4):
        for r in (1, 2):
            assert is_ec(M, EXT1, r=r).verdict == is_ec(M, EXT1.universal_theory(), r=r).verdict


@pytest.mark.parametrize("r", [1, 2])
def test_sigma1_substructures_of_ec_structures_are_ec(r):
    for M in enumerate_models(G, 5):
        if not is_ec(M, G, r=r).verdict:
            continue
        for k in range(1, M.size):
            for sub in itertools.combinations(range(M.size), k):
                N, elems = M.restrict(sub)
                if is_sigma1_elementary(N, M, elems, r).verdict:
                    assert is_ec(N, G, r=r).verdict, (render_structure(N), render_structure(M))


def test_pi2_sentences_go_down_to_ec_structures():
    sentences = [forall_exists_sentence(*c) for c in forall_exists_candidates(GRAPH_SIG, 1, 1, 1)]
    for M in enumerate_models(G, 4):
        if not is_ec(M, G, r=1).verdict:
            continue
        for N in extensions(M, 1, G.universal_fragment):
            for s in sentences:
                if evaluate(N, s):
                    assert evaluate(M, s)


def test_ec_transfers_to_stronger_theories():
    rng = random.Random(2)
    for _ in range(10):
        S = G.with_axioms([g(a) for a in rng.sample(POOL, 2)])
        for M in enumerate_models(G, 3):
            if not is_ec(M, G).verdict:
                continue
            if not any(evaluate(M, ax) is False for ax in S.universal_fragment) and any(
                all(evaluate(N, ax) for ax in S.axioms)
                for k in range(0, 2) for N in ([M] if k == 0 else extensions(M, 1, G.universal_fragment))
            ):
                assert is_ec(M, S).verdict


def test_ec_structures_helper_matches_oracle():
    found = ec_structures(G, 5)
    expected = [M for M in enumerate_models(G, 5) if oracles.is_n_ec(to_nx(M), 1)]
    assert found == expected
