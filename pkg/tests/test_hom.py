import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_homs, random_graph
from homtw.budget import Budget
from homtw.decomp import TreeDecomposition, heuristic_decomposition, to_nice
from homtw.dp import hom_dp
from homtw.errors import DecompositionError, GraphError, Inconclusive, PreconditionError
from homtw.gadgets import build_projective_gadget
from homtw.graph import build_graph, is_homomorphism
from homtw.hom import HomQuery, constructible_set, count_homs, find_hom, hom_backtrack, iter_homs
from homtw.named import clique, cycle, grotzsch, path, petersen


@st.composite
def graphs(draw, max_n=6, loops=True):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i if loops else i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return build_graph(n, [p for p, k in zip(pairs, keep) if k])


# backtracking -----------------------------------------------------------------

def test_count_k2_k3():
    assert hom_backtrack(HomQuery(clique(2), clique(3), "count")).count == 6


def test_grotzsch_not_3_colourable():
    res = hom_backtrack(HomQuery(grotzsch(), clique(3), "decide"))
    assert res.decision is False
    assert find_hom(grotzsch(), clique(4)) is not None


def test_pinned_enumeration():
    res = hom_backtrack(HomQuery(clique(2), clique(3), "enumerate", pins={0: 0}))
    assert [f[1] for f in res.homs] == [1, 2]


def test_enumeration_is_lexicographic(rng):
    for _ in range(20):
        g = random_graph(rng, rng.randint(1, 5), 0.4)
        h = random_graph(rng, rng.randint(1, 4), 0.6, loops=0.2)
        homs = hom_backtrack(HomQuery(g, h, "enumerate")).homs
        assert homs == sorted(homs)
        assert len(homs) == brute_homs(g, h)


def test_enumeration_cap():
    res = hom_backtrack(HomQuery(cycle(5), clique(3), "enumerate", cap=4))
    assert len(res.homs) == 4 and res.stats["truncated"]
    res = hom_backtrack(HomQuery(cycle(5), clique(3), "enumerate"))
    assert len(res.homs) == 30 and not res.stats["truncated"]


def test_count_is_never_truncated():
    q = HomQuery(path(10), clique(3), "count", cap=5)
    assert hom_backtrack(q).count == 3 * 2 ** 9


def test_lists_restrict_images():
    lists = {0: [0], 1: [1, 2]}
    homs = list(iter_homs(clique(2), clique(3), lists=lists, lex=True))
    assert homs == [(0, 1), (0, 2)]


def test_pin_outside_list_rejected():
    with pytest.raises(PreconditionError):
        hom_backtrack(HomQuery(clique(2), clique(3), pins={0: 1}, lists={0: [0]}))


def test_bad_pin_vertex():
    with pytest.raises(GraphError):
        find_hom(clique(2), clique(3), pins={0: 5})


def test_unknown_mode():
    with pytest.raises(PreconditionError):
        hom_backtrack(HomQuery(clique(2), clique(3), "sample"))


def test_budget_is_inconclusive_not_no():
    with pytest.raises(Inconclusive):
        hom_backtrack(HomQuery(grotzsch(), clique(3), "decide", budget=Budget(nodes=5)))


def test_loops_in_source_need_loops_in_target():
    g = build_graph(2, [(0, 0), (0, 1)])
    assert find_hom(g, clique(3)) is None
    h = build_graph(2, [(1, 1), (0, 1)])
    assert find_hom(g, h) == (1, 0)


def test_find_witness_is_valid(rng):
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 8), 0.4, loops=0.05)
        h = random_graph(rng, rng.randint(1, 5), 0.6, loops=0.1)
        f = find_hom(g, h)
        if f is not None:
            assert is_homomorphism(f, g, h)
        elif g.n <= 6 and h.n <= 4:
            assert brute_homs(g, h) == 0


def test_composition_of_witnesses(rng):
    for _ in range(50):
        g = random_graph(rng, rng.randint(1, 7), 0.4)
        h = random_graph(rng, rng.randint(1, 6), 0.5)
        h2 = random_graph(rng, rng.randint(1, 5), 0.6)
        f, f2 = find_hom(g, h), find_hom(h, h2)
        if f is not None and f2 is not None:
            assert is_homomorphism([f2[x] for x in f], g, h2)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=5), graphs(max_n=4))
def test_count_matches_brute(g, h):
    assert count_homs(g, h) == brute_homs(g, h)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=6), graphs(max_n=4))
def test_decision_count_consistency(g, h):
    dec = hom_backtrack(HomQuery(g, h, "decide")).decision
    assert dec == (count_homs(g, h) > 0)


# constructible sets ----------------------------------------------------------------

def test_constructible_neighbour_set():
    assert constructible_set(clique(2), 0, [(1, 0)], clique(3)) == {1, 2}


def test_constructible_no_pins():
    assert constructible_set(clique(1), 0, [], petersen()) == frozenset(range(10))


def test_constructible_empty_when_pins_conflict():
    assert constructible_set(clique(2), 0, {0: 1, 1: 1}, clique(3)) == frozenset()


def test_constructible_gadget_excludes_pinned_colour():
    gad = build_projective_gadget(clique(3))
    u, v = gad.index(gad.u_star), gad.index(gad.v_star)
    for z in range(3):
        out = constructible_set(gad.f, u, {v: z}, clique(3))
        assert out == frozenset(range(3)) - {z}


def test_constructible_bad_vertex():
    with pytest.raises(GraphError):
        constructible_set(clique(2), 5, [], clique(3))


# dynamic programming ----------------------------------------------------------------

C5_DEC = TreeDecomposition.path([{0, 1, 4}, {1, 2, 4}, {2, 3, 4}])


def test_dp_c5_k3():
    res = hom_dp(cycle(5), clique(3), C5_DEC, "decide")
    assert res.decision is True
    assert res.stats["width"] == 2


def test_dp_k4_k3():
    assert hom_dp(clique(4), clique(3), TreeDecomposition.make([range(4)])).decision is False


def test_dp_count_random_8(rng):
    for _ in range(10):
        g = random_graph(rng, 8, 0.35)
        d = heuristic_decomposition(g)
        assert hom_dp(g, cycle(5), d, "count").count == count_homs(g, cycle(5))


def test_dp_find_returns_valid_witness(rng):
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 9), 0.35, loops=0.05)
        h = random_graph(rng, rng.randint(1, 5), 0.6, loops=0.1)
        res = hom_dp(g, h, heuristic_decomposition(g), "find")
        assert res.decision == (find_hom(g, h) is not None)
        if res.decision:
            assert is_homomorphism(res.witness, g, h)


def test_dp_accepts_nice_form():
    nice = to_nice(C5_DEC, cycle(5))
    assert hom_dp(cycle(5), clique(3), nice, "count").count == 30


def test_dp_rejects_invalid_decomposition():
    with pytest.raises(DecompositionError):
        hom_dp(path(4), clique(3), TreeDecomposition.path([{0, 1}, {2, 3}]))


def test_dp_state_limit():
    g = path(8)
    d = TreeDecomposition.make([range(8)])
    with pytest.raises(Inconclusive):
        hom_dp(g, clique(4), d, "count", max_states=100)


def test_dp_cells_formula():
    res = hom_dp(cycle(5), clique(3), C5_DEC, "decide")
    nice = to_nice(C5_DEC, cycle(5))
    assert res.stats["dp_cells"] == sum(3 ** len(x.bag) for x in nice.nodes)


def test_dp_unsupported_mode():
    with pytest.raises(PreconditionError):
        hom_dp(cycle(5), clique(3), C5_DEC, "enumerate")


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=7), graphs(max_n=4))
def test_dp_matches_backtrack(g, h):
    res = hom_dp(g, h, heuristic_decomposition(g), "count")
    assert res.count == count_homs(g, h)
    assert res.decision == (res.count > 0)
