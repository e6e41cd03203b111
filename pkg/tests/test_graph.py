import math

import networkx as nx
import pytest

from conftest import random_graph
from homtw.errors import GraphError, VertexLimitError
from homtw.graph import (build_graph, direct_product, disjoint_union, is_homomorphism,
                         product_coords, product_index, projection)
from homtw.hom import find_hom
from homtw.invariants import (chromatic_number, clique_number, invariants, is_bipartite,
                              is_ramified, odd_girth, two_colouring)
from homtw.iso import is_isomorphism, isomorphic
from homtw.named import (bowtie, brinkmann, chvatal, clique, cycle, grotzsch, k1star, kneser,
                         named_graph, path, petersen)


def to_nx(g):
    x = nx.Graph()
    x.add_nodes_from(range(g.n))
    x.add_edges_from(g.edges)
    return x


# construction --------------------------------------------------------------

def test_build_triangle():
    g = build_graph(3, [(0, 1), (1, 2), (2, 0)])
    assert g.n == 3 and g.m == 3
    assert isomorphic(g, clique(3)) is not None


def test_build_looped_vertex():
    g = build_graph(1, [(0, 0)])
    assert g.loops == frozenset({0})
    assert g.has_edge(0, 0)
    assert g == k1star()


def test_build_c4_bipartite():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert is_bipartite(g)


def test_build_collapses_duplicates_and_symmetrises():
    g = build_graph(3, [(0, 1), (1, 0), (0, 1), (2, 1)])
    assert g.m == 2
    assert all(u in g.adj[v] for u, v in g.edges)


def test_build_rejects_out_of_range():
    with pytest.raises(GraphError):
        build_graph(2, [(0, 2)])
    with pytest.raises(GraphError):
        build_graph(2, [(-1, 0)])


def test_labels_must_be_bijection():
    with pytest.raises(GraphError):
        build_graph(2, [], labels=["a", "a"])


def test_induced_subgraph_labels_are_original_ids():
    g = cycle(5).induced_subgraph([4, 0, 1])
    assert g.labels == (0, 1, 4)
    assert g.m == 2


def test_relabel_is_isomorphic(rng):
    g = random_graph(rng, 8, 0.4)
    perm = list(range(8))
    rng.shuffle(perm)
    h = g.relabel(perm)
    assert is_isomorphism(perm, g, h)


# named graphs --------------------------------------------------------------

def test_brinkmann():
    g = brinkmann()
    assert g.n == 21 and g.m == 42
    assert all(g.degree(v) == 4 for v in range(21))


def test_grotzsch():
    g = grotzsch()
    assert (g.n, g.m) == (11, 20)
    assert nx.is_isomorphic(to_nx(g), nx.mycielski_graph(4))


def test_bowtie():
    g = bowtie()
    assert (g.n, g.m) == (5, 6)
    triangles = sum(nx.triangles(to_nx(g)).values()) // 3
    assert triangles == 2


def test_chvatal_matches_networkx():
    assert nx.is_isomorphic(to_nx(chvatal()), nx.chvatal_graph())


def test_petersen_is_kneser_5_2():
    assert nx.is_isomorphic(to_nx(petersen()), nx.petersen_graph())
    assert isomorphic(petersen(), kneser(5, 2)) is not None


def test_kneser_labels_lexicographic():
    g = kneser(4, 2)
    assert g.labels[0] == (0, 1)
    assert g.m == 3  # perfect matching of complementary pairs


@pytest.mark.parametrize("name,params", [("kneser", (2, 3)), ("clique", (0,)), ("cycle", (0,))])
def test_named_bad_parameters(name, params):
    with pytest.raises(GraphError):
        named_graph(name, *params)


def test_named_unknown():
    with pytest.raises(GraphError):
        named_graph("heawood")
    with pytest.raises(GraphError):
        named_graph("clique")


def test_named_dispatch():
    assert named_graph("Cycle", 5) == cycle(5)
    assert named_graph("k1star").loops == frozenset({0})


# products and unions ------------------------------------------------------------

def test_k3_times_k1():
    g = direct_product([clique(3), clique(1)])
    assert g.n == 3 and g.m == 0


def test_k2_times_k2():
    g = direct_product([clique(2), clique(2)])
    assert g.n == 4 and g.m == 2
    assert len(g.components) == 2


def test_k3_times_c5():
    g = direct_product([clique(3), cycle(5)])
    assert g.n == 15
    assert all(g.degree(v) == 4 for v in range(15))
    assert g.is_connected
    assert g.labels[7] == product_coords(7, [3, 5])


def test_product_is_flattened():
    a = direct_product([direct_product([clique(3), cycle(5)]), path(2)])
    b = direct_product([clique(3), cycle(5), path(2)])
    assert a.labels == b.labels
    assert a.adj == b.adj


def test_single_factor_product():
    g = direct_product([petersen()])
    assert isomorphic(g, petersen()) is not None


def test_product_index_roundtrip():
    sizes = [3, 4, 2]
    for i in range(24):
        assert product_index(product_coords(i, sizes), sizes) == i


def test_product_limit():
    with pytest.raises(VertexLimitError):
        direct_product([clique(3)] * 5, limit=100)


def test_product_env_limit(monkeypatch):
    monkeypatch.setenv("HOMTW_VERTEX_LIMIT", "10")
    with pytest.raises(VertexLimitError):
        direct_product([clique(3), clique(4)])


def test_product_rejects_empty():
    with pytest.raises(GraphError):
        direct_product([])
    with pytest.raises(GraphError):
        direct_product([clique(3), build_graph(0, [])])


def test_product_matches_networkx_tensor(rng):
    for _ in range(20):
        a = random_graph(rng, rng.randint(1, 5), 0.5, loops=0.3)
        b = random_graph(rng, rng.randint(1, 5), 0.5, loops=0.3)
        ours = direct_product([a, b])
        theirs = nx.tensor_product(to_nx(a), to_nx(b))
        # networkx drops loops in to_nx; build the edge set from coordinates
        for u in range(ours.n):
            for v in range(ours.n):
                (a1, b1), (a2, b2) = ours.labels[u], ours.labels[v]
                assert ours.has_edge(u, v) == (a.has_edge(a1, a2) and b.has_edge(b1, b2))
        if not a.loops and not b.loops:
            assert ours.m == theirs.number_of_edges()


def test_projections_are_homomorphisms(rng):
    for _ in range(30):
        a = random_graph(rng, rng.randint(1, 5), 0.5, loops=0.2)
        b = random_graph(rng, rng.randint(1, 5), 0.5, loops=0.2)
        p = direct_product([a, b])
        assert p.n == a.n * b.n
        assert is_homomorphism(projection(p, 0), p, a)
        assert is_homomorphism(projection(p, 1), p, b)


def test_disjoint_union_examples():
    g = disjoint_union([clique(3), grotzsch()])
    assert g.n == 14 and len(g.components) == 2
    g = disjoint_union([clique(1), clique(1)])
    assert g.n == 2 and g.m == 0
    g = disjoint_union([cycle(5), cycle(5)])
    assert g.n == 10 and len(g.components) == 2
    assert g.labels[7] == (1, 2)


# invariants ------------------------------------------------------------------

def test_brinkmann_invariants():
    inv = invariants(brinkmann())
    assert inv.chi == 4 and inv.odd_girth == 5


def test_grotzsch_invariants():
    inv = invariants(grotzsch())
    assert (inv.omega, inv.chi, inv.odd_girth) == (2, 4, 5)
    assert inv.connected and not inv.bipartite


def test_chvatal_and_petersen_chi():
    assert chromatic_number(chvatal()) == 4
    assert chromatic_number(petersen()) == 3


def test_path3_not_ramified():
    assert not is_ramified(path(3))
    assert is_ramified(clique(3))
    assert is_ramified(cycle(5))


def test_loop_invariants():
    inv = invariants(k1star())
    assert inv.odd_girth == 1 and inv.chi == math.inf


def test_empty_graph_invariants():
    inv = invariants(build_graph(0, []))
    assert inv.omega == 0 and inv.chi == 0 and inv.bipartite


def test_invariants_against_networkx(rng):
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 9), rng.choice([0.2, 0.4, 0.6]))
        x = to_nx(g)
        omega = max(len(c) for c in nx.find_cliques(x))
        assert clique_number(g) == omega
        chi = chromatic_number(g)
        assert omega <= chi
        # chi colours exist, chi - 1 do not
        assert find_hom(g, clique(int(chi))) is not None
        if chi > 1:
            assert find_hom(g, clique(int(chi) - 1)) is None
        assert (odd_girth(g) == math.inf) == nx.is_bipartite(x) == (two_colouring(g) is not None)


def test_odd_girth_brute(rng):
    for _ in range(40):
        g = random_graph(rng, rng.randint(3, 8), 0.35)
        og = odd_girth(g)
        # the shortest odd closed walk is the smallest odd k with C_k -> g
        best = math.inf
        for k in range(3, 2 * g.n + 2, 2):
            if find_hom(cycle(k), g) is not None:
                best = k
                break
        assert og == best


def test_two_colouring_is_proper(rng):
    for _ in range(50):
        g = random_graph(rng, rng.randint(1, 9), 0.3)
        col = two_colouring(g)
        if col is not None:
            assert all(col[u] != col[v] for u, v in g.edges)


# isomorphism ----------------------------------------------------------------

def test_iso_relabelled_c5():
    g = cycle(5).relabel([2, 4, 1, 3, 0])
    f = isomorphic(cycle(5), g)
    assert f is not None and is_isomorphism(f, cycle(5), g)


def test_iso_k3_vs_path3():
    assert isomorphic(clique(3), path(3)) is None


def test_iso_product_commutes():
    a = direct_product([clique(3), cycle(5)])
    b = direct_product([cycle(5), clique(3)])
    f = isomorphic(a, b)
    assert f is not None and is_isomorphism(f, a, b)


def test_iso_is_deterministic():
    a = direct_product([clique(3), cycle(5)])
    b = direct_product([cycle(5), clique(3)])
    assert isomorphic(a, b) == isomorphic(a, b)


def test_iso_reflexive(rng):
    for _ in range(100):
        g = random_graph(rng, rng.randint(0, 9), 0.4, loops=0.1)
        f = isomorphic(g, g)
        assert f is not None and is_isomorphism(f, g, g)


def test_iso_symmetric_and_matches_networkx(rng):
    for _ in range(100):
        n = rng.randint(1, 7)
        a = random_graph(rng, n, 0.5)
        b = random_graph(rng, n, 0.5)
        ab, ba = isomorphic(a, b), isomorphic(b, a)
        assert (ab is None) == (ba is None)
        assert (ab is not None) == nx.is_isomorphic(to_nx(a), to_nx(b))


def test_iso_respects_loops():
    a = build_graph(2, [(0, 1), (0, 0)])
    b = build_graph(2, [(0, 1), (1, 1)])
    c = build_graph(2, [(0, 1)])
    assert isomorphic(a, b) == (1, 0)
    assert isomorphic(a, c) is None
