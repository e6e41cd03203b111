import networkx as nx
import pytest

from conftest import partial_ktree, random_graph
from homtw.decomp import (FORGET, INTRODUCE, JOIN, LEAF, TreeDecomposition,
                          heuristic_decomposition, restrict, to_nice, validate)
from homtw.errors import DecompositionError
from homtw.graph import build_graph
from homtw.named import clique, cycle, path, petersen

C5_PATH = TreeDecomposition.path([{0, 1, 4}, {1, 2, 4}, {2, 3, 4}])


def test_path4_ok():
    d = TreeDecomposition.path([{0, 1}, {1, 2}, {2, 3}])
    rep = validate(path(4), d)
    assert rep.ok and rep.width == 1
    assert d.kind == "path"


def test_path4_missing_middle_bag():
    d = TreeDecomposition.path([{0, 1}, {2, 3}])
    rep = validate(path(4), d)
    assert not rep.ok
    assert rep.violation.condition == "edge"
    assert rep.violation.witness == (1, 2)


def test_c5_ok():
    rep = validate(cycle(5), C5_PATH)
    assert rep.ok and rep.width == 2


def test_missing_vertex():
    rep = validate(path(3), TreeDecomposition.path([{0, 1}]))
    assert rep.violation.condition == "vertex"
    assert rep.violation.witness == (2,)


def test_disconnected_occurrence():
    d = TreeDecomposition.path([{0, 1}, {1, 2}, {2, 0}])
    rep = validate(cycle(3), d)
    assert rep.violation.condition == "connectivity"
    assert rep.violation.witness == (0,)


def test_not_a_tree():
    d = TreeDecomposition.make([{0, 1}, {1, 2}, {0, 2}], [(0, 1), (1, 2), (2, 0)])
    assert validate(cycle(3), d).violation.condition == "tree"
    d = TreeDecomposition.make([{0, 1}, {1, 2}], [])
    assert validate(path(3), d).violation.condition == "tree"


def test_vertex_out_of_range():
    d = TreeDecomposition.path([{0, 1, 7}])
    assert validate(path(2), d).violation.condition == "range"


def test_path_kind_must_be_path():
    d = TreeDecomposition([frozenset({0}), frozenset({0}), frozenset({0}), frozenset({0})],
                          ((0, 1), (0, 2), (0, 3)), "path")
    assert validate(build_graph(1, []), d).violation.condition == "path"


def test_kind_is_inferred():
    star = TreeDecomposition.make([{0}, {0}, {0}, {0}], [(0, 1), (0, 2), (0, 3)])
    assert star.kind == "tree"
    assert TreeDecomposition.make([{0}, {0}], [(0, 1)]).kind == "path"


# nice form --------------------------------------------------------------------

def kinds(nice):
    return [(x.kind, x.vertex) for x in nice.nodes]


def test_nice_single_bag():
    nice = to_nice(TreeDecomposition.make([{0, 1, 2}]))
    assert kinds(nice) == [(LEAF, None), (INTRODUCE, 0), (INTRODUCE, 1), (INTRODUCE, 2),
                           (FORGET, 0), (FORGET, 1), (FORGET, 2)]
    assert nice.width == 2
    nice.check_structure()


def test_nice_c5():
    nice = to_nice(C5_PATH, cycle(5))
    assert nice.width == 2
    nice.check_structure()
    assert validate(cycle(5), nice.as_tree_decomposition()).ok


def test_nice_two_bags():
    nice = to_nice(TreeDecomposition.path([{0, 1}, {1, 2}]))
    assert nice.width == 1
    assert {x.kind for x in nice.nodes} == {LEAF, INTRODUCE, FORGET}
    nice.check_structure()


def test_nice_join():
    d = TreeDecomposition.make([{0}, {0, 1}, {0, 2}], [(0, 1), (0, 2)])
    nice = to_nice(d, build_graph(3, [(0, 1), (0, 2)]))
    assert any(x.kind == JOIN for x in nice.nodes)
    nice.check_structure()


def test_nice_rejects_invalid():
    with pytest.raises(DecompositionError):
        to_nice(TreeDecomposition.path([{0, 1}, {2, 3}]), path(4))


def test_nice_empty():
    nice = to_nice(TreeDecomposition.make([], []))
    assert kinds(nice) == [(LEAF, None)]


def test_nice_properties(rng):
    for _ in range(60):
        n = rng.randint(4, 14)
        g, d = partial_ktree(rng, n, k=rng.randint(1, 3))
        assert validate(g, d).ok
        nice = to_nice(d, g)
        nice.check_structure()
        assert validate(g, nice.as_tree_decomposition()).ok
        assert nice.width == d.width
        assert len(nice.nodes) <= 2 * (d.width + 2) * len(d.bags) + 2 * n + 1


def test_check_structure_detects_tampering():
    nice = to_nice(C5_PATH, cycle(5))
    nodes = list(nice.nodes)
    bad = nodes[2]
    nodes[2] = type(bad)(bad.kind, bad.bag + (99,), bad.vertex, bad.children)
    with pytest.raises(DecompositionError):
        type(nice)(tuple(nodes)).check_structure()


# heuristic -----------------------------------------------------------------------

def test_heuristic_tree_width_one(rng):
    for _ in range(20):
        t = nx.random_labeled_tree(rng.randint(2, 15), seed=rng.randint(0, 10**6))
        g = build_graph(t.number_of_nodes(), t.edges)
        d = heuristic_decomposition(g)
        assert validate(g, d).ok and d.width == 1


def test_heuristic_known_widths():
    assert heuristic_decomposition(clique(5)).width == 4
    assert heuristic_decomposition(cycle(5)).width == 2
    assert heuristic_decomposition(cycle(9)).width == 2
    d = heuristic_decomposition(petersen())
    assert validate(petersen(), d).ok and d.width >= 4


def test_heuristic_always_valid(rng):
    for _ in range(100):
        g = random_graph(rng, rng.randint(0, 12), rng.random(), loops=0.1)
        d = heuristic_decomposition(g)
        assert validate(g, d).ok
        # never below the clique lower bound
        assert d.width >= max((len(c) for c in nx.find_cliques(
            nx.Graph(list(g.edges) + [(v, v) for v in range(g.n)]))), default=0) - 1


def test_heuristic_is_deterministic(rng):
    g = random_graph(rng, 12, 0.3)
    assert heuristic_decomposition(g) == heuristic_decomposition(g)


def test_restrict_to_component():
    g = build_graph(5, [(0, 1), (3, 4)])
    d = heuristic_decomposition(g)
    sub = restrict(d, [3, 4])
    assert validate(g.induced_subgraph([3, 4]), sub).ok
