import pytest

from conftest import partial_ktree, random_graph
from homtw.decomp import TreeDecomposition, heuristic_decomposition
from homtw.errors import ParseError
from homtw.formats import (emit_dimacs, emit_gr, emit_td, parse_dimacs, parse_gr,
                           parse_graph_text, parse_td)
from homtw.graph import build_graph
from homtw.iso import isomorphic
from homtw.named import clique, cycle

K3_GR = "c triangle\np tw 3 3\n1 2\n2 3\n3 1\n"
K3_TD = "s td 1 3 3\nb 1 1 2 3\n"


def test_parse_gr_k3():
    assert isomorphic(parse_gr(K3_GR), clique(3)) is not None


def test_parse_td_single_bag():
    d, n = parse_td(K3_TD)
    assert n == 3
    assert d.bags == (frozenset({0, 1, 2}),)
    assert d.width == 2


def test_td_roundtrip_c5():
    d = TreeDecomposition.path([{0, 1, 4}, {1, 2, 4}, {2, 3, 4}])
    text = emit_td(d, 5)
    assert text == "s td 3 3 5\nb 1 1 2 5\nb 2 2 3 5\nb 3 3 4 5\n1 2\n2 3\n"
    d2, n = parse_td(text.replace("\n", "\r\n"))
    assert n == 5 and d2 == d
    assert emit_td(d2, n) == text


def test_gr_roundtrip_random(rng):
    for _ in range(30):
        g = random_graph(rng, rng.randint(1, 12), 0.4)
        text = emit_gr(g)
        g2 = parse_gr(text)
        assert g2 == g
        assert emit_gr(g2) == text


def test_dimacs_roundtrip_with_loops(rng):
    for _ in range(30):
        g = random_graph(rng, rng.randint(1, 12), 0.4, loops=0.2)
        text = emit_dimacs(g)
        g2 = parse_dimacs(text)
        assert g2 == g
        assert emit_dimacs(g2) == text


def test_td_roundtrip_random(rng):
    for _ in range(30):
        g, d = partial_ktree(rng, rng.randint(4, 12))
        for dec in (d, heuristic_decomposition(g)):
            text = emit_td(dec, g.n)
            back, n = parse_td(text)
            assert n == g.n and back.bags == dec.bags
            assert sorted(back.tree_edges) == sorted(dec.tree_edges)
            assert emit_td(back, n) == text


def test_dimacs_loop_line():
    g = parse_dimacs("p edge 2 2\ne 1 2\ne 2 2\n")
    assert g.loops == frozenset({1})


def test_format_sniffing():
    assert parse_graph_text(K3_GR) == parse_graph_text(emit_dimacs(clique(3)))
    with pytest.raises(ParseError):
        parse_graph_text("hello\n")


@pytest.mark.parametrize("text", [
    "p tw 3\n1 2\n",              # short header
    "p edge 3 1\n1 2\n",          # wrong header kind for .gr
    "1 2\np tw 2 1\n",            # edge before header
    "p tw 2 1\n1 3\n",            # vertex out of range
    "p tw 2 2\n1 2\n",            # edge count mismatch
    "p tw 2 1\n1 x\n",            # not an integer
    "",                            # empty
])
def test_gr_errors(text):
    with pytest.raises(ParseError):
        parse_gr(text)


@pytest.mark.parametrize("text", [
    "p edge 2 1\n1 2\n",
    "p edge 2 1\ne 1 3\n",
    "p edge 2 2\ne 1 2\n",
    "e 1 2\n",
])
def test_dimacs_errors(text):
    with pytest.raises(ParseError):
        parse_dimacs(text)


@pytest.mark.parametrize("text,fragment", [
    ("s td 1 3 3\nb 2 1 2 3\n", "bag index 2 out of range"),
    ("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 3\n", "bag index 3 out of range"),
    ("s td 1 3\nb 1 1 2 3\n", "malformed header"),
    ("s td 1 3 3\nb 1 1 2 4\n", "out of range"),
    ("s td 2 3 3\nb 1 1 2 3\n", "announces 2 bags"),
    ("s td 1 2 3\nb 1 1 2 3\n", "largest bag"),
    ("s td 1 3 3\nb 1 1 2 3\nb 1 1 2 3\n", "defined twice"),
    ("b 1 1 2 3\n", "before header"),
])
def test_td_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_td(text)


def test_comments_and_blank_lines_skipped():
    text = "c hi\n\np tw 3 2\nc mid\n1 2\n\n2 3\n"
    assert parse_gr(text) == build_graph(3, [(0, 1), (1, 2)])


def test_cycle_file_roundtrip(tmp_path):
    path = tmp_path / "c5.gr"
    path.write_text(emit_gr(cycle(5)))
    assert parse_graph_text(path.read_text()) == cycle(5)
