import random

import networkx as nx
import pytest

from homtw.decomp import TreeDecomposition
from homtw.graph import Graph, build_graph


def random_graph(rng: random.Random, n: int, p: float, loops: float = 0.0) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i, n)
             if (i < j and rng.random() < p) or (i == j and rng.random() < loops)]
    return build_graph(n, edges)


def from_nx(g) -> Graph:
    index = {v: i for i, v in enumerate(sorted(g.nodes))}
    return build_graph(len(index), [(index[u], index[v]) for u, v in g.edges])


def connected_atlas(max_n=6):
    """All connected graphs with 1..max_n vertices, up to isomorphism."""
    return [from_nx(g) for g in nx.graph_atlas_g()
            if 0 < g.number_of_nodes() <= max_n and nx.is_connected(g)]


def partial_ktree(rng: random.Random, n: int, k: int = 3, keep: float = 0.6):
    """Random subgraph of a k-tree together with the k-tree's decomposition."""
    edges = {(i, j) for i in range(k + 1) for j in range(i + 1, k + 1)}
    bags = [frozenset(range(k + 1))]
    tree = []
    for v in range(k + 1, n):
        host = rng.randrange(len(bags))
        sub = rng.sample(sorted(bags[host]), k)
        edges.update((u, v) for u in sub)
        bags.append(frozenset(sub + [v]))
        tree.append((host, len(bags) - 1))
    kept = [e for e in sorted(edges) if rng.random() < keep]
    return build_graph(n, kept), TreeDecomposition.make(bags, tree)


def brute_homs(g: Graph, h: Graph) -> int:
    """Count homomorphisms by plain enumeration (tiny graphs only)."""
    from itertools import product

    total = 0
    for f in product(range(h.n), repeat=g.n):
        if all(f[v] in h.adj[f[u]] for u, v in g.edges):
            total += 1
    return total


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def report(number: int, ok: bool, detail: str) -> None:
        line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
