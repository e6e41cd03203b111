"""Named graphs with fixed, documented vertex numberings.

Numberings (the drawings these graphs usually come with fix no order):

* ``clique(k)``: ``0..k-1``.
* ``cycle(n)``: ``i ~ i+1 (mod n)``; ``cycle(1)`` is a loop, ``cycle(2)`` an edge.
* ``path(n)``: ``n`` vertices, ``i ~ i+1``.
* ``kneser(n, k)``: ``k``-subsets of ``{0..n-1}`` in lexicographic order,
  adjacent iff disjoint.  ``petersen`` is ``kneser(5, 2)``.
* ``grotzsch``: Mycielskian of C5.  Outer cycle ``0..4``; ``5+i`` is adjacent
  to ``i-1`` and ``i+1``; hub ``10`` is adjacent to ``5..9``.
* ``brinkmann``: outer ring ``0..6`` with ``o_i ~ o_{i+2}``; middle ``7..13``
  with ``m_i ~ o_{i+3}, o_{i-3}, c_{i+1}, c_{i-1}``; inner ``14..20`` with
  ``c_i ~ c_{i+3}`` (indices mod 7).
* ``chvatal``: vertices ``a..l`` mapped to ``0..11``.
* ``bowtie``: hub ``0`` with triangles ``0,1,2`` and ``0,3,4``.
* ``k1star``: one vertex with a loop.
"""
from __future__ import annotations

from itertools import combinations

from .errors import GraphError
from .graph import Graph, build_graph


def clique(k: int) -> Graph:
    if k < 1:
        raise GraphError("clique needs k >= 1")
    return build_graph(k, combinations(range(k), 2))


def cycle(n: int) -> Graph:
    if n < 1:
        raise GraphError("cycle needs n >= 1")
    return build_graph(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return build_graph(n, ((i, i + 1) for i in range(n - 1)))


def kneser(n: int, k: int) -> Graph:
    if k < 1 or n < 1 or k > n:
        raise GraphError(f"invalid Kneser parameters n={n}, k={k}")
    subsets = [frozenset(c) for c in combinations(range(n), k)]
    edges = [(i, j) for i, j in combinations(range(len(subsets)), 2)
             if not subsets[i] & subsets[j]]
    return build_graph(len(subsets), edges, labels=[tuple(sorted(s)) for s in subsets])


def grotzsch() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    for i in range(5):
        edges += [(5 + i, (i - 1) % 5), (5 + i, (i + 1) % 5), (10, 5 + i)]
    return build_graph(11, edges)


def brinkmann() -> Graph:
    def o(i):
        return i % 7

    def m(i):
        return 7 + i % 7

    def c(i):
        return 14 + i % 7

    edges = []
    for i in range(7):
        edges += [(o(i), o(i + 2)), (m(i), o(i + 3)), (m(i), o(i - 3)),
                  (m(i), c(i + 1)), (m(i), c(i - 1)), (c(i), c(i + 3))]
    return build_graph(21, edges)


_CHVATAL = ("ab bc cd da ae ei ih hl le ej af fg gk kj jf fi "
            "gb bh hk kd dl lg ic cj")


def chvatal() -> Graph:
    edges = [(ord(p[0]) - 97, ord(p[1]) - 97) for p in _CHVATAL.split()]
    return build_graph(12, edges)


def petersen() -> Graph:
    return kneser(5, 2)


def bowtie() -> Graph:
    return build_graph(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])


def k1star() -> Graph:
    return build_graph(1, [(0, 0)])


_BUILDERS = {
    "clique": (clique, 1),
    "cycle": (cycle, 1),
    "path": (path, 1),
    "kneser": (kneser, 2),
    "grotzsch": (grotzsch, 0),
    "brinkmann": (brinkmann, 0),
    "chvatal": (chvatal, 0),
    "petersen": (petersen, 0),
    "bowtie": (bowtie, 0),
    "k1star": (k1star, 0),
}

NAMES = tuple(_BUILDERS)


def named_graph(name: str, *params: int) -> Graph:
    """Build a named graph, e.g. ``named_graph("kneser", 5, 2)``."""
    try:
        builder, arity = _BUILDERS[name.lower()]
    except KeyError:
        raise GraphError(f"unknown graph name {name!r}") from None
    if len(params) != arity:
        raise GraphError(f"{name} takes {arity} parameter(s), got {len(params)}")
    return builder(*params)
