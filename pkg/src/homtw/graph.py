"""Finite undirected graphs on dense integer vertices, with loops.

A :class:`Graph` is immutable.  Vertex ``v`` is a loop vertex iff ``v`` is in
its own neighbour set.  Optional side-band labels record where a vertex came
from (product coordinates, union components, original ids of an induced
subgraph) without disturbing the flat 0-based indexing that the search and
DP code rely on.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from math import prod
from typing import Iterable, Sequence

from .errors import GraphError, VertexLimitError

DEFAULT_VERTEX_LIMIT = 10**6


def vertex_limit() -> int:
    """Hard cap on materialized graph size (env ``HOMTW_VERTEX_LIMIT``)."""
    raw = os.environ.get("HOMTW_VERTEX_LIMIT")
    return int(raw) if raw else DEFAULT_VERTEX_LIMIT


@dataclass(frozen=True, eq=True)
class Graph:
    n: int
    adj: tuple[frozenset[int], ...]
    labels: tuple | None = None
    # factor sizes when labels are product coordinates; nested products flatten
    product_sizes: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match vertex count")
        if self.labels is not None:
            if len(self.labels) != self.n or len(set(self.labels)) != self.n:
                raise GraphError("labels must be a bijection onto vertices")

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    # cached views -----------------------------------------------------

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhoods as int bitsets."""
        out = []
        for nb in self.adj:
            m = 0
            for w in nb:
                m |= 1 << w
            out.append(m)
        return tuple(out)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Sorted edge list, each edge once as ``(u, v)`` with ``u <= v``."""
        return tuple((u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u <= v)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def loops(self) -> frozenset[int]:
        return frozenset(v for v in range(self.n) if v in self.adj[v])

    @property
    def has_loop(self) -> bool:
        return bool(self.loops)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @property
    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def induced_subgraph(self, vertices: Iterable[int]) -> Graph:
        """Subgraph induced on ``vertices`` (kept in ascending order).

        Labels of the result are the original vertex ids.
        """
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        adj = tuple(frozenset(index[w] for w in self.adj[v] if w in index) for v in keep)
        return Graph(len(keep), adj, tuple(keep))

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling must be a permutation")
        adj: list = [None] * self.n
        for v in range(self.n):
            adj[perm[v]] = frozenset(perm[w] for w in self.adj[v])
        return Graph(self.n, tuple(adj))

    def without_labels(self) -> Graph:
        return Graph(self.n, self.adj) if self.labels is not None or self.product_sizes else self


def build_graph(n: int, edges: Iterable[tuple[int, int]], labels: Sequence | None = None) -> Graph:
    """Graph on ``range(n)`` from an edge list; duplicates collapse."""
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge endpoint out of range: ({u}, {v}) with n={n}")
        adj[u].add(v)
        adj[v].add(u)
    return Graph(n, tuple(frozenset(s) for s in adj), tuple(labels) if labels is not None else None)


def is_homomorphism(f: Sequence[int], source: Graph, target: Graph) -> bool:
    """Independent edge-by-edge check that ``f`` maps ``source`` into ``target``."""
    if len(f) != source.n:
        return False
    if any(not (0 <= x < target.n) for x in f):
        return False
    return all(f[v] in target.adj[f[u]] for u, v in source.edges)


def disjoint_union(parts: Sequence[Graph]) -> Graph:
    """``H_1 + ... + H_m`` with vertex labels ``(part, vertex)``."""
    adj = []
    labels = []
    offset = 0
    for i, g in enumerate(parts):
        adj.extend(frozenset(w + offset for w in nb) for nb in g.adj)
        labels.extend((i, v) for v in range(g.n))
        offset += g.n
    return Graph(offset, tuple(adj), tuple(labels))


def product_index(coords: Sequence[int], sizes: Sequence[int]) -> int:
    """Flat index of a coordinate tuple; first coordinate most significant."""
    idx = 0
    for c, s in zip(coords, sizes):
        idx = idx * s + c
    return idx


def product_coords(idx: int, sizes: Sequence[int]) -> tuple[int, ...]:
    out = []
    for s in reversed(sizes):
        idx, c = divmod(idx, s)
        out.append(c)
    return tuple(reversed(out))


def direct_product(factors: Sequence[Graph], limit: int | None = None) -> Graph:
    """Direct (tensor) product; labels are flat coordinate tuples."""
    if not factors:
        raise GraphError("direct product needs at least one factor")
    sizes = [f.n for f in factors]
    if any(s == 0 for s in sizes):
        raise GraphError("direct product factors must be non-empty")
    total = prod(sizes)
    limit = vertex_limit() if limit is None else limit
    if total > limit:
        raise VertexLimitError(f"product has {total} vertices, limit is {limit}")
    nbrs = [[sorted(nb) for nb in f.adj] for f in factors]
    coords = list(cartesian(*(range(s) for s in sizes)))
    flat_sizes: list[int] = []
    for f in factors:
        flat_sizes.extend(f.product_sizes or (f.n,))
    # strides turn neighbour tuples into flat indices without re-multiplying
    strides = [prod(sizes[i + 1:]) for i in range(len(sizes))]
    adj = []
    for c in coords:
        choices = [[w * st for w in nbrs[i][ci]] for i, (ci, st) in enumerate(zip(c, strides))]
        adj.append(frozenset(sum(t) for t in cartesian(*choices)))
    if len(flat_sizes) == len(sizes):
        labels = tuple(coords)
    else:
        # a product factor contributes its own coordinates, in the same index order
        labels = tuple(product_coords(i, flat_sizes) for i in range(total))
    return Graph(total, tuple(adj), labels, tuple(flat_sizes))


def projection(g: Graph, i: int) -> tuple[int, ...]:
    """Coordinate ``i`` of every vertex of a labelled product graph."""
    if g.labels is None:
        raise GraphError("graph carries no product labels")
    return tuple(lab[i] for lab in g.labels)
