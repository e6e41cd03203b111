"""Exact structural invariants: clique number, chromatic number, odd girth."""
from __future__ import annotations

import math
import sys
from collections import deque
from dataclasses import dataclass

from .budget import Budget
from .graph import Graph


@dataclass(frozen=True)
class GraphInvariants:
    omega: int
    chi: float  # math.inf for graphs with a loop
    odd_girth: float  # math.inf for bipartite graphs
    bipartite: bool
    connected: bool
    ramified: bool


def _loopless_masks(g: Graph) -> list[int]:
    return [m & ~(1 << v) for v, m in enumerate(g.masks)]


def clique_number(g: Graph, budget: Budget | None = None) -> int:
    """Largest clique on distinct vertices (loops ignored)."""
    budget = budget or Budget()
    masks = _loopless_masks(g)
    best = 0

    def expand(size: int, cand: int) -> None:
        nonlocal best
        budget.tick()
        if cand == 0:
            best = max(best, size)
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            expand(size + 1, cand & masks[v])

    expand(0, (1 << g.n) - 1)
    return best


def greedy_clique(g: Graph) -> list[int]:
    masks = _loopless_masks(g)
    order = sorted(range(g.n), key=lambda v: (-masks[v].bit_count(), v))
    clique: list[int] = []
    for v in order:
        if all(masks[v] >> u & 1 for u in clique):
            clique.append(v)
    return clique


def chromatic_number(g: Graph, budget: Budget | None = None) -> float:
    """Exact chromatic number by DSATUR branch and bound."""
    if g.has_loop:
        return math.inf
    if g.n == 0:
        return 0
    if g.m == 0:
        return 1
    budget = budget or Budget()
    lower = clique_number(g, budget)
    colour = [-1] * g.n
    # forbidden[v] is a bitset of colours used by coloured neighbours
    forbidden = [0] * g.n
    best = g.n + 1
    if best <= lower:
        return lower

    def pick() -> int:
        chosen, key = -1, None
        for v in range(g.n):
            if colour[v] >= 0:
                continue
            k = (forbidden[v].bit_count(), sum(1 for w in g.adj[v] if colour[w] < 0))
            if key is None or k > key:
                chosen, key = v, k
        return chosen

    def search(coloured: int, used: int) -> bool:
        nonlocal best
        budget.tick()
        if coloured == g.n:
            best = used
            return best == lower
        v = pick()
        for c in range(min(used + 1, best - 1)):
            if forbidden[v] >> c & 1:
                continue
            colour[v] = c
            changed = []
            for w in g.adj[v]:
                if colour[w] < 0 and not forbidden[w] >> c & 1:
                    forbidden[w] |= 1 << c
                    changed.append(w)
            done = search(coloured + 1, max(used, c + 1))
            for w in changed:
                forbidden[w] &= ~(1 << c)
            colour[v] = -1
            if done:
                return True
        return False

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * g.n + 100))
    try:
        search(0, 0)
    finally:
        sys.setrecursionlimit(old)
    return best


def odd_girth(g: Graph) -> float:
    """Length of a shortest odd cycle, ``math.inf`` if bipartite; 1 with a loop."""
    if g.has_loop:
        return 1
    best = math.inf
    for s in range(g.n):
        dist = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in g.adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
                elif dist[w] == dist[u]:
                    best = min(best, 2 * dist[u] + 1)
    return best


def two_colouring(g: Graph) -> list[int] | None:
    """A proper 2-colouring, or ``None`` when the graph is not bipartite."""
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    queue.append(w)
                elif side[w] == side[u]:
                    return None
    return side


def is_bipartite(g: Graph) -> bool:
    return two_colouring(g) is not None


def is_ramified(g: Graph) -> bool:
    """No two distinct vertices with N(u) contained in N(v)."""
    masks = g.masks
    for u in range(g.n):
        for v in range(g.n):
            if u != v and masks[u] & ~masks[v] == 0:
                return False
    return True


def invariants(g: Graph, budget: Budget | None = None) -> GraphInvariants:
    budget = budget or Budget()
    og = odd_girth(g)
    return GraphInvariants(
        omega=clique_number(g, budget),
        chi=chromatic_number(g, budget),
        odd_girth=og,
        bipartite=og == math.inf,
        connected=g.is_connected,
        ramified=is_ramified(g),
    )
