"""Dynamic programming for homomorphisms over a nice tree decomposition.

The table of a node maps each assignment ``bag -> V(H)`` that extends to a
homomorphism of the subgraph below the node onto the number of such
extensions.  Introduce checks edges into the bag, forget sums out a vertex,
join multiplies.  Leaves have empty bags, so nothing is double counted.

``dp_cells`` reports the state space ``sum |H|^|bag|`` over nodes (the
size of a dense table), ``dp_states`` the assignments actually stored.
"""
from __future__ import annotations

from .budget import Budget
from .decomp import (FORGET, INTRODUCE, JOIN, LEAF, NiceDecomposition, TreeDecomposition,
                     require_valid, to_nice)
from .errors import DecompositionError, Inconclusive, PreconditionError
from .graph import Graph
from .hom import HomResult

DEFAULT_MAX_STATES = 5_000_000


def _as_nice(g: Graph, d) -> NiceDecomposition:
    if isinstance(d, TreeDecomposition):
        return to_nice(d, g)
    if not isinstance(d, NiceDecomposition):
        raise DecompositionError("expected a TreeDecomposition or NiceDecomposition")
    d.check_structure()
    require_valid(g, d.as_tree_decomposition())
    return d


def hom_dp(g: Graph, h: Graph, d: NiceDecomposition | TreeDecomposition, mode: str = "decide",
           max_states: int = DEFAULT_MAX_STATES, budget: Budget | None = None) -> HomResult:
    """Decide, count or find a homomorphism ``g -> h`` along ``d``."""
    if mode not in ("decide", "count", "find"):
        raise PreconditionError(f"hom_dp does not support mode {mode!r}")
    nice = _as_nice(g, d)
    budget = budget if budget is not None else Budget()
    counting = mode == "count"
    keep = mode == "find"
    hmask = h.masks
    full = (1 << h.n) - 1
    loop_mask = 0
    for v in h.loops:
        loop_mask |= 1 << v
    tables: list[dict | None] = [None] * len(nice.nodes)
    cells = 0
    states = 0
    peak = 0
    for i, node in enumerate(nice.nodes):
        budget.tick()
        bag = node.bag
        if node.kind == LEAF:
            table = {(): 1}
        elif node.kind == INTRODUCE:
            child = tables[node.children[0]]
            v = node.vertex
            pos = bag.index(v)
            # positions of v's bag neighbours inside the child's state tuple
            nbr_pos = [j if j < pos else j - 1 for j, w in enumerate(bag)
                       if w != v and w in g.adj[v]]
            base = loop_mask if v in g.adj[v] else full
            table = {}
            for s, c in child.items():
                cand = base
                for j in nbr_pos:
                    cand &= hmask[s[j]]
                    if not cand:
                        break
                head, tail = s[:pos], s[pos:]
                while cand:
                    low = cand & -cand
                    table[head + (low.bit_length() - 1,) + tail] = c
                    cand ^= low
        elif node.kind == FORGET:
            child = tables[node.children[0]]
            pos = nice.nodes[node.children[0]].bag.index(node.vertex)
            table = {}
            if counting:
                for s, c in child.items():
                    key = s[:pos] + s[pos + 1:]
                    table[key] = table.get(key, 0) + c
            else:
                for s in child:
                    table[s[:pos] + s[pos + 1:]] = 1
        elif node.kind == JOIN:
            a, b = (tables[c] for c in node.children)
            if len(a) > len(b):
                a, b = b, a
            table = {s: c * b[s] for s, c in a.items() if s in b}
        else:
            raise DecompositionError(f"unknown nice node kind {node.kind!r}")
        if len(table) > max_states:
            raise Inconclusive(f"DP table with {len(table)} states exceeds limit {max_states}")
        tables[i] = table
        cells += h.n ** len(bag)
        states += len(table)
        peak = max(peak, len(table))
        if not keep:
            for c in node.children:
                tables[c] = None
    root = tables[nice.root]
    total = root.get((), 0)
    stats = {"dp_cells": cells, "dp_states": states, "dp_peak_table": peak,
             "state_base": h.n, "nice_nodes": len(nice.nodes), "width": nice.width}
    res = HomResult(total > 0, count=total if counting else None, stats=stats)
    if keep and total:
        res.witness = _reconstruct(nice, tables, g.n)
    res.trace.append({"path": "dp", "source_n": g.n, "target_n": h.n,
                      "decision": res.decision, "dp_cells": cells})
    return res


def _reconstruct(nice: NiceDecomposition, tables, n: int) -> tuple[int, ...]:
    f = [-1] * n
    stack = [(nice.root, ())]
    while stack:
        i, s = stack.pop()
        node = nice.nodes[i]
        if node.kind == LEAF:
            continue
        if node.kind == INTRODUCE:
            pos = node.bag.index(node.vertex)
            f[node.vertex] = s[pos]
            stack.append((node.children[0], s[:pos] + s[pos + 1:]))
        elif node.kind == FORGET:
            c = node.children[0]
            pos = nice.nodes[c].bag.index(node.vertex)
            child = tables[c]
            x = min(t[pos] for t in child if t[:pos] + t[pos + 1:] == s)
            f[node.vertex] = x
            stack.append((c, s[:pos] + (x,) + s[pos:]))
        else:
            for c in node.children:
                stack.append((c, s))
    return tuple(f)
