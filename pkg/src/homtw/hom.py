"""Backtracking homomorphism search with pins, lists and arc consistency.

Domains are int bitsets over target vertices.  Before every branch the
domains are made arc consistent: for a source edge ``uw`` the image of ``u``
must have a neighbour in the domain of ``w``.  Branching picks the smallest
domain (ties by index) except in ``enumerate`` mode, which branches on the
lowest index so that results come out in lexicographic order.
"""
from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .budget import Budget
from .errors import GraphError, PreconditionError
from .graph import Graph

MODES = ("decide", "find", "enumerate", "count")


@dataclass
class HomQuery:
    source: Graph
    target: Graph
    mode: str = "decide"
    pins: Mapping[int, int] = field(default_factory=dict)
    lists: Mapping[int, Iterable[int]] | Sequence[Iterable[int]] | None = None
    budget: Budget | None = None
    cap: int | None = None  # enumeration cap; ignored by the other modes


@dataclass
class HomResult:
    decision: bool
    witness: tuple[int, ...] | None = None
    count: int | None = None
    homs: list[tuple[int, ...]] | None = None
    stats: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def initial_domains(source: Graph, target: Graph, pins=None, lists=None) -> list[int]:
    """Per-source-vertex bitsets of admissible images (before propagation)."""
    full = (1 << target.n) - 1
    loop_mask = 0
    for v in target.loops:
        loop_mask |= 1 << v
    has_nbr = 0
    for v in range(target.n):
        if target.adj[v]:
            has_nbr |= 1 << v
    dom = []
    for u in range(source.n):
        d = full
        if u in source.adj[u]:
            d &= loop_mask
        elif source.adj[u]:
            d &= has_nbr
        dom.append(d)
    list_mask: dict[int, int] = {}
    if lists is not None:
        items = lists.items() if isinstance(lists, Mapping) else enumerate(lists)
        for u, allowed in items:
            if not 0 <= u < source.n:
                raise GraphError(f"list for unknown source vertex {u}")
            m = 0
            for x in allowed:
                if not 0 <= x < target.n:
                    raise GraphError(f"list entry {x} is not a target vertex")
                m |= 1 << x
            list_mask[u] = m
            dom[u] &= m
    for u, x in (pins or {}).items():
        if not 0 <= u < source.n or not 0 <= x < target.n:
            raise GraphError(f"pin {u}->{x} references a missing vertex")
        if u in list_mask and not list_mask[u] >> x & 1:
            raise PreconditionError(f"pin {u}->{x} is outside the list of {u}")
        dom[u] &= 1 << x
    return dom


class Search:
    """One homomorphism search over fixed source/target graphs."""

    def __init__(self, source: Graph, target: Graph, budget: Budget | None = None):
        self.source = source
        self.target = target
        self.budget = budget if budget is not None else Budget()
        self.nbrs = [tuple(w for w in source.adj[u] if w != u) for u in range(source.n)]
        self.tmask = target.masks
        self._support: dict[int, int] = {}

    def support(self, d: int) -> int:
        s = self._support.get(d)
        if s is None:
            s = 0
            tm = self.tmask
            m = d
            while m:
                low = m & -m
                s |= tm[low.bit_length() - 1]
                m ^= low
            if len(self._support) < 200_000:
                self._support[d] = s
        return s

    def propagate(self, dom: list[int], changed: Iterable[int]) -> bool:
        queue = deque(changed)
        queued = set(queue)
        nbrs = self.nbrs
        while queue:
            w = queue.popleft()
            queued.discard(w)
            sup = self.support(dom[w])
            for u in nbrs[w]:
                d = dom[u]
                nd = d & sup
                if nd != d:
                    if not nd:
                        return False
                    dom[u] = nd
                    if u not in queued:
                        queued.add(u)
                        queue.append(u)
        return True

    def start(self, dom: list[int]) -> list[int] | None:
        dom = list(dom)
        if any(d == 0 for d in dom):
            return None
        if not self.propagate(dom, range(len(dom))):
            return None
        return dom

    def _pick(self, dom: list[int], lex: bool) -> int:
        best, size = -1, 0
        for v, d in enumerate(dom):
            if d & (d - 1):
                if lex:
                    return v
                s = d.bit_count()
                if best < 0 or s < size:
                    best, size = v, s
                    if s == 2:
                        break
        return best

    def solutions(self, dom: list[int], lex: bool = False) -> Iterator[tuple[int, ...]]:
        """Yield every homomorphism consistent with ``dom`` (already propagated)."""
        tick = self.budget.tick
        tick()
        v = self._pick(dom, lex)
        if v < 0:
            yield tuple(d.bit_length() - 1 for d in dom)
            return
        stack = [(dom, v, dom[v])]
        while stack:
            d, v, rest = stack[-1]
            if not rest:
                stack.pop()
                continue
            low = rest & -rest
            stack[-1] = (d, v, rest ^ low)
            nd = list(d)
            nd[v] = low
            tick()
            if not self.propagate(nd, (v,)):
                continue
            w = self._pick(nd, lex)
            if w < 0:
                yield tuple(x.bit_length() - 1 for x in nd)
            else:
                stack.append((nd, w, nd[w]))

    def count(self, dom: list[int]) -> int:
        self.budget.tick()
        dom = list(dom)
        factor = 1
        nbrs = self.nbrs
        for v, d in enumerate(dom):
            # a vertex whose neighbours are all fixed contributes independently
            if d & (d - 1) and all(not (dom[w] & (dom[w] - 1)) for w in nbrs[v]):
                factor *= d.bit_count()
                dom[v] = d & -d
        v = self._pick(dom, False)
        if v < 0:
            return factor
        total = 0
        for x in _bits(dom[v]):
            nd = list(dom)
            nd[v] = 1 << x
            if self.propagate(nd, (v,)):
                total += self.count(nd)
        return factor * total


def _run(q: HomQuery) -> HomResult:
    if q.mode not in MODES:
        raise PreconditionError(f"unknown mode {q.mode!r}")
    budget = q.budget if q.budget is not None else Budget()
    used0 = budget.used
    search = Search(q.source, q.target, budget)
    dom = search.start(initial_domains(q.source, q.target, q.pins, q.lists))
    stats: dict = {}
    if q.mode == "count":
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 2 * q.source.n + 200))
        try:
            c = 0 if dom is None else search.count(dom)
        finally:
            sys.setrecursionlimit(old)
        res = HomResult(c > 0, count=c)
    elif q.mode == "enumerate":
        homs = []
        truncated = False
        if dom is not None:
            for f in search.solutions(dom, lex=True):
                if q.cap is not None and len(homs) >= q.cap:
                    truncated = True
                    break
                homs.append(f)
        res = HomResult(bool(homs), witness=homs[0] if homs else None, homs=homs)
        stats["truncated"] = truncated
    else:
        f = None if dom is None else next(search.solutions(dom), None)
        res = HomResult(f is not None, witness=f if q.mode == "find" else None)
        if q.mode == "decide" and f is not None:
            res.witness = f
    stats["search_nodes"] = budget.used - used0
    res.stats.update(stats)
    res.trace.append({"path": "backtrack", "source_n": q.source.n,
                      "target_n": q.target.n, "decision": res.decision})
    return res


def hom_backtrack(q: HomQuery) -> HomResult:
    """Exact answer to ``q``; raises :class:`Inconclusive` when out of budget."""
    return _run(q)


def find_hom(source: Graph, target: Graph, pins=None, lists=None,
             budget: Budget | None = None) -> tuple[int, ...] | None:
    res = _run(HomQuery(source, target, "find", pins or {}, lists, budget))
    return res.witness


def count_homs(source: Graph, target: Graph, pins=None, lists=None,
               budget: Budget | None = None) -> int:
    return _run(HomQuery(source, target, "count", pins or {}, lists, budget)).count


def iter_homs(source: Graph, target: Graph, pins=None, lists=None,
              budget: Budget | None = None, lex: bool = False) -> Iterator[tuple[int, ...]]:
    """Lazily yield homomorphisms (MRV order unless ``lex``)."""
    search = Search(source, target, budget)
    dom = search.start(initial_domains(source, target, pins, lists))
    if dom is not None:
        yield from search.solutions(dom, lex)


def constructible_set(k: Graph, x0: int, pins: Mapping[int, int] | Sequence[tuple[int, int]],
                      h: Graph, budget: Budget | None = None) -> frozenset[int]:
    """Images of ``x0`` over all homomorphisms ``k -> h`` extending ``pins``."""
    pins = dict(pins)
    if not 0 <= x0 < k.n:
        raise GraphError(f"x0={x0} is not a vertex of K")
    budget = budget if budget is not None else Budget()
    search = Search(k, h, budget)
    base = search.start(initial_domains(k, h, pins))
    if base is None:
        return frozenset()
    out = set()
    for y in _bits(base[x0]):
        dom = list(base)
        dom[x0] = 1 << y
        if search.propagate(dom, (x0,)) and next(search.solutions(dom), None) is not None:
            out.add(y)
    return frozenset(out)
