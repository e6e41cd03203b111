"""Cores: endomorphism search, core computation, equivalence and incomparability.

A graph is a core when every endomorphism is an automorphism, i.e. no
endomorphism misses a vertex.  ``is_core`` looks for an endomorphism that
avoids ``v`` for each vertex ``v`` in turn (lists ``V(H) - {v}``).
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .budget import Budget
from .errors import Inconclusive
from .graph import Graph, is_homomorphism
from .hom import HomQuery, hom_backtrack
from .invariants import chromatic_number, clique_number, odd_girth, two_colouring

IS_CORE, NOT_CORE, INCONCLUSIVE = "is-core", "not-core", "inconclusive"


@dataclass
class CoreCertificate:
    verdict: str
    witness: tuple[int, ...] | None = None  # endomorphism missing at least one vertex
    core: tuple[int, ...] | None = None
    searches: dict[int, int] = field(default_factory=dict)  # v -> nodes of the failed search
    reason: str = ""

    @property
    def is_core(self) -> bool:
        return self.verdict == IS_CORE

    def __bool__(self):
        return self.is_core


@dataclass
class CoreResult:
    graph: Graph  # induced subgraph, labels are vertices of the input
    vertices: tuple[int, ...]
    retraction: tuple[int, ...]  # V(G) -> vertices, identity on vertices
    kind: str  # "K1", "K2", "K1*", "empty" or "nontrivial"


def avoiding_endomorphism(h: Graph, v: int, budget: Budget | None = None):
    """An endomorphism of ``h`` whose image misses ``v``, or None.

    Returns ``(map or None, search nodes)``.
    """
    lists = [[x for x in range(h.n) if x != v]] * h.n
    res = hom_backtrack(HomQuery(h, h, "find", lists=lists, budget=budget))
    return res.witness, res.stats["search_nodes"]


def _avoid_job(args):
    h, v, nodes, seconds = args
    try:
        f, used = avoiding_endomorphism(h, v, Budget(nodes, seconds))
    except Inconclusive as exc:
        return v, "inconclusive", str(exc)
    return v, f, used


def _non_ramified_pair(h: Graph):
    m = h.masks
    for x in range(h.n):
        for y in range(h.n):
            if x != y and m[x] & ~m[y] == 0:
                return x, y
    return None


def is_core(h: Graph, budget: Budget | None = None, threads: int = 1) -> CoreCertificate:
    """Exhaustive core test.  The verdict does not depend on ``threads``."""
    h = h.without_labels()
    n = h.n
    if n <= 1:
        return CoreCertificate(IS_CORE, reason="at most one vertex")
    if h.loops:
        x = min(h.loops)
        return CoreCertificate(NOT_CORE, (x,) * n, reason="constant map onto a loop")
    pair = _non_ramified_pair(h)
    if pair is not None:
        x, y = pair
        f = tuple(y if v == x else v for v in range(n))
        return CoreCertificate(NOT_CORE, f, reason=f"N({x}) is contained in N({y})")
    budget = budget if budget is not None else Budget()
    searches: dict[int, int] = {}
    if threads > 1:
        jobs = [(h, v, budget.nodes, budget.seconds) for v in range(n)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = sorted(pool.map(_avoid_job, jobs))
        for v, f, used in results:
            if f == "inconclusive":
                return CoreCertificate(INCONCLUSIVE, searches=searches, reason=used)
            if f is not None:
                return CoreCertificate(NOT_CORE, f, reason=f"endomorphism avoiding {v}")
            searches[v] = used
        return CoreCertificate(IS_CORE, core=tuple(range(n)), searches=searches,
                               reason="no vertex can be avoided")
    for v in range(n):
        try:
            f, used = avoiding_endomorphism(h, v, budget)
        except Inconclusive as exc:
            return CoreCertificate(INCONCLUSIVE, searches=searches, reason=str(exc))
        if f is not None:
            return CoreCertificate(NOT_CORE, f, reason=f"endomorphism avoiding {v}")
        searches[v] = used
    return CoreCertificate(IS_CORE, core=tuple(range(n)), searches=searches,
                           reason="no vertex can be avoided")


def recheck(h: Graph, cert: CoreCertificate) -> bool:
    """Re-validate a certificate with fresh solver instances."""
    h = h.without_labels()
    if cert.verdict == NOT_CORE:
        f = cert.witness
        return f is not None and is_homomorphism(f, h, h) and len(set(f)) < h.n
    if cert.verdict == IS_CORE:
        if h.n <= 1:
            return True
        return all(avoiding_endomorphism(h, v)[0] is None for v in range(h.n))
    return False


def core_of(g: Graph, budget: Budget | None = None) -> CoreResult:
    """Core of ``g`` as an induced subgraph, with a retraction onto it.

    Trivial cores are read off directly; otherwise vertices are removed one
    at a time, smallest removable index first.
    """
    g = g.without_labels()
    n = g.n
    if n == 0:
        return CoreResult(g, (), (), "empty")
    if g.loops:
        x = min(g.loops)
        return CoreResult(g.induced_subgraph([x]), (x,), (x,) * n, "K1*")
    if g.m == 0:
        return CoreResult(g.induced_subgraph([0]), (0,), (0,) * n, "K1")
    colours = two_colouring(g)
    if colours is not None:
        a, b = g.edges[0]
        if colours[a]:
            a, b = b, a
        # every edge crosses the colour classes, in each component separately
        ret = tuple(b if c else a for c in colours)
        return CoreResult(g.induced_subgraph(sorted((a, b))), tuple(sorted((a, b))), ret, "K2")
    budget = budget if budget is not None else Budget()
    alive = list(range(n))
    ret = list(range(n))
    v_index = 0
    while v_index < len(alive):
        v = alive[v_index]
        cur = g.induced_subgraph(alive)
        pos = {x: i for i, x in enumerate(alive)}
        lists = [[i for i in range(cur.n) if i != pos[v]]] * cur.n
        f = hom_backtrack(HomQuery(cur, cur, "find", lists=lists, budget=budget)).witness
        if f is None:
            v_index += 1
            continue
        # f maps cur into cur - v; compose into the retraction
        ret = [alive[f[pos[r]]] for r in ret]
        alive.remove(v)
        # vertices before v stay unremovable in the smaller graph
    core = g.induced_subgraph(alive)
    # make the map a retraction: on the core it may be an automorphism
    pos = {x: i for i, x in enumerate(alive)}
    on_core = [pos[ret[x]] for x in alive]
    inv = [0] * len(alive)
    for i, y in enumerate(on_core):
        inv[y] = i
    ret = tuple(alive[inv[pos[r]]] for r in ret)
    return CoreResult(core, tuple(alive), ret, "nontrivial")


def hom_equivalent(a: Graph, b: Graph):
    """``(equivalent, a->b map or None, b->a map or None)``."""
    from .solve import hom_solve

    f = hom_solve(a, b, mode="find").witness
    g = hom_solve(b, a, mode="find").witness
    ok = f is not None and g is not None
    return ok, f, g


def _filtered(a: Graph, b: Graph) -> str | None:
    """A reason why ``a -> b`` is impossible, from cheap invariants."""
    if a.loops or b.loops:
        return None
    if clique_number(a) > clique_number(b):
        return "clique number"
    if odd_girth(a) < odd_girth(b):
        return "odd girth"
    if chromatic_number(a) > chromatic_number(b):
        return "chromatic number"
    return None


def comparison(a: Graph, b: Graph) -> dict:
    """Hom existence both ways, noting which answers came from filters."""
    from .solve import hom_solve

    out = {}
    for key, (x, y) in (("a_to_b", (a, b)), ("b_to_a", (b, a))):
        reason = _filtered(x, y)
        if reason is not None:
            out[key] = False
            out[key + "_by"] = reason
        else:
            out[key] = hom_solve(x, y).decision
            out[key + "_by"] = "search"
    return out


def incomparable(a: Graph, b: Graph) -> bool:
    c = comparison(a, b)
    return not c["a_to_b"] and not c["b_to_a"]
