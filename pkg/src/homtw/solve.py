"""Dispatch layer: trivial targets, components, prime factors, then DP.

The pipeline for ``G -> H``:

1. looped, edgeless or bipartite ``H`` are answered directly (decide/find);
2. ``G`` is split into components, all of which must map;
3. a connected ``G`` maps into a disconnected ``H`` iff it maps into one of
   its components;
4. a connected non-bipartite ``H`` is factorized and ``G -> A x B`` iff
   ``G -> A`` and ``G -> B`` (counts multiply);
5. what remains is solved by the tree decomposition DP.
"""
from __future__ import annotations

from .budget import Budget
from .decomp import TreeDecomposition, heuristic_decomposition, restrict
from .dp import DEFAULT_MAX_STATES, hom_dp
from .errors import PreconditionError
from .graph import Graph, is_homomorphism
from .hom import HomResult
from .invariants import is_bipartite, two_colouring

SOLVE_MODES = ("decide", "find", "count")


class _Run:
    def __init__(self, mode, factor_dispatch, budget, max_states):
        self.mode = mode
        self.factor_dispatch = factor_dispatch
        self.budget = budget
        self.max_states = max_states
        self.trace: list[dict] = []
        self.state_base = 0
        self.dp_cells = 0
        self.dp_states = 0
        self.base_queries = 0

    # each solver returns (decision, witness or None, count or None)

    def solve(self, g: Graph, h: Graph, d: TreeDecomposition | None, depth=0):
        if self.mode != "count":
            shortcut = self.trivial(g, h)
            if shortcut is not None:
                return shortcut
        if g.n == 0:
            return True, (), 1
        comps = g.components
        if len(comps) > 1:
            return self.by_components(g, h, d, comps, depth)
        return self.connected(g, h, d, depth)

    def trivial(self, g: Graph, h: Graph):
        if h.n == 0:
            ok = g.n == 0
            self.trace.append({"path": "trivial", "rule": "empty target", "decision": ok})
            return ok, (() if ok else None), int(ok)
        if h.loops:
            x = min(h.loops)
            self.trace.append({"path": "trivial", "rule": "looped target", "decision": True})
            return True, (x,) * g.n, None
        if h.m == 0:
            ok = g.m == 0
            self.trace.append({"path": "trivial", "rule": "edgeless target", "decision": ok})
            return ok, ((0,) * g.n if ok else None), None
        if is_bipartite(h):
            colours = two_colouring(g)
            ok = colours is not None
            self.trace.append({"path": "trivial", "rule": "bipartite target", "decision": ok})
            if not ok:
                return False, None, None
            a, b = h.edges[0]
            return True, tuple(b if c else a for c in colours), None
        return None

    def by_components(self, g, h, d, comps, depth):
        witness = [0] * g.n
        count = 1
        verdicts = []
        decision = True
        for comp in comps:
            sub = g.induced_subgraph(comp)
            sd = restrict(d, comp) if d is not None else None
            ok, w, c = self.solve(sub, h, sd, depth + 1)
            verdicts.append(ok)
            if not ok:
                decision = False
                if self.mode != "count":
                    break
            if w is not None:
                for i, v in enumerate(comp):
                    witness[v] = w[i]
            if c is not None:
                count *= c
        self.trace.append({"path": "components", "depth": depth, "parts": len(comps),
                           "verdicts": verdicts, "decision": decision})
        if self.mode == "count":
            return count > 0, None, count
        return decision, (tuple(witness) if decision and self.mode == "find" else None), None

    def connected(self, g, h, d, depth):
        hcomps = h.components
        if len(hcomps) > 1:
            total = 0
            verdicts = []
            for comp in hcomps:
                sub = h.induced_subgraph(comp)
                ok, w, c = self.solve(g, sub, d, depth + 1)
                verdicts.append(ok)
                if self.mode == "count":
                    total += c
                elif ok:
                    self.trace.append({"path": "target-components", "depth": depth,
                                       "parts": len(hcomps), "verdicts": verdicts,
                                       "decision": True})
                    return True, (tuple(comp[x] for x in w) if w is not None else None), None
            decision = any(verdicts)
            self.trace.append({"path": "target-components", "depth": depth,
                               "parts": len(hcomps), "verdicts": verdicts, "decision": decision})
            return decision, None, (total if self.mode == "count" else None)
        if self.factor_dispatch and h.n >= 2 and not is_bipartite(h):
            from .algebra import factorize_prime

            fact = factorize_prime(h)
            if len(fact.factors) > 1:
                return self.by_factors(g, h, d, fact, depth)
        return self.base(g, h, d, depth)

    def by_factors(self, g, h, d, fact, depth):
        # the plan fixes the state base even if an early factor already fails
        self.state_base = max(self.state_base, max(f.n for f in fact.factors))
        parts = []
        verdicts = []
        count = 1
        decision = True
        for i, f in enumerate(fact.factors):
            ok, w, c = self.base(g, f, d, depth + 1, factor=i)
            verdicts.append(ok)
            parts.append(w)
            if c is not None:
                count *= c
            if not ok:
                decision = False
                if self.mode != "count":
                    break
        self.trace.append({"path": "factors", "depth": depth,
                           "factor_sizes": [f.n for f in fact.factors],
                           "verdicts": verdicts, "decision": decision})
        if self.mode == "count":
            return count > 0, None, count
        if not decision or self.mode != "find":
            return decision, None, None
        where = fact.vertex_of()
        witness = tuple(where[tuple(p[v] for p in parts)] for v in range(g.n))
        return True, witness, None

    def base(self, g, h, d, depth, factor=None):
        if d is None:
            d = heuristic_decomposition(g)
        res = hom_dp(g, h, d, self.mode,
                     max_states=self.max_states, budget=self.budget)
        self.base_queries += 1
        self.state_base = max(self.state_base, h.n)
        self.dp_cells += res.stats["dp_cells"]
        self.dp_states += res.stats["dp_states"]
        entry = {"path": "dp", "depth": depth, "source_n": g.n, "target_n": h.n,
                 "width": res.stats["width"], "dp_cells": res.stats["dp_cells"],
                 "decision": res.decision}
        if factor is not None:
            entry["factor"] = factor
        self.trace.append(entry)
        return res.decision, res.witness, res.count


def hom_solve(g: Graph, h: Graph, d: TreeDecomposition | None = None, mode: str = "decide",
              factor_dispatch: bool = True, budget: Budget | None = None,
              max_states: int = DEFAULT_MAX_STATES) -> HomResult:
    """Decide, find or count homomorphisms ``g -> h`` through the dispatch pipeline.

    ``d`` is an optional tree decomposition of ``g``; without one the min-fill
    heuristic is used per component.  ``stats["state_base"]`` is the largest
    DP target of the chosen plan, i.e. the base of the per-bag state space.
    """
    if mode == "find-one":
        mode = "find"
    if mode not in SOLVE_MODES:
        raise PreconditionError(f"hom_solve does not support mode {mode!r}")
    g = g.without_labels()
    h = h.without_labels()
    if d is not None:
        from .decomp import require_valid
        require_valid(g, d)
    run = _Run(mode, factor_dispatch, budget if budget is not None else Budget(), max_states)
    decision, witness, count = run.solve(g, h, d)
    if witness is not None and not is_homomorphism(witness, g, h):
        raise AssertionError("dispatch produced an invalid witness")
    res = HomResult(decision, witness=witness if mode != "count" else None,
                    count=count if mode == "count" else None)
    res.stats.update(state_base=run.state_base, dp_cells=run.dp_cells, dp_states=run.dp_states,
                     base_queries=run.base_queries)
    res.trace = run.trace
    return res
