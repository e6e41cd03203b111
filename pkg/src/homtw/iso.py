"""Graph isomorphism by refinement plus backtracking."""
from __future__ import annotations

from .graph import Graph


def _refine(graphs: list[Graph]) -> list[list[int]]:
    """Joint colour refinement so colours are comparable across graphs."""
    colours = [[(v in g.adj[v], len(g.adj[v])) for v in range(g.n)] for g in graphs]
    palette: dict = {}
    cur = [[palette.setdefault(c, len(palette)) for c in cs] for cs in colours]
    while True:
        palette = {}
        nxt = []
        for g, cs in zip(graphs, cur):
            sig = [(cs[v], tuple(sorted(cs[w] for w in g.adj[v]))) for v in range(g.n)]
            nxt.append(sig)
        # sort signatures so numbering does not depend on vertex order
        for s in sorted({s for sig in nxt for s in sig}):
            palette[s] = len(palette)
        new = [[palette[s] for s in sig] for sig in nxt]
        if all(len(set(a)) == len(set(b)) for a, b in zip(new, cur)):
            return new
        cur = new


def isomorphic(a: Graph, b: Graph) -> tuple[int, ...] | None:
    """A bijection ``f`` with ``uv in E(a) <=> f(u)f(v) in E(b)``, or ``None``."""
    if a.n != b.n or a.m != b.m or len(a.loops) != len(b.loops):
        return None
    if sorted(map(len, a.adj)) != sorted(map(len, b.adj)):
        return None
    n = a.n
    if n == 0:
        return ()
    ca, cb = _refine([a, b])
    if sorted(ca) != sorted(cb):
        return None
    by_colour: dict[int, int] = {}
    for v, c in enumerate(cb):
        by_colour[c] = by_colour.get(c, 0) | 1 << v
    dom = [by_colour[c] for c in ca]
    full = (1 << n) - 1
    amask, bmask = a.masks, b.masks
    f = [-1] * n

    def search(dom: list[int], used: int, left: int) -> bool:
        if left == 0:
            return True
        best, size = -1, n + 1
        for v in range(n):
            if f[v] < 0:
                s = dom[v].bit_count()
                if s < size:
                    best, size = v, s
                    if s <= 1:
                        break
        if size == 0:
            return False
        v = best
        cand = dom[v]
        while cand:
            low = cand & -cand
            x = low.bit_length() - 1
            cand ^= low
            f[v] = x
            nused = used | low
            new = list(dom)
            ok = True
            if (amask[v] >> v & 1) != (bmask[x] >> x & 1):
                ok = False
            else:
                for w in range(n):
                    if f[w] >= 0:
                        continue
                    if amask[v] >> w & 1:
                        d = new[w] & bmask[x] & ~nused
                    else:
                        d = new[w] & ~bmask[x] & ~nused & full
                    if not d:
                        ok = False
                        break
                    new[w] = d
            if ok and search(new, nused, left - 1):
                return True
            f[v] = -1
        return False

    if search(dom, 0, n):
        return tuple(f)
    return None


def is_isomorphism(f, a: Graph, b: Graph) -> bool:
    if len(f) != a.n or sorted(f) != list(range(b.n)):
        return False
    return all(b.adj[f[v]] == frozenset(f[w] for w in a.adj[v]) for v in range(a.n))
