"""Direct-product factorization and projectivity.

Splitting a graph ``H`` into ``A x B`` is attempted two ways:

* For R-thin graphs (no two vertices share a neighbourhood) the Cartesian
  skeleton ``S(H)`` turns direct factors into Cartesian factors.  The
  product relation of ``S(H)`` (transitive closure of Djokovic-Winkler and
  the square-free adjacency relation) gives edge classes, and every direct
  split is a grouping of those classes.
* Otherwise, and whenever the skeleton is unusable, a backtracking search
  labels each vertex with a coordinate pair and propagates the product
  edge law.

Every candidate is checked against the edge law before it is accepted, so
the skeleton route can only lose completeness, never soundness; the test
suite cross-checks both routes.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Sequence

from .budget import Budget
from .errors import Inconclusive, PreconditionError
from .graph import Graph, build_graph, direct_product, is_homomorphism
from .hom import iter_homs
from .invariants import is_bipartite
from .iso import isomorphic

PROJECTIVE, NOT_PROJECTIVE, INCONCLUSIVE = "projective", "not-projective", "inconclusive"
DEFAULT_PROJECTIVITY_CAP = 12
MAX_SKELETON_CLASSES = 12


@dataclass(frozen=True)
class Factorization:
    factors: tuple[Graph, ...]
    iso: tuple[tuple[int, ...], ...]  # vertex of H -> coordinates

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(f.n for f in self.factors)

    def vertex_of(self) -> dict[tuple[int, ...], int]:
        return {c: v for v, c in enumerate(self.iso)}


@dataclass(frozen=True)
class ProjectivityReport:
    verdict: str
    witness: tuple[int, ...] | None = None  # map V(H^2) -> V(H), index x*n+y
    extensions: int = 0
    reason: str = ""


@dataclass(frozen=True)
class TrulyProjectiveResult:
    holds: bool
    witness: tuple[int, ...] | None
    extensions: int
    power: int  # vertices of H^s x W
    incomparable: bool | None = None  # None when not computed

    def __bool__(self):
        return self.holds


# splitting -------------------------------------------------------------

def _check_split(h: Graph, p: Sequence[int], q: Sequence[int], a: int, b: int):
    """Return factor graphs if ``v -> (p[v], q[v])`` realises ``h = A x B``."""
    if a < 2 or b < 2 or a * b != h.n:
        return None
    if len(set(zip(p, q))) != h.n:
        return None
    a_adj = [set() for _ in range(a)]
    b_adj = [set() for _ in range(b)]
    for u, v in h.edges:
        a_adj[p[u]].add(p[v])
        a_adj[p[v]].add(p[u])
        b_adj[q[u]].add(q[v])
        b_adj[q[v]].add(q[u])
    for u in range(h.n):
        nu = h.adj[u]
        for v in range(u, h.n):
            if (v in nu) != (p[v] in a_adj[p[u]] and q[v] in b_adj[q[u]]):
                return None
    fa = Graph(a, tuple(frozenset(s) for s in a_adj))
    fb = Graph(b, tuple(frozenset(s) for s in b_adj))
    return fa, fb


def _classes_from_labels(labels: Sequence) -> tuple[list[int], int]:
    index: dict = {}
    out = [index.setdefault(x, len(index)) for x in labels]
    return out, len(index)


def is_thin(h: Graph) -> bool:
    return len(set(h.masks)) == h.n


def cartesian_skeleton(h: Graph) -> Graph:
    """Boolean square of ``h`` minus loops and dispensable edges."""
    nm = h.masks

    def proper(x, y):
        return x != y and x & ~y == 0

    edges = []
    for x, y in combinations(range(h.n), 2):
        c = nm[x] & nm[y]
        if not c:
            continue
        dispensable = False
        for z in range(h.n):
            one = proper(c, nm[x] & nm[z]) or (proper(nm[x], nm[z]) and proper(nm[z], nm[y]))
            if not one:
                continue
            two = proper(c, nm[y] & nm[z]) or (proper(nm[y], nm[z]) and proper(nm[z], nm[x]))
            if two:
                dispensable = True
                break
        if not dispensable:
            edges.append((x, y))
    return build_graph(h.n, edges)


def _product_relation(s: Graph) -> list[int] | None:
    """Edge classes of the Cartesian product relation, or None if disconnected."""
    n = s.n
    dist = []
    for src in range(n):
        d = [-1] * n
        d[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for w in s.adj[u]:
                if d[w] < 0:
                    d[w] = d[u] + 1
                    queue.append(w)
        if min(d) < 0:
            return None
        dist.append(d)
    edges = s.edges
    parent = list(range(len(edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    for i, (x, y) in enumerate(edges):
        dx, dy = dist[x], dist[y]
        for j in range(i + 1, len(edges)):
            u, v = edges[j]
            if dx[u] + dy[v] != dx[v] + dy[u]:
                union(i, j)
    eid = {e: i for i, e in enumerate(edges)}
    for x in range(n):
        nb = sorted(s.adj[x])
        for y, z in combinations(nb, 2):
            if z in s.adj[y]:
                continue
            if s.adj[y] & s.adj[z] == {x}:
                union(eid[(min(x, y), max(x, y))], eid[(min(x, z), max(x, z))])
    roots: dict[int, int] = {}
    return [roots.setdefault(find(i), len(roots)) for i in range(len(edges))]


def _components(n: int, edges) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return [find(v) for v in range(n)]


def _split_by_skeleton(h: Graph):
    s = cartesian_skeleton(h)
    cls = _product_relation(s)
    if cls is None:
        return "unusable"
    r = max(cls, default=-1) + 1
    if r < 2:
        return None
    if r > MAX_SKELETON_CLASSES:
        return "unusable"
    edges = s.edges
    # group containing class 0 is fixed to halve the symmetric bipartitions
    for mask in range(1 << (r - 1)):
        group = {0} | {c + 1 for c in range(r - 1) if mask >> c & 1}
        if len(group) == r:
            continue
        inside = [e for e, c in zip(edges, cls) if c in group]
        outside = [e for e, c in zip(edges, cls) if c not in group]
        p, a = _classes_from_labels(_components(h.n, outside))
        q, b = _classes_from_labels(_components(h.n, inside))
        found = _check_split(h, p, q, a, b)
        if found:
            return found[0], found[1], p, q
    return None


def _split_by_labeling(h: Graph, a: int, b: int, budget: Budget):
    """Backtracking product labelling for ``|A| = a``, ``|B| = b``."""
    n = h.n
    order = [0]
    seen = {0}
    for u in order:
        for w in sorted(h.adj[u]):
            if w not in seen:
                seen.add(w)
                order.append(w)
    order += [v for v in range(n) if v not in seen]
    cell: dict = {}  # ('A'|'B', i, j) with i <= j -> bool
    clauses: dict = {}  # cell -> list of partner cells that may not both be True
    trail: list = []
    p = [-1] * n
    q = [-1] * n
    used = set()
    count_a = [0] * a
    count_b = [0] * b

    def key(kind, i, j):
        return (kind, i, j) if i <= j else (kind, j, i)

    def set_cell(k, val) -> bool:
        cur = cell.get(k)
        if cur is not None:
            return cur == val
        cell[k] = val
        trail.append(("cell", k))
        if val:
            for other in clauses.get(k, ()):
                if not set_cell(other, False):
                    return False
        return True

    def add_clause(k1, k2):
        clauses.setdefault(k1, []).append(k2)
        clauses.setdefault(k2, []).append(k1)
        trail.append(("clause", k1, k2))

    def undo(mark):
        while len(trail) > mark:
            item = trail.pop()
            if item[0] == "cell":
                del cell[item[1]]
            else:
                clauses[item[1]].pop()
                clauses[item[2]].pop()

    def consistent(u, x, y) -> bool:
        for w in [u] + [w for w in range(n) if p[w] >= 0]:
            ka, kb = key("A", x, p[w] if w != u else x), key("B", y, q[w] if w != u else y)
            if w in h.adj[u]:
                if not (set_cell(ka, True) and set_cell(kb, True)):
                    return False
            else:
                ca, cb = cell.get(ka), cell.get(kb)
                if ca and cb:
                    return False
                if ca:
                    if not set_cell(kb, False):
                        return False
                elif cb:
                    if not set_cell(ka, False):
                        return False
                elif ca is None and cb is None:
                    add_clause(ka, kb)
        return True

    def rec(i: int, top_a: int, top_b: int):
        budget.tick()
        if i == n:
            return _check_split(h, p, q, a, b)
        u = order[i]
        for x in range(min(a, top_a + 1)):
            if count_a[x] >= b:
                continue
            for y in range(min(b, top_b + 1)):
                if count_b[y] >= a or (x, y) in used:
                    continue
                mark = len(trail)
                if consistent(u, x, y):
                    p[u], q[u] = x, y
                    used.add((x, y))
                    count_a[x] += 1
                    count_b[y] += 1
                    found = rec(i + 1, max(top_a, x + 1), max(top_b, y + 1))
                    if found:
                        return found
                    count_a[x] -= 1
                    count_b[y] -= 1
                    used.discard((x, y))
                    p[u] = q[u] = -1
                undo(mark)
        return None

    found = rec(0, 0, 0)
    if found:
        return found[0], found[1], list(p), list(q)
    return None


def twin_quotient(h: Graph) -> tuple[Graph, list[list[int]]]:
    """Collapse vertices with equal neighbourhoods; classes ordered by first member."""
    where: dict[int, int] = {}
    classes: list[list[int]] = []
    for v, m in enumerate(h.masks):
        c = where.setdefault(m, len(classes))
        if c == len(classes):
            classes.append([])
        classes[c].append(v)
    reps = [c[0] for c in classes]
    edges = [(i, j) for i in range(len(reps)) for j in range(i, len(reps))
             if reps[j] in h.adj[reps[i]]]
    return build_graph(len(reps), edges), classes


def _reflexive_clique(k: int) -> Graph:
    return build_graph(k, [(i, j) for i in range(k) for j in range(i, k)])


def _blow_up(q: Graph, sizes: Sequence[int]) -> tuple[Graph, list[int]]:
    """Replace vertex ``c`` of ``q`` by ``sizes[c]`` twins; returns graph and offsets."""
    offset = [0]
    for k in sizes:
        offset.append(offset[-1] + k)
    edges = []
    for c, d in q.edges:
        for i in range(offset[c], offset[c + 1]):
            for j in range(offset[d], offset[d + 1]):
                if i <= j or c != d:
                    edges.append((i, j))
    return build_graph(offset[-1], edges), offset


def _split_by_quotient(h: Graph, method: str, budget: Budget):
    """Split a graph with twins via its thin quotient and class sizes."""
    q, classes = twin_quotient(h)
    sizes = [len(c) for c in classes]
    cls_of = [0] * h.n
    member = [0] * h.n
    for c, vs in enumerate(classes):
        for t, v in enumerate(vs):
            cls_of[v], member[v] = c, t
    g = 0
    for k in sizes:
        g = gcd(g, k)
    if g > 1:
        prime = next(d for d in range(2, g + 1) if g % d == 0)
        rest, offset = _blow_up(q, [k // prime for k in sizes])
        p = [offset[cls_of[v]] + member[v] % (sizes[cls_of[v]] // prime) for v in range(h.n)]
        r = [member[v] // (sizes[cls_of[v]] // prime) for v in range(h.n)]
        found = _check_split(h, p, r, rest.n, prime)
        return (found[0], found[1], p, r) if found else None
    factors, iso = _factor_rec(q, method, budget)
    k = len(factors)
    for mask in range(1 << (k - 1)):
        left = [0] + [i + 1 for i in range(k - 1) if mask >> i & 1]
        if len(left) == k:
            continue
        right = [i for i in range(k) if i not in left]
        ca = sorted({tuple(c[i] for i in left) for c in iso})
        cb = sorted({tuple(c[i] for i in right) for c in iso})
        ia = {c: i for i, c in enumerate(ca)}
        ib = {c: i for i, c in enumerate(cb)}
        grid = {}
        for c, coords in enumerate(iso):
            grid[ia[tuple(coords[i] for i in left)], ib[tuple(coords[i] for i in right)]] = sizes[c]
        size_a = [0] * len(ca)
        for (a, _), k_ab in grid.items():
            size_a[a] = gcd(size_a[a], k_ab)
        size_b = [grid[0, b] // size_a[0] for b in range(len(cb))]
        if any(grid[a, b] != size_a[a] * size_b[b] for a, b in grid):
            continue
        qa = _graph_on(q, iso, left, ca)
        qb = _graph_on(q, iso, right, cb)
        fa, off_a = _blow_up(qa, size_a)
        fb, off_b = _blow_up(qb, size_b)
        p, r = [0] * h.n, [0] * h.n
        for v in range(h.n):
            coords = iso[cls_of[v]]
            a = ia[tuple(coords[i] for i in left)]
            b = ib[tuple(coords[i] for i in right)]
            p[v] = off_a[a] + member[v] // size_b[b]
            r[v] = off_b[b] + member[v] % size_b[b]
        found = _check_split(h, p, r, fa.n, fb.n)
        if found:
            return found[0], found[1], p, r
    return None


def _graph_on(q: Graph, iso, coords_idx, values) -> Graph:
    """Product of the quotient's factors restricted to the coordinates ``coords_idx``."""
    index = {c: i for i, c in enumerate(values)}
    edges = set()
    for u, v in q.edges:
        a = index[tuple(iso[u][i] for i in coords_idx)]
        b = index[tuple(iso[v][i] for i in coords_idx)]
        edges.add((min(a, b), max(a, b)))
    return build_graph(len(values), sorted(edges))


def split_once(h: Graph, method: str = "auto", budget: Budget | None = None):
    """Find ``h = A x B`` with ``|A|, |B| >= 2``; returns ``(A, B, p, q)`` or None.

    ``method="labeling"`` forces the backtracking route (slow, used as a
    cross-check).
    """
    budget = budget if budget is not None else Budget()
    if method != "labeling":
        if not is_thin(h):
            return _split_by_quotient(h, method, budget)
        found = _split_by_skeleton(h)
        if found != "unusable":
            return found
        if method == "skeleton":
            raise PreconditionError("Cartesian skeleton is unusable for this graph")
    for a in range(2, h.n):
        if h.n % a:
            continue
        b = h.n // a
        if a > b:
            break
        found = _split_by_labeling(h, a, b, budget)
        if found:
            return found
    return None


def _factor_key(g: Graph):
    return (g.n, g.m, len(g.loops), tuple(sorted(map(len, g.adj))), g.edges)


def _factor_rec(h: Graph, method: str, budget: Budget):
    found = split_once(h, method, budget)
    if not found:
        return [h], [(v,) for v in range(h.n)]
    fa, fb, p, q = found
    la, ia = _factor_rec(fa, method, budget)
    lb, ib = _factor_rec(fb, method, budget)
    return la + lb, [ia[p[v]] + ib[q[v]] for v in range(h.n)]


def _check_prime_domain(h: Graph) -> None:
    if h.n < 2:
        raise PreconditionError("factorization needs at least two vertices")
    if not h.is_connected:
        raise PreconditionError("factorization needs a connected graph")
    if is_bipartite(h):
        raise PreconditionError("factorization needs a non-bipartite graph")


@lru_cache(maxsize=64)
def _factorize_cached(h: Graph, method: str) -> Factorization:
    factors, iso = _factor_rec(h, method, Budget())
    order = sorted(range(len(factors)), key=lambda i: _factor_key(factors[i]))
    return Factorization(tuple(factors[i] for i in order),
                         tuple(tuple(c[i] for i in order) for c in iso))


def factorize_prime(h: Graph, method: str = "auto", budget: Budget | None = None) -> Factorization:
    """Prime factorization of a connected non-bipartite graph.

    Factors are ordered by size, then by edge count and degree sequence.
    ``method`` is ``"auto"``, ``"skeleton"`` or ``"labeling"``.
    """
    _check_prime_domain(h)
    h = h.without_labels()
    if budget is None:
        return _factorize_cached(h, method)
    factors, iso = _factor_rec(h, method, budget)
    order = sorted(range(len(factors)), key=lambda i: _factor_key(factors[i]))
    return Factorization(tuple(factors[i] for i in order),
                         tuple(tuple(c[i] for i in order) for c in iso))


def is_indecomposable(h: Graph, method: str = "auto") -> bool:
    _check_prime_domain(h)
    return split_once(h.without_labels(), method) is None


def check_factorization(h: Graph, f: Factorization) -> bool:
    """Direct edge-law check of ``f.iso`` without an isomorphism search."""
    if len(f.iso) != h.n or len(set(f.iso)) != h.n:
        return False
    for u in range(h.n):
        cu = f.iso[u]
        for v in range(h.n):
            cv = f.iso[v]
            law = all(cv[i] in g.adj[cu[i]] for i, g in enumerate(f.factors))
            if law != (v in h.adj[u]):
                return False
    return True


def verify_factorization(h: Graph, factors: Sequence[Graph]) -> tuple[tuple[int, ...], ...] | None:
    """Isomorphism ``V(h) -> coordinates`` onto the product of ``factors``."""
    size = 1
    for f in factors:
        size *= f.n
    if size != h.n:
        raise PreconditionError(f"size mismatch: factors give {size} vertices, graph has {h.n}")
    prod_graph = direct_product([f.without_labels() for f in factors])
    f = isomorphic(h.without_labels(), prod_graph.without_labels())
    if f is None:
        return None
    return tuple(prod_graph.labels[f[v]] for v in range(h.n))


# projectivity ------------------------------------------------------------

def _require_projectivity_domain(h: Graph) -> None:
    if h.n < 3:
        raise PreconditionError("projectivity is tested on graphs with at least 3 vertices")
    if not h.is_connected:
        raise PreconditionError("projectivity is tested on connected graphs")


def is_idempotent_non_projection(h: Graph, f: Sequence[int]) -> bool:
    """Independent re-check of a non-projectivity witness on ``h^2``."""
    n = h.n
    sq = direct_product([h, h])
    if not is_homomorphism(f, sq, h):
        return False
    if any(f[x * n + x] != x for x in range(n)):
        return False
    pi1 = tuple(x for x in range(n) for _ in range(n))
    pi2 = tuple(y for _ in range(n) for y in range(n))
    return tuple(f) != pi1 and tuple(f) != pi2


def is_projective(h: Graph, budget: Budget | None = None,
                  size_cap: int = DEFAULT_PROJECTIVITY_CAP) -> ProjectivityReport:
    """Every idempotent ``h^2 -> h`` a projection?  Exhaustive search.

    Above ``size_cap`` vertices an unbudgeted call gets a 10 minute limit.
    """
    _require_projectivity_domain(h)
    h = h.without_labels()
    n = h.n
    if budget is None and n > size_cap:
        budget = Budget(seconds=600)
    sq = direct_product([h, h])
    pins = {x * n + x: x for x in range(n)}
    pi1 = tuple(lab[0] for lab in sq.labels)
    pi2 = tuple(lab[1] for lab in sq.labels)
    count = 0
    try:
        for f in iter_homs(sq, h, pins, budget=budget):
            count += 1
            if f != pi1 and f != pi2:
                return ProjectivityReport(NOT_PROJECTIVE, f, count,
                                          "idempotent homomorphism that is not a projection")
    except Inconclusive as exc:
        return ProjectivityReport(INCONCLUSIVE, None, count, str(exc))
    return ProjectivityReport(PROJECTIVE, None, count, "only the two projections extend")


def decomposable_nonprojective_witness(h: Graph, fact: Factorization) -> tuple[int, ...]:
    """The map ``((x, y), (x', y')) -> (x, y')`` on ``h^2``, validated."""
    if len(fact.factors) < 2:
        raise PreconditionError("witness needs a factorization with at least two factors")
    if not check_factorization(h, fact):
        raise PreconditionError("factorization does not match the graph")
    n = h.n
    where = fact.vertex_of()
    f = tuple(where[fact.iso[u][:1] + fact.iso[v][1:]] for u in range(n) for v in range(n))
    if not is_idempotent_non_projection(h, f):
        raise AssertionError("mixed-coordinate map failed validation")
    return f


def truly_projective_check(h: Graph, w: Graph, s: int, budget: Budget | None = None,
                           variant: str = "truly",
                           require_incomparable: bool = False) -> TrulyProjectiveResult:
    """Bounded check on ``h^s x w``: do only the ``h``-projections extend the pins?

    Pins send ``(x, ..., x, y)`` to ``x``.  ``h`` must be a core with at least
    three vertices.  ``variant="truly"`` asks for ``w`` to be a connected
    core; ``"strongly"`` only for ``w`` connected with two or more vertices.
    Incomparability of ``h`` and ``w`` is always reported, and enforced when
    ``require_incomparable`` is set.
    """
    from .cores import incomparable, is_core

    if s < 2:
        raise PreconditionError("power s must be at least 2")
    if h.n < 3:
        raise PreconditionError("H needs at least 3 vertices")
    if not is_core(h).is_core:
        raise PreconditionError("H must be a core")
    if not w.is_connected:
        raise PreconditionError("W must be connected")
    if variant == "truly":
        if not is_core(w).is_core:
            raise PreconditionError("W must be a core")
    elif variant == "strongly":
        if w.n < 2:
            raise PreconditionError("W needs at least 2 vertices")
    else:
        raise PreconditionError(f"unknown variant {variant!r}")
    apart = incomparable(h, w)
    if require_incomparable and not apart:
        raise PreconditionError("H and W must be incomparable")
    h = h.without_labels()
    w = w.without_labels()
    power = direct_product([h] * s + [w])
    pins = {}
    for v, lab in enumerate(power.labels):
        if len(set(lab[:s])) == 1:
            pins[v] = lab[0]
    projections = [tuple(lab[i] for lab in power.labels) for i in range(s)]
    count = 0
    for f in iter_homs(power, h, pins, budget=budget):
        count += 1
        if f not in projections:
            return TrulyProjectiveResult(False, f, count, power.n, apart)
    return TrulyProjectiveResult(True, None, count, power.n, apart)
