"""Tree and path decompositions, nice form, and a min-fill heuristic."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DecompositionError
from .graph import Graph


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by node ``0..len(bags)-1`` plus undirected tree edges."""

    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...]
    kind: str = "tree"

    @classmethod
    def make(cls, bags: Iterable[Iterable[int]], tree_edges: Iterable[tuple[int, int]] = (),
             kind: str | None = None) -> TreeDecomposition:
        bags = tuple(frozenset(b) for b in bags)
        edges = tuple(sorted((min(a, b), max(a, b)) for a, b in tree_edges))
        if kind is None:
            kind = "path" if _is_path(len(bags), edges) else "tree"
        return cls(bags, edges, kind)

    @classmethod
    def path(cls, bags: Iterable[Iterable[int]]) -> TreeDecomposition:
        bags = list(bags)
        return cls.make(bags, [(i, i + 1) for i in range(len(bags) - 1)], "path")

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbours(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            nb[a].append(b)
            nb[b].append(a)
        for lst in nb:
            lst.sort()
        return nb

    def path_order(self) -> list[int]:
        """Nodes in path order starting from the lower-numbered end."""
        if not _is_path(len(self.bags), self.tree_edges):
            raise DecompositionError("decomposition tree is not a path")
        if len(self.bags) == 1:
            return [0]
        nb = self.neighbours()
        start = min(v for v in range(len(self.bags)) if len(nb[v]) == 1)
        order, prev = [start], -1
        while len(order) < len(self.bags):
            cur = order[-1]
            nxt = [w for w in nb[cur] if w != prev][0]
            prev = cur
            order.append(nxt)
        return order


def _is_tree(count: int, edges: Sequence[tuple[int, int]]) -> bool:
    if count == 0:
        return not edges
    if len(edges) != count - 1:
        return False
    parent = list(range(count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        if not (0 <= a < count and 0 <= b < count):
            return False
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def _is_path(count: int, edges: Sequence[tuple[int, int]]) -> bool:
    if not _is_tree(count, edges):
        return False
    deg = [0] * count
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    return all(d <= 2 for d in deg)


@dataclass(frozen=True)
class Violation:
    condition: str  # "tree", "path", "range", "vertex", "edge", "connectivity"
    witness: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    width: int
    violation: Violation | None = None

    def __bool__(self):
        return self.ok


def validate(g: Graph, d: TreeDecomposition) -> ValidationReport:
    """Check the three decomposition conditions; report the first failure."""

    def fail(cond, witness, msg):
        return ValidationReport(False, d.width, Violation(cond, witness, msg))

    count = len(d.bags)
    if not _is_tree(count, d.tree_edges):
        return fail("tree", (), "decomposition graph is not a tree")
    if d.kind == "path" and not _is_path(count, d.tree_edges):
        return fail("path", (), "decomposition marked as path but tree is not a path")
    for i, bag in enumerate(d.bags):
        for v in bag:
            if not 0 <= v < g.n:
                return fail("range", (i, v), f"bag {i} holds vertex {v} outside the graph")
    covered = set().union(*d.bags) if d.bags else set()
    for v in range(g.n):
        if v not in covered:
            return fail("vertex", (v,), f"vertex {v} belongs to no bag")
    holders: list[list[int]] = [[] for _ in range(g.n)]
    for i, bag in enumerate(d.bags):
        for v in bag:
            holders[v].append(i)
    for u, v in g.edges:
        if u == v:
            continue
        if not any(v in d.bags[i] for i in holders[u]):
            return fail("edge", (u, v), f"edge {u}-{v} is contained in no bag")
    nb = d.neighbours()
    for v in range(g.n):
        nodes = set(holders[v])
        start = holders[v][0]
        seen = {start}
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b in nb[a]:
                if b in nodes and b not in seen:
                    seen.add(b)
                    queue.append(b)
        if len(seen) != len(nodes):
            return fail("connectivity", (v,), f"bags containing vertex {v} are not connected")
    return ValidationReport(True, d.width)


def require_valid(g: Graph, d: TreeDecomposition) -> None:
    report = validate(g, d)
    if not report.ok:
        v = report.violation
        raise DecompositionError(f"invalid decomposition ({v.condition}): {v.message}")


# nice form ---------------------------------------------------------------

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: tuple[int, ...]  # sorted
    vertex: int | None = None
    children: tuple[int, ...] = ()


@dataclass(frozen=True)
class NiceDecomposition:
    """Nodes listed children-first; the last node is the root (empty bag)."""

    nodes: tuple[NiceNode, ...]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max((len(x.bag) for x in self.nodes), default=0) - 1

    def as_tree_decomposition(self) -> TreeDecomposition:
        edges = [(c, i) for i, node in enumerate(self.nodes) for c in node.children]
        return TreeDecomposition.make([x.bag for x in self.nodes], edges, "tree")

    def check_structure(self) -> None:
        """Raise if adjacent bags do not follow the nice-node rules."""
        for i, x in enumerate(self.nodes):
            if any(c >= i for c in x.children):
                raise DecompositionError("nice nodes must be listed children first")
            kids = [self.nodes[c].bag for c in x.children]
            if x.kind == LEAF:
                ok = not x.children and not x.bag
            elif x.kind == INTRODUCE:
                ok = (len(kids) == 1 and x.vertex in x.bag
                      and set(kids[0]) == set(x.bag) - {x.vertex})
            elif x.kind == FORGET:
                ok = (len(kids) == 1 and x.vertex not in x.bag
                      and set(x.bag) | {x.vertex} == set(kids[0]) and x.vertex in kids[0])
            elif x.kind == JOIN:
                ok = len(kids) == 2 and kids[0] == x.bag == kids[1]
            else:
                ok = False
            if not ok:
                raise DecompositionError(f"nice node {i} ({x.kind}) is malformed")
        if self.nodes and self.nodes[-1].bag:
            raise DecompositionError("nice decomposition root must have an empty bag")


class _Builder:
    def __init__(self):
        self.nodes: list[NiceNode] = []

    def add(self, kind, bag, vertex=None, children=()):
        self.nodes.append(NiceNode(kind, tuple(sorted(bag)), vertex, tuple(children)))
        return len(self.nodes) - 1

    def morph(self, top: int, have: frozenset, want: frozenset) -> int:
        bag = set(have)
        for v in sorted(have - want):
            bag.discard(v)
            top = self.add(FORGET, bag, v, (top,))
        for v in sorted(want - have):
            bag.add(v)
            top = self.add(INTRODUCE, bag, v, (top,))
        return top


def to_nice(d: TreeDecomposition, g: Graph | None = None) -> NiceDecomposition:
    """Nice form rooted at node 0; width is preserved."""
    if g is not None:
        require_valid(g, d)
    elif not _is_tree(len(d.bags), d.tree_edges):
        raise DecompositionError("decomposition graph is not a tree")
    b = _Builder()
    if not d.bags:
        b.add(LEAF, ())
        return NiceDecomposition(tuple(b.nodes))
    nb = d.neighbours()
    # iterative post-order from root 0
    parent = {0: -1}
    order = [0]
    for a in order:
        for c in nb[a]:
            if c not in parent:
                parent[c] = a
                order.append(c)
    top_of: dict[int, int] = {}
    empty: frozenset = frozenset()
    for a in reversed(order):
        kids = [c for c in nb[a] if parent.get(c) == a]
        want = d.bags[a]
        if not kids:
            top_of[a] = b.morph(b.add(LEAF, ()), empty, want)
            continue
        tops = [b.morph(top_of[c], d.bags[c], want) for c in kids]
        cur = tops[0]
        for t in tops[1:]:
            cur = b.add(JOIN, want, None, (cur, t))
        top_of[a] = cur
    b.morph(top_of[0], d.bags[0], empty)
    return NiceDecomposition(tuple(b.nodes))


# heuristic construction --------------------------------------------------

def elimination_decomposition(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Decomposition induced by eliminating vertices in ``order``."""
    n = g.n
    if n == 0:
        return TreeDecomposition.make([], [])
    nb = [set(g.adj[v]) - {v} for v in range(n)]
    pos = {v: i for i, v in enumerate(order)}
    bags = []
    later_nbrs = []
    for v in order:
        bags.append(frozenset(nb[v] | {v}))
        later_nbrs.append(set(nb[v]))
        for x in nb[v]:
            nb[x] |= nb[v]
            nb[x].discard(x)
            nb[x].discard(v)
        nb[v] = set()
    edges = []
    for i, v in enumerate(order[:-1]):
        if later_nbrs[i]:
            j = min(pos[x] for x in later_nbrs[i])
        else:
            j = len(order) - 1
        edges.append((i, j))
    return TreeDecomposition.make(bags, edges)


def min_fill_order(g: Graph) -> list[int]:
    nb = [set(g.adj[v]) - {v} for v in range(g.n)]
    alive = set(range(g.n))
    order = []
    while alive:
        best, best_fill = -1, None
        for v in sorted(alive):
            nv = sorted(nb[v])
            fill = sum(1 for i, x in enumerate(nv) for y in nv[i + 1:] if y not in nb[x])
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
                if fill == 0:
                    break
        order.append(best)
        for x in nb[best]:
            nb[x] |= nb[best]
            nb[x].discard(x)
            nb[x].discard(best)
        alive.discard(best)
        nb[best] = set()
    return order


def heuristic_decomposition(g: Graph) -> TreeDecomposition:
    """Min-fill elimination, ties broken by lowest vertex index."""
    return elimination_decomposition(g, min_fill_order(g))


def restrict(d: TreeDecomposition, vertices: Sequence[int]) -> TreeDecomposition:
    """Restrict to ``vertices`` and renumber them ``0..len-1`` in given order."""
    index = {v: i for i, v in enumerate(vertices)}
    bags = [frozenset(index[v] for v in bag if v in index) for bag in d.bags]
    return TreeDecomposition(tuple(bags), d.tree_edges, d.kind)
