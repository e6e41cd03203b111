"""Text interchange: DIMACS-like graphs and PACE 2017 ``.gr`` / ``.td``.

All formats are 1-based on the wire and 0-based in memory.  Emitters write
``\\n`` line endings and sort edges, so emit(parse(emit(x))) is byte-stable.
"""
from __future__ import annotations

from .decomp import TreeDecomposition
from .errors import ParseError
from .graph import Graph, build_graph


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield lineno, line.split()


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def _vertex(v: int, n: int, lineno: int) -> int:
    if not 1 <= v <= n:
        raise ParseError(f"line {lineno}: vertex {v} out of range 1..{n}")
    return v - 1


def parse_dimacs(text: str) -> Graph:
    """``p edge n m`` header followed by ``e u v`` lines."""
    n = m = None
    edges = []
    for lineno, tok in _lines(text):
        if tok[0] == "p":
            if n is not None or len(tok) != 4 or tok[1] != "edge":
                raise ParseError(f"line {lineno}: malformed header")
            n, m = _ints(tok[2:], lineno)
        elif tok[0] == "e":
            if n is None:
                raise ParseError(f"line {lineno}: edge before header")
            if len(tok) != 3:
                raise ParseError(f"line {lineno}: malformed edge line")
            u, v = _ints(tok[1:], lineno)
            edges.append((_vertex(u, n, lineno), _vertex(v, n, lineno)))
        else:
            raise ParseError(f"line {lineno}: unexpected line type {tok[0]!r}")
    if n is None:
        raise ParseError("missing 'p edge' header")
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    return build_graph(n, edges)


def emit_dimacs(g: Graph) -> str:
    out = [f"p edge {g.n} {g.m}"]
    out += [f"e {u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(out) + "\n"


def parse_gr(text: str) -> Graph:
    """PACE ``p tw n m`` header followed by bare ``u v`` edge lines."""
    n = m = None
    edges = []
    for lineno, tok in _lines(text):
        if tok[0] == "p":
            if n is not None or len(tok) != 4 or tok[1] != "tw":
                raise ParseError(f"line {lineno}: malformed header")
            n, m = _ints(tok[2:], lineno)
            continue
        if n is None:
            raise ParseError(f"line {lineno}: edge before header")
        if len(tok) != 2:
            raise ParseError(f"line {lineno}: malformed edge line")
        u, v = _ints(tok, lineno)
        edges.append((_vertex(u, n, lineno), _vertex(v, n, lineno)))
    if n is None:
        raise ParseError("missing 'p tw' header")
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    return build_graph(n, edges)


def emit_gr(g: Graph) -> str:
    out = [f"p tw {g.n} {g.m}"]
    out += [f"{u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(out) + "\n"


def parse_td(text: str) -> tuple[TreeDecomposition, int]:
    """PACE ``.td``; returns the decomposition and the announced vertex count."""
    header = None
    bags: dict[int, list[int]] = {}
    edges = []
    for lineno, tok in _lines(text):
        if tok[0] == "s":
            if header is not None or len(tok) != 5 or tok[1] != "td":
                raise ParseError(f"line {lineno}: malformed header")
            header = _ints(tok[2:], lineno)
        elif tok[0] == "b":
            if header is None:
                raise ParseError(f"line {lineno}: bag before header")
            nums = _ints(tok[1:], lineno)
            if not nums:
                raise ParseError(f"line {lineno}: bag line without id")
            bid = nums[0]
            if not 1 <= bid <= header[0]:
                raise ParseError(f"line {lineno}: bag index {bid} out of range 1..{header[0]}")
            if bid in bags:
                raise ParseError(f"line {lineno}: bag {bid} defined twice")
            bags[bid] = [_vertex(v, header[2], lineno) for v in nums[1:]]
        else:
            if header is None:
                raise ParseError(f"line {lineno}: tree edge before header")
            if len(tok) != 2:
                raise ParseError(f"line {lineno}: malformed tree edge line")
            a, b = _ints(tok, lineno)
            for x in (a, b):
                if not 1 <= x <= header[0]:
                    raise ParseError(f"line {lineno}: bag index {x} out of range 1..{header[0]}")
            edges.append((a - 1, b - 1))
    if header is None:
        raise ParseError("missing 's td' header")
    count, size, n = header
    if len(bags) != count:
        raise ParseError(f"header announces {count} bags, found {len(bags)}")
    ordered = [bags[i] for i in range(1, count + 1)]
    if max((len(b) for b in ordered), default=0) != size:
        raise ParseError(f"header announces largest bag {size}, found "
                         f"{max((len(b) for b in ordered), default=0)}")
    return TreeDecomposition.make(ordered, edges), n


def emit_td(d: TreeDecomposition, n: int) -> str:
    out = [f"s td {len(d.bags)} {d.width + 1} {n}"]
    for i, bag in enumerate(d.bags, 1):
        out.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(bag)]))
    out += [f"{a + 1} {b + 1}" for a, b in sorted(d.tree_edges)]
    return "\n".join(out) + "\n"


def parse_graph_text(text: str) -> Graph:
    """Dispatch on the header: DIMACS-like ``p edge`` or PACE ``p tw``."""
    for _, tok in _lines(text):
        if tok[0] == "p" and len(tok) > 1:
            if tok[1] == "edge":
                return parse_dimacs(text)
            if tok[1] == "tw":
                return parse_gr(text)
        break
    raise ParseError("unrecognised graph format (expected 'p edge' or 'p tw' header)")
