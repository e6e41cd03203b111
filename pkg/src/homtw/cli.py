"""Command line front end.

Graphs are given as specifiers: ``clique:3``, ``cycle:5``, ``path:4``,
``kneser:5,2``, ``product:clique:3,cycle:5``, ``union:clique:3,grotzsch``,
a named graph (``grotzsch``, ``brinkmann``, ``chvatal``, ``petersen``,
``bowtie``, ``k1star``) or ``@file`` holding a DIMACS-like or PACE graph.

Reports are ``key: value`` lines (or JSON with ``--json``).  Wall time is
only included with ``--timing`` so that reports are byte-stable.
Exit status: 0 for a definite verdict, 3 when a budget ran out, 2 for bad
input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time

from . import algebra, cores, gadgets
from .budget import Budget
from .decomp import heuristic_decomposition, validate
from .dp import hom_dp
from .errors import HomtwError, Inconclusive
from .formats import emit_dimacs, emit_td, parse_graph_text, parse_td
from .graph import Graph, build_graph, direct_product, disjoint_union
from .hom import count_homs
from .named import NAMES, named_graph
from .solve import hom_solve

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 2, 3


def _split_args(text: str) -> list[str]:
    """Split on commas; bare numbers belong to the previous specifier."""
    out: list[str] = []
    for tok in text.split(","):
        if tok.strip().isdigit() and out:
            out[-1] += "," + tok.strip()
        else:
            out.append(tok.strip())
    return out


def parse_graph_spec(spec: str) -> Graph:
    spec = spec.strip()
    if spec.startswith("@"):
        with open(spec[1:]) as fh:
            return parse_graph_text(fh.read())
    head, _, rest = spec.partition(":")
    head = head.lower()
    if head in ("product", "union"):
        parts = [parse_graph_spec(s) for s in _split_args(rest)]
        if len(parts) < 2:
            raise HomtwError(f"{head} needs at least two graphs")
        g = direct_product(parts) if head == "product" else disjoint_union(parts)
        return g.without_labels()
    if head not in NAMES:
        raise HomtwError(f"unknown graph specifier {spec!r}")
    try:
        params = [int(x) for x in rest.split(",")] if rest else []
    except ValueError:
        raise HomtwError(f"bad parameters in {spec!r}") from None
    return named_graph(head, *params)


def digest(g: Graph) -> str:
    return hashlib.sha256(emit_dimacs(g).encode()).hexdigest()[:16]


def describe(g: Graph) -> str:
    n, m = g.n, g.m
    if g.loops:
        return "K1*" if n == 1 else f"{n} vertices, {m} edges, looped"
    if m == n * (n - 1) // 2:
        return f"K{n}"
    if n >= 3 and m == n and g.is_connected and all(len(a) == 2 for a in g.adj):
        return f"C{n}"
    return f"{n} vertices, {m} edges"


def _render(value) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def format_report(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            for sub, v in value.items():
                lines.append(f"{key}.{sub}: {_render(v)}")
        else:
            lines.append(f"{key}: {_render(value)}")
    return "\n".join(lines) + "\n"


def _graph(args, spec: str) -> Graph:
    g = parse_graph_spec(spec)
    args.inputs[spec] = digest(g)
    return g


def _budget(args) -> Budget:
    return Budget(nodes=args.budget, seconds=args.seconds)


# commands ----------------------------------------------------------------

def cmd_solve(args) -> dict:
    g = _graph(args, args.source)
    h = _graph(args, args.target)
    d = None
    if args.td:
        with open(args.td) as fh:
            d, _ = parse_td(fh.read())
    res = hom_solve(g, h, d, mode=args.mode, factor_dispatch=not args.no_factor_dispatch,
                    budget=_budget(args))
    out = {"verdict": "yes" if res.decision else "no"}
    if res.count is not None:
        out["count"] = str(res.count)
    if res.witness is not None:
        out["witness"] = list(res.witness)
    out["stats"] = dict(res.stats)
    out["provenance"] = res.trace
    return out


def cmd_core(args) -> dict:
    g = _graph(args, args.graph)
    cert = cores.is_core(g, budget=_budget(args), threads=args.threads)
    out = {"verdict": cert.verdict, "reason": cert.reason}
    if cert.witness is not None:
        out["witness"] = list(cert.witness)
    if cert.verdict == cores.NOT_CORE:
        core = cores.core_of(g, budget=_budget(args))
        out["core"] = {"vertices": list(core.vertices), "kind": core.kind,
                       "shape": describe(core.graph)}
    return out


def cmd_projective(args) -> dict:
    g = _graph(args, args.graph)
    rep = algebra.is_projective(g, budget=_budget(args) if args.budget or args.seconds else None)
    out = {"verdict": rep.verdict, "extensions": rep.extensions, "reason": rep.reason}
    if rep.witness is not None:
        out["witness_layout"] = "image of (x, y) at position x*n+y"
        out["witness"] = list(rep.witness)
        out["witness_valid"] = algebra.is_idempotent_non_projection(g.without_labels(), rep.witness)
    return out


def cmd_factor(args) -> dict:
    g = _graph(args, args.graph)
    f = algebra.factorize_prime(g)
    iso = algebra.verify_factorization(g, f.factors)
    return {"factors": [f_.n for f_ in f.factors], "shapes": [describe(f_) for f_ in f.factors],
            "prime": len(f.factors) == 1, "verified": iso is not None,
            "coordinates": [list(c) for c in f.iso]}


def cmd_gadget(args) -> dict:
    h = _graph(args, args.target)
    if args.r is not None:
        g = gadgets.build_nonprojective_gadget(h, _graph(args, args.r), args.w)
    else:
        g = gadgets.build_projective_gadget(h)
    cert = gadgets.verify_gadget(g, budget=_budget(args), seed=args.seed)
    out = {"kind": g.kind, "mode": g.mode, "coords": g.coords, "vertices": g.order,
           "u_star": list(g.u_star), "v_star": list(g.v_star),
           "certificate": {"pairs": f"{cert.pairs_witnessed}/{cert.pairs_required}",
                           "coordinates": f"{cert.coords_ok}/{cert.coords_total}",
                           "verdicts": cert.verdicts, "direct_check": cert.direct_check,
                           "conditional": cert.conditional, "failures": cert.failures},
           "verdict": "unconditional" if cert.unconditional else
                      ("conditional" if cert.ok else "failed")}
    if args.out:
        if g.f is None:
            raise HomtwError("symbolic gadget cannot be written out")
        with open(args.out, "w") as fh:
            fh.write(emit_dimacs(g.f))
    return out


def cmd_reduce(args) -> dict:
    g = _graph(args, args.graph)
    h = _graph(args, args.target)
    d = None
    if args.td:
        with open(args.td) as fh:
            d, _ = parse_td(fh.read())
    red = gadgets.reduce_kcoloring(g, h, d)
    out = {"vertices": red.graph.n, "edges": red.graph.m, "copies": len(red.copies),
           "gadget_vertices": red.gadget.f.n}
    if red.decomposition is not None:
        rep = validate(red.graph, red.decomposition)
        out["decomposition"] = {"valid": rep.ok, "width": rep.width,
                                "input_width": d.width}
        if args.td_out:
            with open(args.td_out, "w") as fh:
                fh.write(emit_td(red.decomposition, red.graph.n))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(emit_dimacs(red.graph))
        with open(args.out + ".map", "w") as fh:
            fh.write(red.map_text())
    out["verdict"] = "built"
    return out


PAPER_CORES = {
    "quick": [("K3 x Grotzsch", "product:clique:3,grotzsch")],
    "full": [("K3 x Grotzsch", "product:clique:3,grotzsch"),
             ("K3 x Chvatal", "product:clique:3,chvatal"),
             ("K3 x Brinkmann", "product:clique:3,brinkmann")],
}
CONJECTURE_PAIRS = {
    "quick": [("clique:3", "grotzsch")],
    "full": [("clique:3", "grotzsch"), ("clique:3", "chvatal"), ("clique:3", "brinkmann")],
}


def _exp_cores(args) -> list[dict]:
    items = []
    for name, spec in PAPER_CORES[args.tier]:
        cert = cores.is_core(parse_graph_spec(spec), budget=_budget(args), threads=args.threads)
        items.append({"item": name, "verdict": cert.verdict})
    return items


def _exp_conjecture(args) -> list[dict]:
    pairs = [tuple(p) for p in args.pair] if args.pair else CONJECTURE_PAIRS[args.tier]
    items = []
    for a_spec, b_spec in pairs:
        a, b = parse_graph_spec(a_spec), parse_graph_spec(b_spec)
        name = f"{a_spec} x {b_spec}"
        checks = {
            "cores": cores.is_core(a).is_core and cores.is_core(b).is_core,
            "incomparable": cores.incomparable(a, b),
            "indecomposable": all(algebra.is_indecomposable(x) for x in (a, b)),
        }
        if not all(checks.values()):
            failed = [k for k, v in checks.items() if not v]
            items.append({"item": name, "verdict": "precondition failed: " + ", ".join(failed)})
            continue
        cert = cores.is_core(direct_product([a, b]), budget=_budget(args), threads=args.threads)
        items.append({"item": name, "verdict": cert.verdict})
    return items


def random_graph(rng: random.Random, n: int, p: float, loops: float = 0.0) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i, n)
             if (i < j and rng.random() < p) or (i == j and rng.random() < loops)]
    return build_graph(n, edges)


def oracle_sweep(rng: random.Random, pairs: int) -> dict:
    """DP against backtracking on random (G <= 9, H <= 7) pairs."""
    mismatches = 0
    for _ in range(pairs):
        g = random_graph(rng, rng.randint(1, 9), rng.uniform(0.2, 0.6))
        h = random_graph(rng, rng.randint(1, 7), rng.uniform(0.3, 0.8), 0.1)
        d = heuristic_decomposition(g)
        want = count_homs(g, h)
        got = hom_dp(g, h, d, "count")
        if got.count != want or got.decision != (want > 0):
            mismatches += 1
    return {"pairs": pairs, "mismatches": mismatches}


def _exp_oracle(args) -> list[dict]:
    rng = random.Random(args.seed)
    pairs = 100 if args.tier == "quick" else 500
    res = oracle_sweep(rng, pairs)
    return [{"item": f"{pairs} random pairs", "verdict": f"{res['mismatches']} mismatches",
             "mismatches": res["mismatches"]}]


EXPERIMENTS = {"paper-5-cores": _exp_cores, "conjecture-18": _exp_conjecture,
               "oracle-suite": _exp_oracle}


def cmd_experiment(args) -> dict:
    items = EXPERIMENTS[args.name](args)
    out = {"experiment": args.name, "tier": args.tier, "items": items}
    bad = [i for i in items if i["verdict"] == cores.INCONCLUSIVE]
    out["verdict"] = "inconclusive" if bad else "done"
    return out


COMMANDS = {"solve": cmd_solve, "core": cmd_core, "projective": cmd_projective,
            "factor": cmd_factor, "gadget": cmd_gadget, "reduce": cmd_reduce,
            "experiment": cmd_experiment}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=int, default=None, help="search node limit")
    common.add_argument("--seconds", type=float, default=None, help="wall-clock limit")
    common.add_argument("--timing", action="store_true", help="include wall time")

    p = argparse.ArgumentParser(prog="homtw", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="decide/find/count G -> H")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--td", help="PACE .td decomposition of the source")
    s.add_argument("--mode", choices=["decide", "find", "count"], default="decide")
    s.add_argument("--no-factor-dispatch", action="store_true")

    for name, helptext in (("core", "core test and core computation"),
                           ("projective", "projectivity test"),
                           ("factor", "prime factorization")):
        c = sub.add_parser(name, parents=[common], help=helptext)
        c.add_argument("graph")

    g = sub.add_parser("gadget", parents=[common], help="build and verify an edge gadget")
    g.add_argument("target")
    g.add_argument("--r", help="extra factor R for the non-projective gadget")
    g.add_argument("--w", type=int, default=0, help="fixed vertex of R")
    g.add_argument("--out", help="write the materialized gadget (DIMACS-like)")

    r = sub.add_parser("reduce", parents=[common], help="k-colouring reduction")
    r.add_argument("graph")
    r.add_argument("target")
    r.add_argument("--td", help="PACE .td decomposition of the input graph")
    r.add_argument("--td-out", help="write the extended decomposition")
    r.add_argument("--out", help="write G* (DIMACS-like) and a .map side file")

    e = sub.add_parser("experiment", parents=[common], help="reproducible experiments")
    e.add_argument("name", choices=sorted(EXPERIMENTS))
    e.add_argument("--tier", choices=["quick", "full"], default="quick")
    e.add_argument("--pair", nargs=2, action="append", metavar=("A", "B"),
                   help="factor pair for conjecture-18 (repeatable)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.monotonic()
    report = {"command": " ".join(["homtw"] + list(argv if argv is not None else sys.argv[1:]))}
    args.inputs = {}
    code = EXIT_OK
    try:
        result = COMMANDS[args.command](args)
        if args.inputs:
            report["inputs"] = args.inputs
        report.update(result)
        if report.get("verdict") == "inconclusive":
            code = EXIT_INCONCLUSIVE
    except Inconclusive as exc:
        report.update(verdict="inconclusive", reason=str(exc))
        code = EXIT_INCONCLUSIVE
    except (HomtwError, ValueError, OSError) as exc:
        report.update(verdict="error", error=str(exc))
        code = EXIT_INPUT
    if args.timing:
        report["seconds"] = round(time.monotonic() - start, 3)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n" if args.json else format_report(report)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
