"""Command-line surface: decompose, solve, verify, bounds, gen, bench, and
indistinct-set inspection.

Exit codes: 0 ok, 1 verification failure, 2 parse/usage error,
3 disconnected input, 4 resource or guard exhaustion, 5 bench disagreement.
JSON output is byte-identical across repeated runs for fixed inputs and
flags; volatile timing fields only appear in text output.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .decomposition import (
    SizeGuardError,
    check_parameter_bounds,
    compute_branches,
    quotient_graph,
    two_core,
)
from .geometry import indistinct_set
from .graphs import (
    DisconnectedGraphError,
    Graph,
    GraphParseError,
    format_edge_list,
    generate,
    graph_to_json_dict,
    parse_edge_list,
)
from .oracle import (
    SearchBudgetError,
    is_locating_set,
    metric_dimension_bruteforce,
    oracle_result_json,
)
from .solver import Budget, BudgetExceededError, solve_fpt

OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_DISCONNECTED = 3
EXIT_RESOURCE = 4
EXIT_DISAGREE = 5

ENGINES = ("auto", "brute", "fpt-faithful", "fpt-pragmatic")


def _read_graph(path: str) -> Graph:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    return parse_edge_list(text)


def _emit(payload: dict, fmt: str, text_lines=None) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        for line in text_lines if text_lines is not None else _default_text(payload):
            sys.stdout.write(line + "\n")


def _default_text(payload: dict):
    for key in sorted(payload):
        yield "%s: %s" % (key, payload[key])


def _pick_engine(engine: str, g: Graph) -> str:
    if engine != "auto":
        return engine
    return "brute" if g.vertex_count <= 12 else "fpt-pragmatic"


def _budget(args) -> Budget | None:
    if args.budget_ms is None and args.budget_nodes is None:
        return None
    return Budget(time_ms=args.budget_ms, max_nodes=args.budget_nodes)


def _solve_once(g: Graph, engine: str, budget: Budget | None) -> dict:
    started = time.monotonic()
    if engine == "brute":
        max_subsets = budget.max_nodes if budget and budget.max_nodes else 20_000_000
        deadline = None
        if budget and budget.time_ms is not None:
            deadline = started + budget.time_ms / 1000.0
        dim, witness = metric_dimension_bruteforce(
            g, max_subsets=max_subsets, deadline=deadline
        )
        result = oracle_result_json(dim, witness)
        result["stats"] = {}
    else:
        mode = "faithful" if engine == "fpt-faithful" else "pragmatic"
        res = solve_fpt(g, mode=mode, budget=budget)
        result = res.to_json_dict()
    result["ms"] = int((time.monotonic() - started) * 1000)
    return result


def cmd_decompose(args) -> int:
    g = _read_graph(args.input)
    d = compute_branches(g)
    q = quotient_graph(d)
    core = two_core(g)
    payload = {
        "n": g.vertex_count,
        "m": g.edge_count,
        "b": d.branch_count,
        "junctions": sorted(d.junctions),
        "branches": [
            {
                "id": br.id,
                "kind": br.kind,
                "endpoints": list(br.endpoints) if br.endpoints else None,
                "vertices": list(br.vertices),
                "length": br.length,
            }
            for br in d.branches
        ],
        "two_core_size": core.core.vertex_count,
        "quotient": {
            "vertices": list(q.vertices),
            "edges": [[u, v, w] for u, v, w, _ in q.edges],
        },
    }
    lines = [
        "n: %d  m: %d  branches: %d  junctions: %s"
        % (g.vertex_count, g.edge_count, d.branch_count, sorted(d.junctions)),
        "two-core size: %d" % core.core.vertex_count,
    ]
    for br in d.branches:
        lines.append(
            "branch %d: %s length %d endpoints %s vertices %s"
            % (br.id, br.kind, br.length, br.endpoints, list(br.vertices))
        )
    lines.append(
        "quotient: %d vertices, %d weighted edges" % (len(q.vertices), len(q.edges))
    )
    _emit(payload, args.format, lines)
    return OK


def cmd_solve(args) -> int:
    g = _read_graph(args.input)
    engine = _pick_engine(args.engine, g)
    result = _solve_once(g, engine, _budget(args))
    ms = result.pop("ms")
    if args.format == "json":
        result.get("stats", {}).pop("ms", None)  # volatile; text mode only
        _emit(result, "json")
    else:
        lines = [
            "dimension: %d" % result["dimension"],
            "witness: %s" % result["witness"],
            "engine: %s" % result["engine"],
            "ms: %d" % ms,
        ]
        _emit(result, "text", lines)
    return OK


def cmd_verify(args) -> int:
    g = _read_graph(args.input)
    if not args.set:
        raise GraphParseError("empty landmark set; pass --set \"v1,v2,...\"")
    try:
        landmarks = [int(tok) for tok in args.set.split(",") if tok.strip() != ""]
    except ValueError:
        raise GraphParseError("bad --set %r" % args.set) from None
    if not landmarks:
        raise GraphParseError("empty landmark set; pass --set \"v1,v2,...\"")
    ok, pair = is_locating_set(g, landmarks)
    if ok:
        _emit({"ok": True, "set": sorted(set(landmarks))}, args.format, ["OK"])
        return OK
    _emit(
        {"ok": False, "set": sorted(set(landmarks)), "unresolved": list(pair)},
        args.format,
        ["NOT LOCATING: vertices %d and %d are unresolved" % pair],
    )
    return EXIT_VERIFY


def cmd_bounds(args) -> int:
    g = _read_graph(args.input)
    report = check_parameter_bounds(g, guard=args.guard)
    payload = report.to_json_dict()
    _emit(payload, args.format)
    return OK


def cmd_gen(args) -> int:
    params = [int(p) for p in args.params]
    g = generate(args.family, *params, seed=args.seed)
    sys.stdout.write(format_edge_list(g))
    return OK


def _parse_corpus(text: str):
    """Corpus items like "cycle 3..10" or "spider 3 2": the last number may
    be a range."""
    jobs = []
    for item in text.split(","):
        tokens = item.split()
        if not tokens:
            continue
        family = tokens[0]
        head = [int(t) for t in tokens[1:-1]]
        tail = tokens[-1] if len(tokens) > 1 else None
        if tail is None:
            raise GraphParseError("corpus item %r needs parameters" % item)
        if ".." in tail:
            lo, hi = tail.split("..")
            for value in range(int(lo), int(hi) + 1):
                jobs.append((family, head + [value]))
        else:
            jobs.append((family, head + [int(tail)]))
    return jobs


def cmd_bench(args) -> int:
    engines = [e.strip() for e in args.engines.split(",")]
    for engine in engines:
        if engine not in ENGINES or engine == "auto":
            raise GraphParseError("bad engine %r for bench" % engine)
    jobs = _parse_corpus(args.corpus)
    rows = []
    disagreement = None
    saw_resource = False
    for family, params in jobs:
        g = generate(family, *params, seed=args.seed)
        d = compute_branches(g)
        row = {
            "family": family,
            "params": params,
            "n": g.vertex_count,
            "b": d.branch_count,
            "results": {},
        }
        dims = {}
        times = {}
        for engine in engines:
            started = time.monotonic()
            try:
                result = _solve_once(g, engine, _budget(args))
                row["results"][engine] = {
                    "dimension": result["dimension"],
                    "status": "ok",
                }
                dims[engine] = result["dimension"]
            except (SearchBudgetError, BudgetExceededError):
                row["results"][engine] = {"dimension": None, "status": "budget"}
                saw_resource = True
            times[engine] = int((time.monotonic() - started) * 1000)
        row["agree"] = len(set(dims.values())) <= 1
        row["times_ms"] = times
        if not row["agree"] and disagreement is None:
            disagreement = (family, params, g, dims)
        rows.append(row)

    if args.format == "json":
        payload = {
            "rows": [
                {k: v for k, v in row.items() if k != "times_ms"} for row in rows
            ],
            "agree": disagreement is None,
        }
        _emit(payload, "json")
    else:
        header = "%-22s %4s %4s  %s" % ("graph", "n", "b", "  ".join(engines))
        lines = [header]
        for row in rows:
            cells = []
            for engine in engines:
                res = row["results"][engine]
                cell = (
                    str(res["dimension"]) if res["status"] == "ok" else res["status"]
                )
                cells.append("%s (%dms)" % (cell, row["times_ms"][engine]))
            label = "%s %s" % (row["family"], " ".join(str(p) for p in row["params"]))
            lines.append(
                "%-22s %4d %4d  %s%s"
                % (
                    label,
                    row["n"],
                    row["b"],
                    "  ".join(cells),
                    "" if row["agree"] else "  DISAGREE",
                )
            )
        _emit({}, "text", lines)

    if disagreement is not None:
        family, params, g, dims = disagreement
        sys.stderr.write(
            "engine disagreement on %s %s: %s\noffending graph: %s\n"
            % (family, params, dims, json.dumps(graph_to_json_dict(g)))
        )
        return EXIT_DISAGREE
    if saw_resource:
        return EXIT_RESOURCE
    return OK


def cmd_inspect_indistinct(args) -> int:
    g = _read_graph(args.input)
    d = compute_branches(g)
    if not (0 <= args.A < d.branch_count and 0 <= args.B < d.branch_count):
        raise GraphParseError(
            "branch ids must be in 0..%d" % (d.branch_count - 1)
        )
    if not 0 <= args.s < g.vertex_count:
        raise GraphParseError("vertex %d out of range" % args.s)
    iset = indistinct_set(g, d, args.s, args.A, args.B)
    _emit(iset.to_json_dict(), args.format)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metricdim",
        description="Metric dimension of graphs via branch decomposition.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_engine=False):
        p.add_argument("input", help="edge-list file, or '-' for stdin")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if with_engine:
            p.add_argument("--engine", choices=ENGINES, default="auto")
            p.add_argument("--budget-ms", type=int, default=None)
            p.add_argument("--budget-nodes", type=int, default=None)

    p = sub.add_parser("decompose", help="branches, junctions, 2-core, quotient")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("solve", help="metric dimension with a verified witness")
    common(p, with_engine=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a landmark set")
    common(p)
    p.add_argument("--set", required=True, help="comma-separated vertex ids")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="branch count vs max leaf number report")
    common(p)
    p.add_argument("--guard", type=int, default=20)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("gen", help="emit a generated graph as an edge list")
    p.add_argument("family")
    p.add_argument("params", nargs="*")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run engines over a generator corpus")
    p.add_argument("corpus", help='e.g. "cycle 3..10, complete 3..6"')
    p.add_argument("--engines", default="brute,fpt-pragmatic")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--budget-ms", type=int, default=None)
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser(
        "inspect-indistinct", help="dump one indistinct set as JSON"
    )
    common(p)
    p.add_argument("--s", type=int, required=True, help="landmark vertex")
    p.add_argument("--A", type=int, required=True, help="first branch id")
    p.add_argument("--B", type=int, required=True, help="second branch id")
    p.set_defaults(func=cmd_inspect_indistinct)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else OK
    try:
        return args.func(args)
    except GraphParseError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_USAGE
    except DisconnectedGraphError as exc:
        sys.stderr.write("error: %s\n" % exc)
        for block in exc.components:
            sys.stderr.write("component: %s\n" % block)
        return EXIT_DISCONNECTED
    except (SizeGuardError, SearchBudgetError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_RESOURCE
    except BudgetExceededError as exc:
        sys.stderr.write(
            "error: %s (lower bound: dimension > %d, upper bound: %s)\n"
            % (exc, exc.infeasible_up_to, exc.upper_bound)
        )
        return EXIT_RESOURCE
    except ValueError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
