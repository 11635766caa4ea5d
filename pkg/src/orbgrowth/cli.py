"""Command line entry point.

    orbgrowth spheres    --expr EXPR [--radius R] [--format csv|json]
    orbgrowth subdegrees --expr EXPR
    orbgrowth growth     --expr EXPR
    orbgrowth ends       --expr EXPR
    orbgrowth verify     --expr EXPR [--seed S]

Exit codes: 0 ok, 1 verification failure, 2 usage or parse error, 3 vertex
budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
import warnings

from .constructions import ConstructionError
from .expr import ParseError, build, parse
from .growth import classify_view, verify_growth_bounds
from .lazy import BudgetExceeded, default_budget, end_profile, expand
from .perm import PermError
from .suborbits import (
    NonExactRecords,
    UnsupportedConstruction,
    report_csv,
    report_json,
    subdegree_sequences,
    suborbit_partition,
)
from .verify import is_distance_transitive, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
COMMANDS = ("spheres", "subdegrees", "growth", "ends", "verify")


def _parser():
    p = argparse.ArgumentParser(prog="orbgrowth", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--expr", required=True, help='construction, e.g. "lobes(m=2, lobe=petersen)"')
    p.add_argument("--radius", type=int, default=6)
    p.add_argument("--budget", type=int, default=None, help="vertex cap for BFS")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    return p


def _emit(text, out):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_spheres(graph, args):
    try:
        table = expand(graph, args.radius, budget=args.budget)
    except BudgetExceeded as exc:
        _emit(exc.table.to_json() if args.format == "json" else exc.table.to_csv(), args.out)
        print(f"orbgrowth: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    _emit(table.to_json() if args.format == "json" else table.to_csv(), args.out)
    return EXIT_OK


def _records(graph, args):
    table = expand(graph, args.radius, budget=args.budget)
    return table, suborbit_partition(graph, table)


def _cmd_subdegrees(graph, args):
    _, records = _records(graph, args)
    if args.format == "json":
        try:
            multiset, view = subdegree_sequences(records, args.radius)
        except NonExactRecords:
            multiset = view = None
        _emit(report_json(records, multiset, view), args.out)
    else:
        _emit(report_csv(records), args.out)
    return EXIT_OK


def _cmd_growth(graph, args):
    table, records = _records(graph, args)
    _, view = subdegree_sequences(records, table.radius)
    report = classify_view(view)
    dt = is_distance_transitive(graph)
    report.bounds = verify_growth_bounds(
        view, table.sizes()[1], dt, getattr(graph, "m", None) if dt else None
    )
    _emit(report.to_json(), args.out)
    return EXIT_OK


def _cmd_ends(graph, args):
    table = expand(graph, args.radius, budget=args.budget)
    lines = ["r,R,components,frontier_sizes"]
    for R in range(1, args.radius + 1):
        for r in range(R):
            prof = end_profile(graph, r, R, table=table)
            lines.append(f"{r},{R},{prof.components},{';'.join(map(str, prof.frontier_sizes))}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_verify(graph, args):
    results = run_checks(graph, args.radius, seed=args.seed, budget=args.budget)
    lines = [f"# {graph.descriptor} radius={args.radius} seed={args.seed}"]
    lines += [res.line() for res in results]
    failed = [res for res in results if res.passed is False]
    lines.append(f"# {'FAILED' if failed else 'OK'}: {len(failed)} failing checks")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_FAIL if failed else EXIT_OK


_DISPATCH = {
    "spheres": _cmd_spheres,
    "subdegrees": _cmd_subdegrees,
    "growth": _cmd_growth,
    "ends": _cmd_ends,
    "verify": _cmd_verify,
}


def run(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.radius < 0:
        print("orbgrowth: --radius must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json" and args.command in ("growth", "verify", "ends"):
        print(f"orbgrowth: --format does not apply to {args.command}", file=sys.stderr)
        return EXIT_USAGE
    if args.budget is None:
        args.budget = default_budget()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            graph = build(parse(args.expr))
    except ParseError as exc:
        print(f"orbgrowth: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstructionError, PermError, OSError) as exc:
        print(f"orbgrowth: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _DISPATCH[args.command](graph, args)
    except BudgetExceeded as exc:
        print(f"orbgrowth: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NonExactRecords, UnsupportedConstruction, ValueError) as exc:
        print(f"orbgrowth: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
