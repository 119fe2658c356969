"""Command-line interface.

Exit status: 0 when everything passed, 1 when a verdict failed or requested
constants are invalid, 2 on usage or validation errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import analysis
from .core import BudgetError, InputSequence, SampleParams, ValidationError, uniform
from .fringe_tree import FringeTree, shape_digest
from .harness import (
    EXPERIMENTS,
    ExperimentConfig,
    ExperimentReport,
    _clean,
    parse_distribution,
    render_report,
    run_experiment,
)
from .quicksort import quicksort_k, sedgewick_count


def _emit(obj, out=None):
    text = json.dumps(_clean(obj), indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_values(args) -> list:
    if args.values:
        tokens = args.values
    elif args.input and args.input != "-":
        with open(args.input) as fh:
            tokens = fh.read().split()
    else:
        tokens = sys.stdin.read().split()
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise ValidationError(f"values must be integers: {exc}") from exc


def _distribution(args):
    if getattr(args, "dist", None):
        return parse_distribution(args.dist)
    if getattr(args, "u", None):
        return uniform(args.u)
    raise ValidationError("give --dist or --u")


def cmd_sort(args) -> int:
    values = _read_values(args)
    seq = InputSequence(tuple(values), u=args.u)
    out = quicksort_k(seq, SampleParams(args.k), record_events=args.events)
    result = {
        "k": args.k,
        "n": len(values),
        "sorted": list(out.sorted.values),
        "ids": list(out.sorted.ids),
        "ledger": out.ledger.as_dict(),
        "sedgewick_count": sedgewick_count(out.ledger),
        "tree": shape_digest(out.tree),
    }
    if args.events:
        result["events"] = [[i, p, c.name] for i, p, c in out.ledger.events]
    _emit(result, args.out)
    return 0


def cmd_tree(args) -> int:
    values = _read_values(args)
    seq = InputSequence(tuple(values), u=args.u)
    tree = FringeTree.build(seq, SampleParams(args.k))
    result = {
        "k": args.k,
        "n": len(values),
        "digest": tree.digest(),
        "height": tree.height(),
        "inner_nodes": tree.inner_count,
        "partition_cmps": tree.ledger.partition_cmps,
        "median_cmps": tree.ledger.median_cmps,
    }
    if args.u:
        result["saturated"] = tree.is_saturated(args.u)
        if result["saturated"]:
            result["node_depths"] = list(tree.node_depths(args.u))
    _emit(result, args.out)
    return 0


def cmd_exact(args) -> int:
    q = _distribution(args)
    params = SampleParams(args.k)
    h_ld = analysis.entropy(q, 2)
    a_k = analysis.alpha_k(args.k)
    result = {
        "u": q.u,
        "k": args.k,
        "entropy_ld": h_ld,
        "entropy_ln": analysis.entropy_ln(q),
        "qs_entropy": analysis.qs_entropy(q),
        "expected_search_cost_dp": analysis.expected_search_cost_dp(q, params),
        "allen_munro_cost": analysis.allen_munro_cost(q),
        "alpha_k": a_k,
        "alpha_k_times_entropy_ld": a_k * h_ld,
    }
    if args.n:
        lb = analysis.sorting_lower_bound(q, args.n)
        result.update(n=args.n, lower_bound=lb, lower_bound_per_n=lb / args.n)
    _emit(result, args.out)
    return 0


def cmd_bounds(args) -> int:
    params = SampleParams(args.k)
    kinds = ("upper", "lower") if args.kind == "both" else (args.kind,)
    result = {"k": args.k, "alpha_k": analysis.alpha_k(args.k), "constants": []}
    status = 0
    for eps in args.eps or []:
        for kind in kinds:
            bc = analysis.bound_constants(kind, params, eps)
            entry = {"kind": kind, "eps": eps, "c": bc.c, "d": bc.d, "tildeH": bc.tildeH,
                     "tildeh": bc.tildeh, "valid": bc.valid}
            if not bc.valid:
                side = "c >= 0" if kind == "upper" else "d >= 0"
                entry["diagnostic"] = f"invalid constants: side condition {side} fails"
                sys.stderr.write(f"{kind} bound, eps={eps}: {entry['diagnostic']}\n")
                status = 1
            result["constants"].append(entry)
    if args.c is not None:
        if args.alpha is not None:
            hc = analysis.height_constants(params, args.c, args.alpha)
        else:
            hc = analysis.optimize_height_alpha(params, args.c)
        if hc is None or not hc.valid:
            sys.stderr.write("height constants: no alpha with delta > 0\n")
            status = 1
        result["height"] = None if hc is None else {
            "c": hc.c, "alpha": hc.alpha, "p": hc.p, "delta": hc.delta, "eta": hc.eta, "valid": hc.valid}
    if args.dist or args.u:
        q = _distribution(args)
        n = args.n or 1
        result["lower_bound"] = {"n": n, "value": analysis.sorting_lower_bound(q, n)}
    _emit(result, args.out)
    return status


def cmd_simulate(args) -> int:
    cfg = ExperimentConfig(
        experiment=args.experiment, dist=args.dist, u=args.u, n=args.n, k=args.k,
        trials=args.trials, seed=args.seed, nu=args.nu, workers=args.workers,
        cost_rel_tol=args.tol, output_format=args.format,
        **({"eps_grid": args.eps_grid} if args.eps_grid else {}),
    )
    report = run_experiment(cfg)
    text = report.to_json() if args.format == "json" else report.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(report.to_csv())
    return 0 if report.passed else 1


def cmd_report(args) -> int:
    with open(args.path) as fh:
        report = ExperimentReport.from_json(fh.read())
    sys.stdout.write(render_report(report))
    return 0 if report.passed else 1


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fringesort", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def values_args(p):
        p.add_argument("values", nargs="*", help="integer keys in 1..u (else read --input or stdin)")
        p.add_argument("--input", help="file with whitespace-separated keys ('-' for stdin)")
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--u", type=int)
        p.add_argument("--out")

    p = sub.add_parser("sort", help="sort keys, print sorted output and comparison ledger")
    values_args(p)
    p.add_argument("--events", action="store_true", help="include the partition event log")
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("tree", help="build a fringe-balanced tree, print digest and node depths")
    values_args(p)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("exact", help="analytic quantities for a distribution")
    p.add_argument("--dist")
    p.add_argument("--u", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bounds", help="entropy bound constants, height constants, lower bound")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eps", type=float, action="append")
    p.add_argument("--kind", choices=("upper", "lower", "both"), default="both")
    p.add_argument("--c", type=float, help="height factor c for the height constants")
    p.add_argument("--alpha", type=float, help="alpha for the height constants (default: optimized)")
    p.add_argument("--dist")
    p.add_argument("--u", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="run a seeded experiment and print its report")
    p.add_argument("--experiment", choices=EXPERIMENTS, required=True)
    p.add_argument("--dist")
    p.add_argument("--u", type=int)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--nu", type=float, default=0.8)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tol", type=float, default=0.02, help="relative tolerance of the cost check")
    p.add_argument("--eps-grid", type=float, nargs="+")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.add_argument("--csv", help="also write per-trial rows to this CSV file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="render a stored JSON report")
    p.add_argument("path")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValidationError, BudgetError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        parser.print_usage(sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
