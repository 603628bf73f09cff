"""Command-line entry point.

Exit codes: 0 success (a rejected null hypothesis is still a success; the
verdict lives in the JSON), 1 usage error, 2 data or I/O error.  Errors are
printed as a single ``error: <category>: <message>`` line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import graphio
from .hypothesis import run_test
from .model import (
    DcsbmParams,
    generate_alternative_experiment,
    generate_null_experiment,
    sample_adjacency,
    validate_params,
)
from .montecarlo import DEFAULT_TRIALS, KINDS, ExperimentConfig, run_experiment
from .tracy_widom import default_table
from .transform import estimated_transform, oracle_transform, scale, write_csv, write_dct

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _probability(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1)")
    return v


def _graph_args(p, required=True):
    p.add_argument("--input", required=required, help="graph file")
    p.add_argument("--format", default="auto", choices=("auto", "matrix_market", "edge_list"))
    p.add_argument("--n", type=int, help="node count (required for edge lists)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dcsbm-tw", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run the community test on a graph")
    _graph_args(p)
    p.add_argument("--alpha", type=_probability, default=0.05)
    p.add_argument("--clamp-floor", type=float)
    p.add_argument("--seed", type=int, help="provenance only; recorded in the output")
    p.add_argument("--out", help="write the outcome JSON here instead of stdout")

    p = sub.add_parser("sample", help="draw a graph from a DCSBM")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--params", help="parameter JSON")
    src.add_argument("--experiment", choices=("null", "alternative"),
                     help="use the built-in null or three-community generator")
    p.add_argument("--n", type=int, help="node count for --experiment")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", default="matrix_market", choices=("matrix_market", "edge_list"))
    p.add_argument("--params-out", help="also write the parameters used")

    p = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=_probability, nargs="+", default=[0.01, 0.05, 0.1])
    p.add_argument("--clamp-floor", type=float)
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--t-grid", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    p.add_argument("--variant", choices=("estimated", "oracle"), default="estimated")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("tw", help="Tracy-Widom (beta = 1) utilities")
    tw_sub = p.add_subparsers(dest="tw_command", required=True)
    q = tw_sub.add_parser("table", help="CSV of x, cdf, pdf")
    q.add_argument("--start", type=float, default=-8.0)
    q.add_argument("--stop", type=float, default=6.0)
    q.add_argument("--step", type=float, default=0.01)
    q.add_argument("--out")
    q = tw_sub.add_parser("quantile", help="inverse CDF")
    q.add_argument("--p", type=float, required=True)

    p = sub.add_parser("transform", help="write the transformed matrix")
    _graph_args(p)
    p.add_argument("--out", required=True, help="binary DCT1 container")
    p.add_argument("--csv", help="also write the matrix as CSV")
    p.add_argument("--scale", action="store_true", help="apply the n^-1/2 factor")
    p.add_argument("--clamp-floor", type=float)
    p.add_argument("--oracle-params", help="use the true probabilities from this parameter JSON")

    p = sub.add_parser("validate", help="check a parameter JSON")
    p.add_argument("--params", required=True)
    return parser


def _load_params(path) -> DcsbmParams:
    with open(path) as f:
        return DcsbmParams.from_json(f.read())


def _emit(text, path=None):
    if path:
        with open(path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _cmd_test(args):
    A = graphio.parse_graph(args.input, args.format, args.n)
    outcome = run_test(A, args.alpha, args.clamp_floor, seed=args.seed)
    _emit(outcome.to_json() + "\n", args.out)


def _cmd_sample(args):
    if args.params:
        params = _load_params(args.params)
        report = validate_params(params)
        if not report.ok:
            raise ValueError("invalid parameters: " + "; ".join(map(str, report.violations)))
    else:
        if args.n is None:
            raise UsageError("--experiment needs --n")
        gen = generate_null_experiment if args.experiment == "null" else generate_alternative_experiment
        params = gen(args.n, args.seed)
    A = sample_adjacency(params, args.seed)
    if args.format == "matrix_market":
        graphio.write_matrix_market(A, args.out)
    else:
        graphio.write_edge_list(A, args.out)
    if args.params_out:
        _emit(params.to_json() + "\n", args.params_out)


def _cmd_simulate(args):
    config = ExperimentConfig(
        kind=args.kind, n=tuple(args.n),
        trials=args.trials or DEFAULT_TRIALS[args.kind], seed=args.seed,
        alphas=tuple(args.alpha), clamp_floor=args.clamp_floor, bins=args.bins,
        t_grid=tuple(args.t_grid), variant=args.variant, threads=args.threads,
    )
    for path in run_experiment(config).write(args.out_dir):
        print(path)


def _cmd_tw(args):
    table = default_table()
    if args.tw_command == "quantile":
        print(format(table.quantile(args.p), ".17g"))
        return
    if args.step <= 0 or args.stop < args.start:
        raise UsageError("need step > 0 and stop >= start")
    table.to_csv(args.out or sys.stdout, args.start, args.stop, args.step)


def _cmd_transform(args):
    A = graphio.parse_graph(args.input, args.format, args.n)
    if args.oracle_params:
        B = oracle_transform(A, _load_params(args.oracle_params))
    else:
        B = estimated_transform(A, args.clamp_floor)
    if args.scale:
        B = scale(B)
    write_dct(B, args.out)
    if args.csv:
        write_csv(B, args.csv)


def _cmd_validate(args):
    report = validate_params(_load_params(args.params))
    print(json.dumps(report.to_dict(), indent=2))


COMMANDS = {
    "test": _cmd_test,
    "sample": _cmd_sample,
    "simulate": _cmd_simulate,
    "tw": _cmd_tw,
    "transform": _cmd_transform,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, IndexError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except RuntimeError as exc:
        print(f"error: numerical: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
