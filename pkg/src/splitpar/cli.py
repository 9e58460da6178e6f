"""Command-line front end.

Two subcommands:

    splitpar run --method cn --M 40 [--coeff a1] [--xi 1/8] [--q 4]
                 [--theta 0.5] [--solver direct|cg] [--out cells.csv]
    splitpar table 1 [--out table1.csv] [--plot table1.svg]

Method names use dashes on the command line (dg-adi, dk-dd, ...).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .experiments import (
    ExperimentConfig,
    format_table,
    plot_errors,
    run_experiment,
    table_config,
    write_csv,
)
from .linsolve import LinearSolver
from .problems import COEFFICIENT_NAMES
from .steppers import METHODS

_CLI_METHODS = tuple(m.replace("_", "-") for m in METHODS)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitpar",
        description="Time-splitting solvers for parabolic problems on the unit square.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one method on one configuration")
    run_p.add_argument("--method", required=True, choices=_CLI_METHODS)
    run_p.add_argument("--M", required=True, type=int, help="grid intervals per side")
    run_p.add_argument("--coeff", default="a1", choices=COEFFICIENT_NAMES)
    run_p.add_argument("--xi", default="1/8", type=_fraction, help="overlap width (fraction)")
    run_p.add_argument("--q", default=4, type=int, help="strips per subdomain")
    run_p.add_argument("--theta", default=None, type=float)
    run_p.add_argument("--solver", default="direct", choices=("direct", "cg"))
    run_p.add_argument("--cg-tol", default=1e-12, type=float)
    run_p.add_argument("--out", default=None, help="write the result as CSV")

    table_p = sub.add_parser("table", help="run one of the preset studies")
    table_p.add_argument("number", type=int, choices=(1, 2, 3, 4))
    table_p.add_argument("--solver", default="direct", choices=("direct", "cg"))
    table_p.add_argument("--cg-tol", default=1e-12, type=float)
    table_p.add_argument("--out", default=None, help="write all cells as CSV")
    table_p.add_argument("--plot", default=None, help="write an error plot (svg/png by suffix)")
    table_p.add_argument(
        "--verbose", action="store_true", help="also print least-squares fitted rates"
    )
    return parser


def _solver(args) -> LinearSolver:
    return LinearSolver(kind=args.solver, tol=args.cg_tol)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = ExperimentConfig(
                name="run",
                methods=(args.method.replace("-", "_"),),
                Ms=(args.M,),
                coefficients=(args.coeff,),
                xis=(args.xi,),
                qs=(args.q,),
                theta=args.theta,
                solver=_solver(args),
            )
        else:
            config = table_config(args.number, solver=_solver(args))
        report = run_experiment(config)
        sys.stdout.write(format_table(report, verbose=getattr(args, "verbose", False)))
        if args.out:
            write_csv(report.cells, args.out)
            print(f"wrote {args.out}")
        if getattr(args, "plot", None):
            plot_errors(report, args.plot)
            print(f"wrote {args.plot}")
        failures = [c for c in report.cells if c.note.startswith("failed")]
        if failures:
            for c in failures:
                print(f"{c.method} {c.coefficient} M={c.M}: {c.note}", file=sys.stderr)
            return 1
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
