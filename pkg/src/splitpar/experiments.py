"""Convergence experiments, error norms, rate tables, and CSV output.

Four preset studies reproduce the benchmark tables: a refinement study
on the constant-coefficient problem (M = 40..320), a sweep over the five
coefficient families at M = 160, and overlap- and strip-count sweeps of
the domain-decomposition schemes.  run_experiment drives the steppers
over the configured cross product, caches runs whose parameters
coincide (the unsplit schemes do not depend on xi or q), records every
failure per cell without aborting the sweep, and marks structurally
impossible combinations (directionwise splitting of a tensor with mixed
terms) as not applicable.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from .decomposition import make_strip_decomposition
from .linsolve import LinearSolver
from .mesh import Grid
from .operators import UnsupportedSplittingError
from .problems import COEFFICIENT_NAMES, make_problem
from .steppers import METHODS, RunReport, StepperConfig, run

__all__ = [
    "ExperimentConfig",
    "CellResult",
    "ExperimentReport",
    "error_norm",
    "rate_table",
    "fitted_rate",
    "table_config",
    "run_experiment",
    "write_csv",
    "read_csv",
    "format_table",
    "plot_errors",
]

_DD_METHODS = ("dg_dd", "dk_dd")


def error_norm(error_vectors, h: float) -> float:
    """max over the series of h * || e ||_2 of per-step nodal error vectors."""
    best = None
    for e in error_vectors:
        v = h * float(np.linalg.norm(np.asarray(e, dtype=float)))
        best = v if best is None or v > best else best
    if best is None:
        raise ValueError("error series is empty")
    return best


def _checked_errors(errors_by_M):
    Ms = sorted(errors_by_M)
    if len(Ms) < 2:
        raise ValueError("need errors on at least two grids to measure a rate")
    for M in Ms:
        if not errors_by_M[M] > 0:
            raise ValueError(f"error at M={M} is not positive: {errors_by_M[M]}")
    return Ms


def rate_table(errors_by_M) -> float:
    """Mean observed order over consecutive refinements.

    errors_by_M maps grid size M to the measured error; the result is
    the mean of log(e_i / e_{i+1}) / log(M_{i+1} / M_i).
    """
    Ms = _checked_errors(errors_by_M)
    rates = [
        math.log(errors_by_M[Ms[i]] / errors_by_M[Ms[i + 1]])
        / math.log(Ms[i + 1] / Ms[i])
        for i in range(len(Ms) - 1)
    ]
    return sum(rates) / len(rates)


def fitted_rate(errors_by_M) -> float:
    """Least-squares slope of log error against log h; cross-check of rate_table."""
    Ms = _checked_errors(errors_by_M)
    xs = np.log([1.0 / M for M in Ms])
    ys = np.log([errors_by_M[M] for M in Ms])
    slope = np.polyfit(xs, ys, 1)[0]
    return float(slope)


@dataclass
class ExperimentConfig:
    """Cross product of methods and problem parameters to sweep."""

    name: str = "custom"
    methods: tuple = ("cn",)
    Ms: tuple = (40,)
    coefficients: tuple = ("a1",)
    xis: tuple = (Fraction(1, 8),)
    qs: tuple = (4,)
    theta: Optional[float] = None
    solver: LinearSolver = field(default_factory=LinearSolver)

    def varying_axis(self):
        """The single swept axis (name, values) used for table layout."""
        axes = [
            ("M", self.Ms),
            ("coefficient", self.coefficients),
            ("xi", self.xis),
            ("q", self.qs),
        ]
        varying = [(n, v) for n, v in axes if len(v) > 1]
        if len(varying) == 1:
            return varying[0]
        return ("M", self.Ms)


@dataclass
class CellResult:
    """One (method, parameters) cell of a sweep."""

    method: str
    coefficient: str
    M: int
    xi: Optional[Fraction]
    q: Optional[int]
    error: Optional[float] = None
    rate: Optional[float] = None
    seconds: Optional[float] = None
    note: str = ""
    report: Optional[RunReport] = None


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    cells: list
    rates: dict


def table_config(number: int, **overrides) -> ExperimentConfig:
    """Preset sweeps 1..4; keyword overrides replace any field."""
    if number == 1:
        cfg = ExperimentConfig(
            name="table1",
            methods=("cn", "dg_adi", "dk_adi", "dg_dd", "dk_dd"),
            Ms=(40, 80, 160, 320),
            coefficients=("a1",),
            xis=(Fraction(1, 8),),
            qs=(4,),
        )
    elif number == 2:
        cfg = ExperimentConfig(
            name="table2",
            methods=("cn", "dg_adi", "dk_adi", "dg_dd", "dk_dd"),
            Ms=(160,),
            coefficients=COEFFICIENT_NAMES,
            xis=(Fraction(1, 8),),
            qs=(4,),
        )
    elif number == 3:
        cfg = ExperimentConfig(
            name="table3",
            methods=("cn", "dg_dd", "dk_dd"),
            Ms=(160,),
            coefficients=("a2",),
            xis=(Fraction(1, 8), Fraction(1, 16), Fraction(1, 32)),
            qs=(4,),
        )
    elif number == 4:
        cfg = ExperimentConfig(
            name="table4",
            methods=("cn", "dg_dd", "dk_dd"),
            Ms=(160,),
            coefficients=("a2",),
            xis=(Fraction(1, 16),),
            qs=(2, 4, 8),
        )
    else:
        raise ValueError(f"unknown table preset {number}; expected 1..4")
    return replace(cfg, **overrides) if overrides else cfg


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run the full sweep; never aborts on a per-cell failure."""
    for m in config.methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")
    problems = {c: make_problem(c) for c in config.coefficients}
    grids = {M: Grid(M) for M in config.Ms}
    cache = {}
    cells = []
    for method, coeff, M, xi, q in product(
        config.methods, config.coefficients, config.Ms, config.xis, config.qs
    ):
        dd = method in _DD_METHODS
        key = (method, coeff, M) + ((xi, q) if dd else ())
        if key in cache:
            cached = cache[key]
            cells.append(
                replace(
                    cached,
                    xi=xi if dd else None,
                    q=q if dd else None,
                )
            )
            continue
        cell = CellResult(
            method=method,
            coefficient=coeff,
            M=M,
            xi=xi if dd else None,
            q=q if dd else None,
        )
        try:
            decomposition = make_strip_decomposition(q, xi) if dd else None
            report = run(
                problems[coeff],
                grids[M],
                StepperConfig(method=method, theta=config.theta, solver=config.solver),
                decomposition,
            )
            cell.error = report.error
            cell.seconds = report.seconds
            cell.report = report
        except UnsupportedSplittingError:
            cell.note = "n/a"
        except Exception as exc:  # noqa: BLE001 - per-cell capture is the contract
            cell.note = f"failed: {exc}"
        cache[key] = cell
        cells.append(cell)

    # pairwise rates against the previous grid of the same parameter group
    by_group = {}
    for cell in cells:
        group = (cell.method, cell.coefficient, cell.xi, cell.q)
        if cell.error is not None:
            prev = by_group.get(group)
            if prev is not None and prev.error and prev.M != cell.M:
                cell.rate = math.log(prev.error / cell.error) / math.log(cell.M / prev.M)
            by_group[group] = cell

    rates = {}
    if len(config.Ms) > 1:
        for method in config.methods:
            for coeff, xi, q in product(config.coefficients, config.xis, config.qs):
                errs = {
                    c.M: c.error
                    for c in cells
                    if c.method == method
                    and c.coefficient == coeff
                    and c.error is not None
                    and (c.method not in _DD_METHODS or (c.xi == xi and c.q == q))
                }
                if len(errs) > 1:
                    rates[method] = rate_table(errs)
    return ExperimentReport(config=config, cells=cells, rates=rates)


_CSV_FIELDS = ("method", "M", "coeff", "xi", "q", "error", "rate", "seconds", "note")


def write_csv(cells, path) -> None:
    """One row per cell; errors with full precision, xi as an exact fraction."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_FIELDS)
        for c in cells:
            writer.writerow(
                [
                    c.method,
                    c.M,
                    c.coefficient,
                    "" if c.xi is None else str(Fraction(c.xi)),
                    "" if c.q is None else c.q,
                    "" if c.error is None else f"{c.error:.17g}",
                    "" if c.rate is None else f"{c.rate:.6g}",
                    "" if c.seconds is None else f"{c.seconds:.3f}",
                    c.note,
                ]
            )


def read_csv(path):
    """Inverse of write_csv up to the printed precision of rate/seconds."""
    cells = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != _CSV_FIELDS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        for row in reader:
            cells.append(
                CellResult(
                    method=row["method"],
                    coefficient=row["coeff"],
                    M=int(row["M"]),
                    xi=Fraction(row["xi"]) if row["xi"] else None,
                    q=int(row["q"]) if row["q"] else None,
                    error=float(row["error"]) if row["error"] else None,
                    rate=float(row["rate"]) if row["rate"] else None,
                    seconds=float(row["seconds"]) if row["seconds"] else None,
                    note=row["note"],
                )
            )
    return cells


def _axis_value(cell, axis):
    if axis == "M":
        return cell.M
    if axis == "coefficient":
        return cell.coefficient
    if axis == "xi":
        return cell.xi
    return cell.q


def format_table(report: ExperimentReport, verbose: bool = False) -> str:
    """Aligned text table, methods as rows, the swept axis as columns.

    The rate column is the mean of pairwise rates over refinements;
    verbose appends the least-squares fitted order for comparison.
    """
    config = report.config
    axis, values = config.varying_axis()
    fixed = []
    if axis != "coefficient" and len(config.coefficients) == 1:
        fixed.append(f"coefficient {config.coefficients[0]}")
    if axis != "M" and len(config.Ms) == 1:
        fixed.append(f"M = {config.Ms[0]}")
    if axis != "xi" and len(config.xis) == 1:
        fixed.append(f"xi = {config.xis[0]}")
    if axis != "q" and len(config.qs) == 1:
        fixed.append(f"q = {config.qs[0]}")
    title = config.name + ("  (" + ", ".join(fixed) + ")" if fixed else "")

    def col_label(v):
        return f"{axis}={v}"

    show_rate = bool(report.rates)
    header = ["method"] + [col_label(v) for v in values] + (["rate"] if show_rate else [])
    rows = [header]
    for method in config.methods:
        row = [method]
        for pos, v in enumerate(values):
            match = [
                c
                for c in report.cells
                if c.method == method and _axis_value(c, axis) == v
            ]
            if not match and axis in ("xi", "q"):
                # methods without subdomains carry no xi or q; their
                # cells line up with the sweep by position
                match = [
                    c
                    for c in report.cells
                    if c.method == method and _axis_value(c, axis) is None
                ][pos : pos + 1]
            if not match:
                row.append("")
                continue
            c = match[0]
            row.append(f"{c.error:.3e}" if c.error is not None else c.note or "?")
        if show_rate:
            row.append(f"{report.rates[method]:.3f}" if method in report.rates else "")
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = [title]
    for r in rows:
        lines.append("  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip())
    if verbose and show_rate:
        for method in config.methods:
            errs = {
                c.M: c.error
                for c in report.cells
                if c.method == method and c.error is not None
            }
            if len(errs) > 1:
                lines.append(f"fitted rate {method}: {fitted_rate(errs):.3f}")
    return "\n".join(lines) + "\n"


def plot_errors(report: ExperimentReport, path) -> None:
    """Log-log plot of error against the swept numeric axis, written to a file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    axis, values = report.config.varying_axis()
    if axis == "coefficient":
        raise ValueError("the swept axis is categorical; nothing to plot")
    fig, ax = plt.subplots(figsize=(5.0, 3.75))
    for method in report.config.methods:
        xs, ys = [], []
        for pos, v in enumerate(values):
            match = [
                c
                for c in report.cells
                if c.method == method and _axis_value(c, axis) == v
            ]
            if not match and axis in ("xi", "q"):
                match = [
                    c
                    for c in report.cells
                    if c.method == method and _axis_value(c, axis) is None
                ][pos : pos + 1]
            if match and match[0].error:
                xs.append(float(v))
                ys.append(match[0].error)
        if xs:
            ax.loglog(xs, ys, marker="o", label=method)
    ax.set_xlabel(axis)
    ax.set_ylabel("error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
