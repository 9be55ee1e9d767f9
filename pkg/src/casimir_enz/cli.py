"""Command line front end: ``pressure``, ``sweep`` and ``equilibria`` to CSV.

Output is comma-separated text. A ``#`` comment block carries the full
configuration snapshot and documents the columns; a plain header row and
the data rows follow. Floats are written in shortest round-trip form, so a
rerun with the same settings reproduces the file byte for byte.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, TextIO

import numpy as np

from .config import (
    ConfigParseError,
    ConfigValidationError,
    EquilibriaRequest,
    RunConfig,
    SweepSpec,
    parse_config,
)
from .constants import C
from .equilibria import EquilibriumPoint, equilibrium_scan
from .lifshitz import (
    CavityConfig,
    NonConvergence,
    NumericalError,
    PressureResult,
    QuadratureSettings,
    pressure,
)
from .materials import Drude

log = logging.getLogger("casimir_enz")

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_CONVERGENCE = 4

RESULT_COLUMNS = ("total", "te", "tm", "error_estimate", "evals", "status")
_RESULT_DOC = (
    "total, te, tm: pressure in Pa (negative = attractive); "
    "error_estimate: quadrature error bound in Pa; evals: integrand evaluations; "
    "status: ok | nonconverged | numerical_error | domain_error"
)
ROOT_COLUMNS = ("gap", "stability", "pressure_slope", "bracket_low", "bracket_high")


@dataclass
class RunRecord:
    """What a run produced; every row maps to one grid point or root."""

    snapshot: list[str]
    settings: QuadratureSettings
    rows: list[list] = field(default_factory=list)
    statuses: list[str] = field(default_factory=list)
    equilibria: list[EquilibriumPoint] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def failed(self) -> bool:
        return any(s != "ok" for s in self.statuses)


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def evaluate_point(cfg: CavityConfig, q: QuadratureSettings) -> tuple[PressureResult, str]:
    """Pressure at one grid point; failures become a status instead of an exception."""
    try:
        return pressure(cfg, q), "ok"
    except NonConvergence as exc:
        return exc.result, "nonconverged"
    except NumericalError:
        status = "numerical_error"
    except ValueError:
        status = "domain_error"
    nan = float("nan")
    return PressureResult(nan, nan, nan, nan, 0, converged=False), status


def _evaluate_task(task):
    return evaluate_point(*task)


@contextlib.contextmanager
def ordered_map(threads: int):
    """An order-preserving map over `threads` worker processes (inline for 1)."""
    if threads <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        yield lambda fn, *its: pool.map(fn, *its, chunksize=1)


def _result_cells(res: PressureResult, status: str) -> list:
    return [res.total, res.te, res.tm, res.error_estimate, res.evals, status]


def _drude_paths(cfg: CavityConfig) -> list[tuple[str, float]]:
    out = []
    for side, stack in (("left", cfg.left), ("right", cfg.right)):
        for i, layer in enumerate(stack.layers, start=1):
            if isinstance(layer.material, Drude):
                out.append((f"{side}.layer{i}.omega_p", layer.material.omega_p))
    return out


def _norm_columns(cfg: CavityConfig) -> list[str]:
    cols = []
    for path, _ in _drude_paths(cfg):
        cols += [f"{path}_norm_c_gap", f"{path}_norm_2pic_gap"]
    return cols


def _norm_cells(cfg: CavityConfig) -> list[float]:
    cells = []
    for _, wp in _drude_paths(cfg):
        cells += [wp / (C / cfg.gap), wp / (2.0 * np.pi * C / cfg.gap)]
    return cells


def _write_header(out: TextIO, title: str, run: RunConfig, q: QuadratureSettings, columns, extra_doc=()):
    out.write(f"# casimir-enz {title}\n")
    out.write("# config:\n")
    for line in run.snapshot():
        out.write(f"#   {line}\n")
    out.write(f"# quadrature: rel_tol={_fmt(q.rel_tol)} abs_tol={_fmt(q.abs_tol)} max_evals={q.max_evals}\n")
    out.write("# units: SI (m, rad/s, Pa)\n")
    out.write(f"# {_RESULT_DOC}\n")
    for line in extra_doc:
        out.write(f"# {line}\n")
    out.write(f"# columns: {','.join(columns)}\n")


_NORM_DOC = (
    "<layer>.omega_p_norm_c_gap = omega_p / (c/gap); "
    "<layer>.omega_p_norm_2pic_gap = omega_p / (2 pi c/gap)"
)


def run_pressure(run: RunConfig, q: QuadratureSettings, out: TextIO, normalized_freq: bool = False) -> RunRecord:
    """Single pressure evaluation of the base configuration."""
    t0 = time.perf_counter()
    cfg = run.cavity
    columns = ["gap", *RESULT_COLUMNS] + (_norm_columns(cfg) if normalized_freq else [])
    _write_header(out, "pressure", run, q, columns, [_NORM_DOC] if normalized_freq else ())
    res, status = evaluate_point(cfg, q)
    row = [cfg.gap, *_result_cells(res, status)] + (_norm_cells(cfg) if normalized_freq else [])
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    writer.writerow([_fmt(v) for v in row])
    return RunRecord(run.snapshot(), q, [row], [status], wall_time=time.perf_counter() - t0)


def run_sweep(
    spec: SweepSpec,
    run: RunConfig,
    q: QuadratureSettings,
    out: TextIO,
    threads: int = 1,
    normalized_freq: bool = False,
) -> RunRecord:
    """Evaluate the sweep grid row-major and stream one CSV row per point.

    Points may be computed in parallel; rows are always written in grid order.
    """
    t0 = time.perf_counter()
    grid = spec.grid()
    cfgs = [run.cavity_at(point) for point in grid]
    axis_cols = [a.param for a in spec.axes]
    norm_cols = _norm_columns(cfgs[0]) if normalized_freq else []
    columns = axis_cols + list(RESULT_COLUMNS) + norm_cols
    _write_header(out, "sweep", run, q, columns, [_NORM_DOC] if normalized_freq else ())
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)

    record = RunRecord(run.snapshot(), q)
    with ordered_map(threads) as pmap:
        for point, cfg, (res, status) in zip(grid, cfgs, pmap(_evaluate_task, [(c, q) for c in cfgs])):
            row = [point[p] for p in axis_cols] + _result_cells(res, status)
            if normalized_freq:
                row += _norm_cells(cfg)
            writer.writerow([_fmt(v) for v in row])
            out.flush()
            record.rows.append(row)
            record.statuses.append(status)
    record.wall_time = time.perf_counter() - t0
    return record


def run_equilibria(
    request: EquilibriaRequest,
    run: RunConfig,
    q: QuadratureSettings,
    out: TextIO,
    threads: int = 1,
    normalized_freq: bool = False,
) -> RunRecord:
    """Scan curve table followed by the equilibrium table.

    The second table starts after a ``# equilibria`` marker line with its own
    header row; warnings are written as ``# warning:`` lines before it.
    """
    t0 = time.perf_counter()
    cfg = run.cavity
    norm_cols = _norm_columns(cfg) if normalized_freq else []
    columns = ["gap", *RESULT_COLUMNS] + norm_cols
    _write_header(
        out, "equilibria", run, q, columns,
        ([_NORM_DOC] if normalized_freq else [])
        + [f"second table columns: {','.join(ROOT_COLUMNS)} "
           "(pressure_slope = dP/dgap in Pa/m; stable <=> slope < 0)"],
    )
    writer = csv.writer(out, lineterminator="\n")
    record = RunRecord(run.snapshot(), q)
    status = "ok"
    try:
        with ordered_map(threads) as pmap:
            scan = equilibrium_scan(cfg, request.gap_min, request.gap_max, request.n_scan, q, map_fn=pmap)
    except NonConvergence as exc:
        status = "nonconverged"
        log.error("%s", exc)
        scan = None

    writer.writerow(columns)
    if scan is not None:
        for g, res in zip(scan.gaps, scan.results):
            row = [float(g), *_result_cells(res, "ok")]
            if normalized_freq:
                row += _norm_cells(cfg.with_gap(float(g)))
            writer.writerow([_fmt(v) for v in row])
            record.rows.append(row)
            record.statuses.append("ok")
        record.equilibria = scan.points
        record.warnings = scan.warnings
    else:
        nan = float("nan")
        row = [nan, nan, nan, nan, nan, 0, status] + [nan] * len(norm_cols)
        writer.writerow([_fmt(v) for v in row])
        record.rows.append(row)
        record.statuses.append(status)

    out.write("# equilibria\n")
    for w in record.warnings:
        out.write(f"# warning: {w}\n")
    writer.writerow(ROOT_COLUMNS)
    for p in record.equilibria:
        writer.writerow([_fmt(v) for v in (p.gap, p.stability.value, p.pressure_slope, *p.bracket)])
    record.wall_time = time.perf_counter() - t0
    return record


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimir-enz",
        description="Casimir pressure between coated PEC/PMC mirrors (Lifshitz theory, T=0).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("pressure", "pressure of the base configuration"),
        ("sweep", "1D/2D parameter sweep"),
        ("equilibria", "zero-pressure gaps and their stability"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="configuration file (key = value)")
        p.add_argument("--out", default="-", help="output CSV path (default: stdout)")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                       help="worker processes (default: all cores)")
        p.add_argument("--rel-tol", type=float, help="override quadrature.rel_tol")
        p.add_argument("--abs-tol", type=float, help="override quadrature.abs_tol (Pa)")
        p.add_argument("--normalized-freq", action="store_true",
                       help="add omega_p/(c/gap) and omega_p/(2 pi c/gap) columns")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        run = parse_config(text)
        q = run.quadrature
        if args.rel_tol is not None or args.abs_tol is not None:
            q = replace(
                q,
                rel_tol=q.rel_tol if args.rel_tol is None else args.rel_tol,
                abs_tol=q.abs_tol if args.abs_tol is None else args.abs_tol,
            )
        if args.command == "sweep" and run.sweep is None:
            raise ConfigValidationError("sweep: the document defines no sweep.axis1")
        if args.command == "equilibria" and run.equilibria is None:
            raise ConfigValidationError("equilibria: the document defines no equilibria section")
        if args.threads < 1:
            raise ConfigValidationError("--threads must be >= 1")
    except ConfigParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigValidationError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        out_ctx = contextlib.nullcontext(sys.stdout) if args.out == "-" else open(args.out, "w", newline="")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    with out_ctx as out:
        if args.command == "pressure":
            record = run_pressure(run, q, out, args.normalized_freq)
        elif args.command == "sweep":
            record = run_sweep(run.sweep, run, q, out, args.threads, args.normalized_freq)
        else:
            record = run_equilibria(run.equilibria, run, q, out, args.threads, args.normalized_freq)
    log.info("%s: %d row(s) in %.2f s", args.command, len(record.rows), record.wall_time)
    return EXIT_CONVERGENCE if record.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
