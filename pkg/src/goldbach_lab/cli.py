"""Command-line front end: counting, verification, convergence, sampling.

Exit codes form a small contract so the verify subcommand can gate CI:
0 success, 2 usage error, 3 cache or file I/O failure, 4 violated
invariant (an identity residual above tolerance is a build bug, never a
tolerance issue).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import figures
from .errors import CacheError
from .limits import IDENTITY_TOL, LambdaGrid, asymptotic_ratios, identity_report
from .model import dist_Gn, dist_Xn, dist_Yn, dist_Zn
from .partitions import (
    PartitionTable,
    build_partition_table,
    load_partition_table,
    save_partition_table,
    zero_partition_census,
)
from .sieve import DEFAULT_SEGMENT_ODDS, LIMIT_CAPACITY, build_prime_flags
from .stats import (
    LimitCdf,
    convergence_report,
    dist_Gn_over_n,
    exact_cdf,
    sample,
    write_cdf_plot_data,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INVARIANT = 4

WORKERS_ENV = "GOLDBACH_LAB_WORKERS"

DIST_BUILDERS = {
    "Yn": dist_Yn,
    "Gn": dist_Gn,
    "Xn": dist_Xn,
    "Zn": dist_Zn,
    "Gn_over_n": dist_Gn_over_n,
}


class UsageError(ValueError):
    """Invalid command-line arguments (maps to exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved options for one command invocation."""

    command: str
    n: int | None = None
    n_list: tuple[int, ...] | None = None
    workers: int = 1
    lambda_grid: LambdaGrid | None = None
    table_cache: str | None = None
    output_format: str = "csv"
    output_path: str | None = None
    seed: int = 0
    segment_size: int = DEFAULT_SEGMENT_ODDS
    plot_data: str | None = None
    figures_dir: str | None = None
    dist: str | None = None
    draws: int | None = None

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise UsageError(f"--workers must be >= 1, got {self.workers}")
        if self.segment_size < 1:
            raise UsageError(f"--segment-size must be >= 1, got {self.segment_size}")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"--format must be csv or json, got {self.output_format!r}")
        if self.n is not None:
            if self.n <= 2:
                raise UsageError(f"--n must be > 2, got {self.n}")
            if 2 * self.n > LIMIT_CAPACITY:
                raise UsageError(f"--n {self.n} exceeds supported range")
        if self.n_list is not None:
            if len(self.n_list) < 2:
                raise UsageError("--n-list needs at least two entries")
            if any(m <= 2 for m in self.n_list):
                raise UsageError("--n-list entries must be > 2")
            if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
                raise UsageError("--n-list must be strictly increasing")
            if 2 * self.n_list[-1] > LIMIT_CAPACITY:
                raise UsageError(f"--n-list entry {self.n_list[-1]} exceeds supported range")
        if self.dist is not None and self.dist not in DIST_BUILDERS:
            known = ", ".join(sorted(DIST_BUILDERS))
            raise UsageError(f"unknown distribution {self.dist!r}; choose from {known}")
        if self.draws is not None and self.draws < 0:
            raise UsageError(f"--count must be >= 0, got {self.draws}")


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{WORKERS_ENV}={raw!r} is not an integer") from exc


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(f"{flag} expects comma-separated integers, got {text!r}") from exc


def _parse_lambda_grid(text: str) -> LambdaGrid:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--lambda-grid expects comma-separated reals, got {text!r}") from exc
    try:
        return LambdaGrid(values=np.asarray(values))
    except ValueError as exc:
        raise UsageError(f"--lambda-grid invalid: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goldbach-lab",
        description="Exact Goldbach-partition counts and their limit-law diagnostics.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker threads (default: ${WORKERS_ENV} or 1)")
    common.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_ODDS,
                        help="odd slots per sieve segment")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="report format (default csv)")
    common.add_argument("--out", default=None, metavar="PATH",
                        help="write the report here instead of standard output")
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", parents=[common],
                             help="build the partition table and report summary counts")
    p_count.add_argument("--n", type=int, required=True)
    p_count.add_argument("--table-cache", default=None, metavar="PATH",
                         help="read the table from this cache, or write it after building")
    p_count.add_argument("--figures", default=None, metavar="DIR",
                         help="also render the partition scatter figure into DIR")

    p_verify = sub.add_parser("verify", parents=[common],
                              help="check the exact product/integrated identities")
    p_verify.add_argument("--n", type=int, required=True)
    p_verify.add_argument("--lambda-grid", default="0.1,1,10", metavar="LIST",
                          help="comma-separated positive transform arguments")
    p_verify.add_argument("--table-cache", default=None, metavar="PATH")
    p_verify.add_argument("--figures", default=None, metavar="DIR",
                          help="also render the residual figure into DIR")

    p_conv = sub.add_parser("converge", parents=[common],
                            help="measure distances to the limit laws across n")
    p_conv.add_argument("--n-list", required=True, metavar="LIST",
                        help="comma-separated strictly increasing n values (>= 2 entries)")
    p_conv.add_argument("--plot-data", default=None, metavar="DIR",
                        help="write per-n CDF overlay data files into DIR")
    p_conv.add_argument("--figures", default=None, metavar="DIR",
                        help="also render CDF overlays and trend figures into DIR")

    p_sample = sub.add_parser("sample", parents=[common],
                              help="draw seeded values from a named distribution")
    p_sample.add_argument("--n", type=int, required=True)
    p_sample.add_argument("--dist", required=True,
                          help="one of " + ", ".join(sorted(DIST_BUILDERS)))
    p_sample.add_argument("--count", type=int, required=True, dest="draws")
    p_sample.add_argument("--seed", type=int, default=0)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    workers = args.workers if args.workers is not None else _default_workers()
    kwargs = {
        "command": args.command,
        "workers": workers,
        "segment_size": args.segment_size,
        "output_format": args.format,
        "output_path": args.out,
    }
    if args.command in ("count", "verify", "sample"):
        kwargs["n"] = args.n
    if args.command in ("count", "verify"):
        kwargs["table_cache"] = args.table_cache
        kwargs["figures_dir"] = args.figures
    if args.command == "verify":
        kwargs["lambda_grid"] = _parse_lambda_grid(args.lambda_grid)
    if args.command == "converge":
        kwargs["n_list"] = _parse_int_list(args.n_list, "--n-list")
        kwargs["plot_data"] = args.plot_data
        kwargs["figures_dir"] = args.figures
    if args.command == "sample":
        kwargs["dist"] = args.dist
        kwargs["draws"] = args.draws
        kwargs["seed"] = args.seed
    return RunConfig(**kwargs)


def _atomic_write(path: str, write_fn) -> None:
    """Run ``write_fn`` against a sibling temp path, then rename into place."""
    tmp = f"{path}.part{os.getpid()}"
    try:
        write_fn(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(config: RunConfig, write_csv, write_json) -> None:
    """Send one report to --out (atomically) or standard output."""
    write_fn = write_csv if config.output_format == "csv" else write_json
    if config.output_path is not None:
        _atomic_write(config.output_path, write_fn)
        return
    with tempfile.TemporaryDirectory() as tmpdir:
        tmp = os.path.join(tmpdir, "report")
        write_fn(tmp)
        with open(tmp) as fh:
            sys.stdout.write(fh.read())


def _write_text(text: str):
    def write_fn(path: str) -> None:
        with open(path, "w") as fh:
            fh.write(text)
    return write_fn


def _csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _single_table(config: RunConfig) -> PartitionTable:
    """Build the table for config.n, honouring the cache path if given."""
    if config.table_cache is not None and os.path.exists(config.table_cache):
        table = load_partition_table(config.table_cache)
        if table.n != config.n:
            raise CacheError(
                f"{config.table_cache}: cache holds n={table.n}, requested n={config.n}"
            )
        return table
    flags = build_prime_flags(2 * config.n, config.segment_size)
    table = build_partition_table(flags, config.n, config.workers)
    if config.table_cache is not None:
        _atomic_write(config.table_cache, lambda p: save_partition_table(table, p))
    return table


def cmd_count(config: RunConfig) -> int:
    table = _single_table(config)
    zero_count = len(zero_partition_census(table))
    header = ["n", "total", "q_min", "q_max", "zero_count"]
    row = [table.n, table.total, int(table.q.min()), int(table.q.max()), zero_count]
    _emit(
        config,
        _write_text(_csv_text(header, [row])),
        _write_text(_json_text(dict(zip(header, row)))),
    )
    if config.figures_dir is not None:
        os.makedirs(config.figures_dir, exist_ok=True)
        figures.render_partition_scatter(
            table, os.path.join(config.figures_dir, f"partition_scatter_n{table.n}.png")
        )
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    table = _single_table(config)
    report = identity_report(table, config.lambda_grid)
    _emit(config, report.to_csv, report.to_json)
    if config.figures_dir is not None:
        os.makedirs(config.figures_dir, exist_ok=True)
        figures.render_identity_residuals(
            report, os.path.join(config.figures_dir, f"identity_residuals_n{table.n}.png")
        )
    if report.max_rel_residual >= IDENTITY_TOL:
        print(
            f"identity violation: max rel residual {report.max_rel_residual:.3e}"
            f" >= {IDENTITY_TOL:.0e}",
            file=sys.stderr,
        )
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_converge(config: RunConfig) -> int:
    n_max = config.n_list[-1]
    flags = build_prime_flags(2 * n_max, config.segment_size)
    tables = [build_partition_table(flags, n, config.workers) for n in config.n_list]
    report = convergence_report(tables)
    ratios = asymptotic_ratios(tables)

    header = [
        "n", "ks_zn_vs_uniform", "ks_gn_vs_maxunif",
        "moment_gap_r1", "moment_gap_r2", "moment_gap_r3", "zero_count",
        "total", "total_ratio", "mean_ratio", "e_zn",
    ]
    rows = []
    docs = []
    for conv, ratio in zip(report.rows, ratios):
        row = [
            conv.n, repr(conv.ks_zn_vs_uniform), repr(conv.ks_gn_vs_maxunif),
            repr(conv.moment_gap_r1), repr(conv.moment_gap_r2), repr(conv.moment_gap_r3),
            conv.zero_count, ratio.total, repr(ratio.total_ratio),
            repr(ratio.mean_ratio), repr(ratio.e_zn),
        ]
        rows.append(row)
        docs.append({
            "n": conv.n,
            "ks_zn_vs_uniform": conv.ks_zn_vs_uniform,
            "ks_gn_vs_maxunif": conv.ks_gn_vs_maxunif,
            "moment_gap_r1": conv.moment_gap_r1,
            "moment_gap_r2": conv.moment_gap_r2,
            "moment_gap_r3": conv.moment_gap_r3,
            "zero_count": conv.zero_count,
            "total": ratio.total,
            "total_ratio": ratio.total_ratio,
            "mean_ratio": ratio.mean_ratio,
            "e_zn": ratio.e_zn,
        })
    _emit(config, _write_text(_csv_text(header, rows)), _write_text(_json_text(docs)))

    overlays = []
    for table in tables:
        zn_cdf = exact_cdf(dist_Zn(table))
        g_cdf = exact_cdf(dist_Gn_over_n(table))
        overlays.append((table.n, zn_cdf, g_cdf))
    if config.plot_data is not None:
        os.makedirs(config.plot_data, exist_ok=True)
        for n, zn_cdf, g_cdf in overlays:
            _atomic_write(
                os.path.join(config.plot_data, f"cdf_Zn_n{n}.csv"),
                lambda p, c=zn_cdf: write_cdf_plot_data(c, LimitCdf.UNIFORM01, p),
            )
            _atomic_write(
                os.path.join(config.plot_data, f"cdf_Gn_over_n_n{n}.csv"),
                lambda p, c=g_cdf: write_cdf_plot_data(c, LimitCdf.MAX_OF_TWO_UNIFORMS, p),
            )
    if config.figures_dir is not None:
        os.makedirs(config.figures_dir, exist_ok=True)
        for n, zn_cdf, g_cdf in overlays:
            figures.render_cdf_overlay(
                zn_cdf, LimitCdf.UNIFORM01, f"Zn vs uniform, n={n}",
                os.path.join(config.figures_dir, f"cdf_Zn_n{n}.png"),
            )
            figures.render_cdf_overlay(
                g_cdf, LimitCdf.MAX_OF_TWO_UNIFORMS, f"Gn/n vs max-of-two, n={n}",
                os.path.join(config.figures_dir, f"cdf_Gn_over_n_n{n}.png"),
            )
        figures.render_convergence_trends(
            report, os.path.join(config.figures_dir, "convergence_trends.png")
        )
        figures.render_ratio_trends(
            ratios, os.path.join(config.figures_dir, "ratio_trends.png")
        )
    return EXIT_OK


def cmd_sample(config: RunConfig) -> int:
    flags = build_prime_flags(2 * config.n, config.segment_size)
    table = build_partition_table(flags, config.n, config.workers)
    dist = DIST_BUILDERS[config.dist](table)
    values = sample(dist, config.seed, config.draws)
    rows = [[repr(float(v))] for v in values]
    _emit(
        config,
        _write_text(_csv_text(["value"], rows)),
        _write_text(_json_text([float(v) for v in values])),
    )
    return EXIT_OK


_COMMANDS = {
    "count": cmd_count,
    "verify": cmd_verify,
    "converge": cmd_converge,
    "sample": cmd_sample,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        config = _config_from_args(args)
        return _COMMANDS[config.command](config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, IndexError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


def entry() -> None:
    sys.exit(main(sys.argv[1:]))
