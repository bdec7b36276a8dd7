"""Command-line front end: ``pgl1d census | verify | export``."""

from __future__ import annotations

import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import click

from .cache import ENV_VAR, cache_path, load_or_none, write_partition
from .census import (
    MAX_EXHAUSTIVE_K,
    CensusReport,
    FastModeInconclusive,
    InvariantError,
    fast_census,
    full_partition,
    report_from_partition,
)
from .quotient import InfeasibleError, QuotientContext
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3
MIN_K = 4

FIELDS = ["k", "r_param", "order_log2", "num_classes", "num_real_classes", "real_by_layer",
          "order4_real_count", "mode", "lift_polynomial", "timings", "involution_classes", "precision"]


@dataclass(frozen=True)
class RunConfig:
    command: str
    ks: tuple[int, ...]
    r_param: int = 1
    mode: str = "exhaustive"
    workers: int = 1
    fmt: str = "json"
    cache_dir: Path | None = None
    seed: int = 0

    def validate(self):
        if not self.ks:
            raise click.UsageError("empty k range")
        if min(self.ks) < MIN_K:
            raise click.UsageError(f"k must be at least {MIN_K}")
        if self.mode == "exhaustive" and max(self.ks) > MAX_EXHAUSTIVE_K:
            raise click.UsageError(f"exhaustive mode supports k <= {MAX_EXHAUSTIVE_K}; use --mode fast")
        if self.mode == "fast" and min(self.ks) < 8:
            raise click.UsageError("fast mode needs k >= 8")
        if self.workers < 1:
            raise click.UsageError("--workers must be positive")


def parse_k(value: str) -> tuple[int, ...]:
    """``"7"`` or ``"7..10"`` (inclusive)."""
    try:
        if ".." in value:
            lo, hi = (int(v) for v in value.split("..", 1))
            return tuple(range(lo, hi + 1))
        return (int(value),)
    except ValueError:
        raise click.BadParameter(f"expected an integer or a range like 7..10, got {value!r}") from None


def ordered(report: CensusReport) -> dict:
    d = report.to_dict()
    return {key: d[key] for key in FIELDS}


def format_reports(reports: list[CensusReport], fmt: str) -> str:
    if fmt == "json":
        return "\n".join(json.dumps(ordered(r)) for r in reports)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(FIELDS)
        for r in reports:
            row = ordered(r)
            writer.writerow([json.dumps(v) if isinstance(v, (dict, list)) else ("" if v is None else v)
                             for v in row.values()])
        return buf.getvalue().rstrip("\n")
    lines = []
    for r in reports:
        layers = " ".join(f"{layer}:{n}" for layer, n in r.real_by_layer.items())
        total = sum(r.timings.values())
        lines.append(f"U1/U{r.k} r={r.r_param} |G|=2^{r.order_log2} k(G)={r.num_classes} "
                     f"r(G)={r.num_real_classes} [{layers}] involution classes={r.involution_classes} "
                     f"real order-4={r.order4_real_count} ({r.mode}, {total:.2f}s)")
    return "\n".join(lines)


def census_one(k: int, cfg: RunConfig) -> CensusReport:
    ctx = QuotientContext(k, cfg.r_param)
    if cfg.mode == "fast":
        return fast_census(ctx, cfg.workers)
    t0 = time.perf_counter()
    part = load_or_none(cfg.cache_dir, ctx)
    if part is not None:
        return report_from_partition(ctx, part, {"cache_load": time.perf_counter() - t0})
    part = full_partition(ctx, cfg.workers)
    timings = {"partition": time.perf_counter() - t0}
    if cfg.cache_dir is not None:
        write_partition(cache_path(cfg.cache_dir, ctx), ctx, part)
    return report_from_partition(ctx, part, timings)


def _fail(code: int, message: str):
    click.echo(message, err=True)
    sys.exit(code)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool):
    """Conjugacy and real-class censuses of U1/Uk in PGL1(D), D of degree 3 over Q2."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


_common = [
    click.option("--k", "k_spec", required=True, help="Depth k or inclusive range like 7..10."),
    click.option("--r-param", type=click.IntRange(1, 2), default=1, show_default=True),
    click.option("--workers", type=int, default=1, show_default=True),
    click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), envvar=ENV_VAR,
                 help=f"Partition cache directory (default ${ENV_VAR})."),
]


def common(f):
    for opt in reversed(_common):
        f = opt(f)
    return f


@main.command()
@common
@click.option("--mode", type=click.Choice(["exhaustive", "fast"]), default="exhaustive", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def census(k_spec, r_param, workers, cache_dir, mode, fmt, seed):
    """Partition U1/Uk into conjugacy classes and count the real ones."""
    cfg = RunConfig("census", parse_k(k_spec), r_param, mode, workers, fmt, cache_dir, seed)
    cfg.validate()
    reports = []
    try:
        for k in sorted(cfg.ks):
            reports.append(census_one(k, cfg))
    except InfeasibleError as exc:
        if reports:
            click.echo(format_reports(reports, fmt))
        _fail(EXIT_INFEASIBLE, f"infeasible: {exc}")
    except (InvariantError, FastModeInconclusive) as exc:
        if reports:
            click.echo(format_reports(reports, fmt))
        _fail(EXIT_INVARIANT, f"invariant failure: {exc}")
    click.echo(format_reports(reports, fmt))


@main.command()
@click.option("--suite", type=click.Choice(list(SUITES)), required=True)
@click.option("--r-param", type=click.IntRange(1, 2), default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def verify(suite, r_param, seed):
    """Run a verification suite; exit 0 iff every check passes."""
    try:
        checks = run_suite(suite, seed=seed, r_param=r_param)
    except InfeasibleError as exc:
        _fail(EXIT_INFEASIBLE, f"infeasible: {exc}")
    for c in checks:
        click.echo(c.line())
    failed = sum(not c.passed for c in checks)
    click.echo(f"{suite}: {len(checks) - failed}/{len(checks)} passed")
    if failed:
        sys.exit(EXIT_INVARIANT)


@main.command()
@common
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path),
              help="Output file (default: the cache file under --cache-dir).")
def export(k_spec, r_param, workers, cache_dir, out):
    """Write the full-group class partition to a cache file."""
    cfg = RunConfig("export", parse_k(k_spec), r_param, "exhaustive", workers, "json", cache_dir)
    cfg.validate()
    if out is not None and len(cfg.ks) > 1:
        raise click.UsageError("--out takes a single k")
    if out is None and cache_dir is None:
        raise click.UsageError(f"give --out or --cache-dir (or set ${ENV_VAR})")
    for k in sorted(cfg.ks):
        ctx = QuotientContext(k, r_param)
        part = full_partition(ctx, workers)
        path = write_partition(out or cache_path(cache_dir, ctx), ctx, part)
        click.echo(str(path))


if __name__ == "__main__":
    main()
