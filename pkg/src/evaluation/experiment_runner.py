"""Experiment runner: sweep points x drops x schemes.

Each (sweep point, drop) task is independent and seeded from the root seed and
the drop id only, so results do not depend on the worker count. Rows are sorted
before they are written.
"""

import csv
import logging
import math
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from rich.console import Console
from rich.progress import Progress
from rich.table import Table

from config.experiment import ExperimentConfig
from config.settings import Settings, get_settings
from src.evaluation.oracle import oracle_statistics
from src.evaluation.spectral_efficiency import spectral_efficiency
from src.grouping.sweep import select_scheme
from src.models.enums import SweepAxis
from src.models.errors import NoFeasibleGroupingError
from src.models.experiment import AggregateRow, DropResult, OracleRow, SchemeSpec
from src.network.channel import channel_stats
from src.network.scenario import generate_drop
from src.network.seeding import child_seed
from src.precoding.mu import MuEstimator

logger = logging.getLogger(__name__)

DROPS_CSV = "drops.csv"
AGGREGATE_CSV = "aggregate.csv"
ORACLE_CSV = "oracle.csv"


@dataclass
class ExperimentResult:
    """Rows of one run plus the files they were written to."""

    drops: list[DropResult]
    aggregate: list[AggregateRow]
    oracle: list[OracleRow] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)


def _trace_path(trace_dir: Path | None, sweep_value: float, drop_id: int, spec: SchemeSpec) -> Path | None:
    if trace_dir is None:
        return None
    return trace_dir / f"trace_{sweep_value:g}_{drop_id}_{spec.label}.csv"


def run_drop(
    config: ExperimentConfig,
    sweep_value: float,
    drop_id: int,
    settings: Settings | None = None,
    trace_dir: Path | None = None,
) -> tuple[list[DropResult], list[OracleRow]]:
    """Evaluate every scheme of the config on one drop at one sweep point."""
    settings = settings or get_settings()
    params, fp = config.point_params(sweep_value)
    seed = child_seed(config.seed, drop_id)
    scenario = generate_drop(params, seed, shadow_std_db=config.shadow_std_db)
    stats = channel_stats(scenario)
    mu_provider = MuEstimator(
        stats,
        params.num_antennas,
        n_draws=config.n_mu_draws,
        seed=seed,
        batch_size=settings.hybridfh_mu_batch,
        cond_limit=settings.hybridfh_cond_limit,
    )

    rows: list[DropResult] = []
    oracle_rows: list[OracleRow] = []
    for spec in config.scheme_specs():
        start = time.perf_counter()
        try:
            selected = select_scheme(
                spec.scheme, stats, mu_provider, fp, params, spec.method, spec.alloc,
                mode=config.mode,
                full_opa_sweep=config.full_opa_sweep,
                fig3_kmax_compat=config.fig3_kmax_compat,
                objective=config.objective,
                seed=seed,
                settings=settings,
                trace_path=_trace_path(trace_dir, sweep_value, drop_id, spec),
            )
        except NoFeasibleGroupingError as exc:
            logger.warning("Drop %d, %s at %g: %s", drop_id, spec.label, sweep_value, exc)
            continue
        if selected is None:
            continue
        elapsed_ms = (time.perf_counter() - start) * 1e3 if config.record_timing else 0.0

        report = selected.report
        if report.solver_failed:
            logger.warning("Drop %d, %s at %g: solver failed, kept an earlier allocation",
                           drop_id, spec.label, sweep_value)
        rows.append(DropResult(
            sweep_value=sweep_value,
            drop_id=drop_id,
            scheme=spec.scheme.value,
            grouping_method=spec.method.value,
            alloc=spec.alloc.value,
            K_c=selected.grouping.k_c,
            K_d=selected.grouping.k_d,
            sum_se=report.sum_se,
            min_user_se=report.min_user_se,
            feasible=report.feasible,
            fh_used_max_ap=float(np.max(report.fh_used, initial=0.0)),
            sca_iters=selected.sca_iters,
            wall_time_ms=elapsed_ms,
        ))

        if config.n_oracle_draws and selected.grouping.served:
            oracle = oracle_statistics(
                stats, selected.grouping, selected.alloc, params.num_antennas,
                n_draws=config.n_oracle_draws,
                seed=seed,
                batch_size=settings.hybridfh_mu_batch,
                cond_limit=settings.hybridfh_cond_limit,
            )
            rel = np.abs(oracle.sinr - report.sinr) / np.maximum(report.sinr, 1e-12)
            oracle_rows.append(OracleRow(
                sweep_value=sweep_value,
                drop_id=drop_id,
                scheme=spec.scheme.value,
                grouping_method=spec.method.value,
                alloc=spec.alloc.value,
                sum_se=report.sum_se,
                oracle_sum_se=float(np.sum(spectral_efficiency(oracle.sinr, params.prelog))),
                max_rel_sinr_error=float(np.max(rel)),
            ))

    logger.info("Drop %d at sweep value %g: %d scheme rows", drop_id, sweep_value, len(rows))
    return rows, oracle_rows


def _run_task(args) -> tuple[list[DropResult], list[OracleRow]]:
    config, sweep_value, drop_id, settings, trace_dir = args
    return run_drop(config, sweep_value, drop_id, settings, trace_dir)


def aggregate(drops: list[DropResult]) -> list[AggregateRow]:
    """Mean sum SE per (sweep point, scheme, method, alloc), in first-seen order."""
    groups: dict[tuple, list[DropResult]] = defaultdict(list)
    for row in drops:
        groups[(row.sweep_value, row.scheme, row.grouping_method, row.alloc)].append(row)

    out = []
    for (sweep_value, scheme, method, alloc), rows in groups.items():
        n = len(rows)
        out.append(AggregateRow(
            sweep_value=sweep_value,
            scheme=scheme,
            grouping_method=method,
            alloc=alloc,
            n_drops=n,
            mean_sum_se=math.fsum(r.sum_se for r in rows) / n,
            mean_min_user_se=math.fsum(r.min_user_se for r in rows) / n,
            feasible_fraction=sum(r.feasible for r in rows) / n,
        ))
    return out


def _format_value(value):
    if isinstance(value, float):
        return repr(value)
    return value


def write_csv(path: Path, columns: list[str], rows: list) -> Path:
    """Write dataclass rows with full float precision."""
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _format_value(v) for k, v in row.to_row().items()})
    return path


def _sort_key(spec_order: dict[tuple, int]):
    def key(row):
        return (row.sweep_value, row.drop_id, spec_order[(row.scheme, row.grouping_method, row.alloc)])
    return key


def run_experiment(
    config: ExperimentConfig,
    settings: Settings | None = None,
    trace_dir: Path | None = None,
    console: Console | None = None,
) -> ExperimentResult:
    """Run the whole sweep and write drops.csv, aggregate.csv (and oracle.csv).

    Args:
        config: Experiment definition.
        settings: Runtime settings; ``hybridfh_workers`` > 1 uses a process pool.
        trace_dir: Directory for per-solve SCA trace CSVs.
        console: Rich console for a progress bar.

    Raises:
        OSError: The output directory cannot be created or written.
    """
    settings = settings or get_settings()
    out_dir = config.results_dir(settings)
    out_dir.mkdir(parents=True, exist_ok=True)
    if trace_dir is not None:
        trace_dir.mkdir(parents=True, exist_ok=True)

    tasks = [
        (config, value, drop_id, settings, trace_dir)
        for value in config.sweep_points()
        for drop_id in range(config.n_drops)
    ]
    logger.info(
        "Experiment %s: %d sweep points x %d drops, %d worker(s)",
        config.name, len(config.sweep_points()), config.n_drops, settings.hybridfh_workers,
    )

    results = []
    with Progress(console=console, disable=console is None) as progress:
        bar = progress.add_task(f"[cyan]{config.name}", total=len(tasks))
        if settings.hybridfh_workers > 1:
            with ProcessPoolExecutor(max_workers=settings.hybridfh_workers) as pool:
                for result in pool.map(_run_task, tasks):
                    results.append(result)
                    progress.advance(bar)
        else:
            for task in tasks:
                results.append(_run_task(task))
                progress.advance(bar)

    spec_order = {(s.scheme.value, s.method.value, s.alloc.value): i for i, s in enumerate(config.scheme_specs())}
    drops = sorted((row for rows, _ in results for row in rows), key=_sort_key(spec_order))
    oracle = sorted((row for _, rows in results for row in rows), key=_sort_key(spec_order))
    agg = aggregate(drops)

    files = [
        write_csv(out_dir / DROPS_CSV, DropResult.columns(), drops),
        write_csv(out_dir / AGGREGATE_CSV, AggregateRow.columns(), agg),
    ]
    if config.n_oracle_draws:
        files.append(write_csv(out_dir / ORACLE_CSV, OracleRow.columns(), oracle))
    return ExperimentResult(drops=drops, aggregate=agg, oracle=oracle, files=files)


def format_aggregate_table(rows: list[AggregateRow], sweep: SweepAxis, console: Console) -> None:
    """Print mean sum SE per scheme (columns) and sweep point (rows)."""
    labels = list(dict.fromkeys(f"{r.scheme}-{r.alloc}-{r.grouping_method}" for r in rows))
    points = list(dict.fromkeys(r.sweep_value for r in rows))
    lookup = {(r.sweep_value, f"{r.scheme}-{r.alloc}-{r.grouping_method}"): r for r in rows}

    table = Table(title="Mean sum SE (bit/s/Hz)")
    table.add_column("FH_max (Gbps)" if SweepAxis(sweep) == SweepAxis.FH else "L", style="bold")
    for label in labels:
        table.add_column(label, justify="right")
    for point in points:
        cells = []
        for label in labels:
            row = lookup.get((point, label))
            cells.append(f"{row.mean_sum_se:.3f}" if row else "-")
        table.add_row("noFH" if math.isinf(point) else f"{point:g}", *cells)
    console.print(table)
