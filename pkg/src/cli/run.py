"""CLI command for running a sweep experiment."""

import logging
import os
from pathlib import Path
from typing import Annotated

import typer
from pydantic import ValidationError
from rich.console import Console

from config.experiment import load_experiment_config
from config.settings import get_settings
from src.evaluation.experiment_runner import format_aggregate_table, run_experiment
from src.models.enums import ExperimentMode, Objective, SweepAxis
from src.models.errors import QosInfeasibleError, SingularPrecoderError, SolverError

logger = logging.getLogger(__name__)

console = Console()

EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_OUTPUT = 3


def _writable_dir(path: Path) -> bool:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError:
        return False
    return os.access(path, os.W_OK)


def run(
    config: Annotated[
        Path,
        typer.Option("--config", "-c", help="Experiment config file (HYBRIDFH_<FIELD>=value lines)"),
    ],
    seed: Annotated[int | None, typer.Option("--seed", help="Root seed")] = None,
    drops: Annotated[int | None, typer.Option("--drops", help="Number of drops per sweep point")] = None,
    out: Annotated[Path | None, typer.Option("--out", help="Output directory for the CSVs")] = None,
    mode: Annotated[
        ExperimentMode | None,
        typer.Option("--mode", help="capacity_limited drops unservable users; serve_all_K serves everyone"),
    ] = None,
    sweep: Annotated[SweepAxis | None, typer.Option("--sweep", help="Sweep axis: fh or L")] = None,
    objective: Annotated[Objective | None, typer.Option("--objective", help="SCA objective")] = None,
    fig3_kmax_compat: Annotated[
        bool,
        typer.Option("--fig3-kmax-compat", help="Swapped-rate K_max^c formula in serve_all_K mode"),
    ] = False,
    full_opa_sweep: Annotated[
        bool,
        typer.Option("--full-opa-sweep", help="Optimize power for every sweep candidate"),
    ] = False,
    trace_dir: Annotated[
        Path | None,
        typer.Option("--trace-dir", help="Write one SCA trace CSV per solve into this directory"),
    ] = None,
    workers: Annotated[
        int | None,
        typer.Option("--workers", help="Worker processes (default: HYBRIDFH_WORKERS)"),
    ] = None,
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Enable verbose logging"),
    ] = False,
):
    """Run a sweep experiment and write per-drop and aggregate CSVs."""
    if verbose:
        logging.basicConfig(level=logging.INFO)
    else:
        logging.basicConfig(level=logging.WARNING)

    try:
        experiment = load_experiment_config(
            config,
            seed=seed,
            n_drops=drops,
            output_dir=str(out) if out is not None else None,
            mode=mode,
            sweep=sweep,
            objective=objective,
            fig3_kmax_compat=fig3_kmax_compat or None,
            full_opa_sweep=full_opa_sweep or None,
        )
    except FileNotFoundError as exc:
        console.print(f"[bold red]{exc}[/bold red]")
        raise typer.Exit(EXIT_CONFIG)
    except (ValidationError, ValueError) as exc:
        console.print(f"[bold red]Invalid config {config}:[/bold red]\n{exc}")
        raise typer.Exit(EXIT_CONFIG)

    settings = get_settings()
    if workers is not None:
        settings = settings.model_copy(update={"hybridfh_workers": workers})

    out_dir = experiment.results_dir(settings)
    if not _writable_dir(out_dir) or (trace_dir is not None and not _writable_dir(trace_dir)):
        console.print(f"[bold red]Output directory is not writable: {out_dir}[/bold red]")
        raise typer.Exit(EXIT_OUTPUT)

    console.print(f"[bold]hybridfh run: {experiment.name}[/bold]")
    console.print(
        f"M={experiment.num_aps} K={experiment.num_users} L={experiment.num_antennas} "
        f"sweep={experiment.sweep.value} points={experiment.sweep_points()} drops={experiment.n_drops} "
        f"mode={experiment.mode.value}"
    )

    try:
        result = run_experiment(experiment, settings=settings, trace_dir=trace_dir, console=console)
    except OSError as exc:
        console.print(f"[bold red]Cannot write results: {exc}[/bold red]")
        raise typer.Exit(EXIT_OUTPUT)
    except (SolverError, QosInfeasibleError, SingularPrecoderError) as exc:
        logger.error("Experiment failed: %s", exc)
        console.print(f"[bold red]Experiment failed: {exc}[/bold red]")
        raise typer.Exit(EXIT_FAILURE)

    format_aggregate_table(result.aggregate, experiment.sweep, console)
    for path in result.files:
        console.print(f"Wrote {path}")
