"""CLI command for checking the closed-form SINRs of one drop against Monte Carlo."""

import logging
from pathlib import Path
from typing import Annotated

import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from config.experiment import load_experiment_config
from config.settings import get_settings
from src.evaluation.oracle import DEFAULT_ORACLE_DRAWS, oracle_statistics
from src.grouping.sweep import select_scheme
from src.models.enums import AllocMode, GroupingMethod, Scheme
from src.models.errors import NoFeasibleGroupingError, QosInfeasibleError, SingularPrecoderError, SolverError
from src.network.channel import channel_stats
from src.network.scenario import generate_drop
from src.network.seeding import child_seed
from src.precoding.mu import MuEstimator

console = Console()

# relative SINR error accepted at the default draw count
DEFAULT_TOLERANCE = 0.05


def verify(
    config: Annotated[
        Path | None,
        typer.Option("--config", "-c", help="Experiment config file (defaults when omitted)"),
    ] = None,
    scheme: Annotated[Scheme, typer.Option("--scheme", help="Scheme to verify")] = Scheme.HYBRID,
    method: Annotated[GroupingMethod, typer.Option("--method", help="Grouping method")] = GroupingMethod.KMEANS,
    alloc: Annotated[AllocMode, typer.Option("--alloc", help="Power allocation")] = AllocMode.EPA,
    sweep_value: Annotated[
        float | None,
        typer.Option("--at", help="Sweep point (Gbps or L); first point of the config by default"),
    ] = None,
    drop_id: Annotated[int, typer.Option("--drop", help="Drop id")] = 0,
    draws: Annotated[int, typer.Option("--draws", help="Monte Carlo channel draws")] = DEFAULT_ORACLE_DRAWS,
    tolerance: Annotated[
        float,
        typer.Option("--tolerance", help="Largest accepted relative SINR error"),
    ] = DEFAULT_TOLERANCE,
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Enable verbose logging"),
    ] = False,
):
    """Compare closed-form and Monte Carlo SINRs and per-AP powers on one drop."""
    if verbose:
        logging.basicConfig(level=logging.INFO)
    else:
        logging.basicConfig(level=logging.WARNING)

    try:
        experiment = load_experiment_config(config)
    except FileNotFoundError as exc:
        console.print(f"[bold red]{exc}[/bold red]")
        raise typer.Exit(2)
    except (ValidationError, ValueError) as exc:
        console.print(f"[bold red]Invalid config:[/bold red]\n{exc}")
        raise typer.Exit(2)

    settings = get_settings()
    value = sweep_value if sweep_value is not None else experiment.sweep_points()[0]
    params, fp = experiment.point_params(value)
    seed = child_seed(experiment.seed, drop_id)
    stats = channel_stats(generate_drop(params, seed, shadow_std_db=experiment.shadow_std_db))
    mu_provider = MuEstimator(
        stats,
        params.num_antennas,
        n_draws=experiment.n_mu_draws,
        seed=seed,
        batch_size=settings.hybridfh_mu_batch,
        cond_limit=settings.hybridfh_cond_limit,
    )

    try:
        with console.status(f"Selecting {scheme.value} grouping..."):
            selected = select_scheme(
                scheme, stats, mu_provider, fp, params, method, alloc,
                mode=experiment.mode,
                fig3_kmax_compat=experiment.fig3_kmax_compat,
                objective=experiment.objective,
                seed=seed,
                settings=settings,
            )
        if selected is None or not selected.grouping.served:
            console.print(f"[yellow]{scheme.value} serves no users at {value:g}[/yellow]")
            raise typer.Exit(1)
        with console.status(f"Running {draws} Monte Carlo draws..."):
            oracle = oracle_statistics(
                stats, selected.grouping, selected.alloc, params.num_antennas,
                n_draws=draws,
                seed=seed,
                batch_size=settings.hybridfh_mu_batch,
                cond_limit=settings.hybridfh_cond_limit,
            )
    except (NoFeasibleGroupingError, SolverError, QosInfeasibleError, SingularPrecoderError) as exc:
        console.print(f"[bold red]Verification failed: {exc}[/bold red]")
        raise typer.Exit(1)

    grouping = selected.grouping
    closed = selected.report.sinr
    rel = np.abs(oracle.sinr - closed) / np.maximum(closed, 1e-12)

    table = Table(title=f"{scheme.value} K_c={grouping.k_c} K_d={grouping.k_d}, {oracle.n_draws} draws")
    table.add_column("User", style="bold")
    table.add_column("Group")
    table.add_column("SINR closed form", justify="right")
    table.add_column("SINR Monte Carlo", justify="right")
    table.add_column("Rel. error", justify="right")
    for i, user in enumerate(grouping.served):
        group = "C" if i < grouping.k_c else "D"
        style = "red" if rel[i] > tolerance else None
        table.add_row(str(user), group, f"{closed[i]:.4g}", f"{oracle.sinr[i]:.4g}", f"{rel[i]:.2%}", style=style)
    console.print(table)

    budget = params.rho
    over = oracle.ap_power > budget * (1 + tolerance)
    console.print(
        f"Per-AP power: max {oracle.ap_power.max():.4g} W of {budget:g} W "
        f"({int(over.sum())} AP(s) over budget)"
    )

    if np.any(rel > tolerance) or np.any(over):
        console.print(f"[bold red]FAIL[/bold red]: max relative SINR error {rel.max():.2%}")
        raise typer.Exit(1)
    console.print(f"[bold green]OK[/bold green]: max relative SINR error {rel.max():.2%}")
