"""CLI command for the precoding complexity and fronthaul accounting table."""

import logging
import math
from pathlib import Path
from typing import Annotated

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from config.experiment import load_experiment_config
from src.evaluation.complexity import complexity_report
from src.evaluation.experiment_runner import write_csv
from src.models.enums import SweepAxis
from src.models.experiment import ComplexityRow

console = Console()


def complexity(
    config: Annotated[
        Path | None,
        typer.Option("--config", "-c", help="Experiment config file (defaults when omitted)"),
    ] = None,
    k_c: Annotated[
        int | None,
        typer.Option("--k-c", help="Hybrid centralized group size (default: fronthaul maximum)"),
    ] = None,
    out: Annotated[
        Path | None,
        typer.Option("--out", help="Also write the table to this CSV file"),
    ] = None,
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Enable verbose logging"),
    ] = False,
):
    """Print precoding complexity and fronthaul load of each scheme per sweep point."""
    if verbose:
        logging.basicConfig(level=logging.INFO)
    else:
        logging.basicConfig(level=logging.WARNING)

    try:
        experiment = load_experiment_config(config)
        rows = complexity_report(experiment, k_c=k_c)
    except FileNotFoundError as exc:
        console.print(f"[bold red]{exc}[/bold red]")
        raise typer.Exit(2)
    except (ValidationError, ValueError) as exc:
        console.print(f"[bold red]Invalid config:[/bold red]\n{exc}")
        raise typer.Exit(2)

    axis = "FH_max (Gbps)" if experiment.sweep == SweepAxis.FH else "L"
    table = Table(title=f"Precoding complexity, M={experiment.num_aps} K={experiment.num_users}")
    table.add_column(axis, style="bold")
    table.add_column("Scheme")
    table.add_column("K_c", justify="right")
    table.add_column("K_d", justify="right")
    table.add_column("Complexity")
    table.add_column("Operations", justify="right")
    table.add_column("FH_pr (Gbps)", justify="right")
    table.add_column("FH_data (Gbps)", justify="right")
    for row in rows:
        table.add_row(
            "noFH" if math.isinf(row.sweep_value) else f"{row.sweep_value:g}",
            row.scheme,
            str(row.k_c),
            str(row.k_d),
            row.complexity,
            f"{row.operations:,}",
            f"{row.fh_pr / 1e9:.3f}",
            f"{row.fh_data / 1e9:.3f}",
        )
    console.print(table)

    if out is not None:
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            write_csv(out, ComplexityRow.columns(), rows)
        except OSError as exc:
            console.print(f"[bold red]Cannot write {out}: {exc}[/bold red]")
            raise typer.Exit(3)
        console.print(f"Wrote {out}")
