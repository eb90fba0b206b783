"""hybridfh CLI entry point."""

import typer

from src.cli.complexity import complexity
from src.cli.run import run
from src.cli.verify import verify

app = typer.Typer(
    name="hybridfh",
    help="Hybrid centralized/distributed ZF for fronthaul-limited cell-free massive MIMO: sweeps, verification and fronthaul accounting.",
)

app.command(name="run")(run)
app.command(name="verify")(verify)
app.command(name="complexity")(complexity)


if __name__ == "__main__":
    app()
