"""Allow running hybridfh as `python -m src.cli`."""

from src.cli.main import app

app()
