"""Utility functions for CLI commands."""

from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Literal

import typer
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn
from rich.table import Table

from ..core.config import Config, ExperimentConfig, load_experiment
from ..core.exceptions import ConfigurationError, InnoviterbiError
from ..core.models import TableDocument

console = Console()
err_console = Console(stderr=True)


@contextmanager
def exit_on_error() -> Iterator[None]:
    """Turn workbench errors into a red message and the error's exit code."""
    try:
        yield
    except InnoviterbiError as e:
        err_console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(e.exit_code) from e


def split_floats(value: str | None) -> list[float] | None:
    if value is None:
        return None
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError as e:
        raise typer.BadParameter(f"expected comma-separated numbers, got {value!r}") from e


def split_ints(value: str | None) -> list[int] | None:
    if value is None:
        return None
    try:
        return [int(item) for item in value.split(",") if item.strip()]
    except ValueError as e:
        raise typer.BadParameter(f"expected comma-separated integers, got {value!r}") from e


def parse_quantize(value: str) -> tuple[Literal[0, 8], float | None]:
    """Parse 0 (no quantizer), 8, or 8:<step> into levels and step."""
    levels, _, step = value.partition(":")
    if levels.strip() not in ("0", "8"):
        raise ConfigurationError(f"--quantize takes 0, 8 or 8:<step>, got {value!r}")
    if levels.strip() == "0":
        if step:
            raise ConfigurationError("a disabled quantizer takes no step")
        return 0, None
    if not step:
        return 8, None
    try:
        delta = float(step)
    except ValueError as e:
        raise ConfigurationError(f"quantizer step must be a number, got {step!r}") from e
    if delta <= 0:
        raise ConfigurationError(f"quantizer step must be positive, got {delta}")
    return 8, delta


def experiment(config_file: Path | None, **overrides: Any) -> ExperimentConfig:
    """Stored defaults, then the experiment file, then explicit CLI options."""
    values = load_experiment(config_file) if config_file else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_workbench(Config().config, **values)


def progress_bar() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        console=err_console,
        transient=True,
    )


def emit(text: str, output: Path | None) -> None:
    """Print to stdout, or write to output and report the path."""
    if output is None:
        typer.echo(text, nl=not text.endswith("\n"))
        return
    try:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text, encoding="utf-8")
    except OSError as e:
        err_console.print(f"[red]Error: cannot write {output}: {e}[/red]")
        raise typer.Exit(1) from e
    err_console.print(f"✅ Wrote {output}")


def emit_document(doc: TableDocument, as_json: bool, output: Path | None) -> None:
    emit(doc.to_json() if as_json else doc.to_csv(), output)


def render_document(doc: TableDocument) -> Table:
    """Rich view of a document, for interactive output."""
    table = Table(title=doc.title, show_header=True)
    for index, name in enumerate(doc.columns):
        table.add_column(name, style="cyan" if index == 0 else "green")
    for row in doc.rows:
        table.add_row(*row)
    return table
