"""Configuration management commands."""

import typer
from rich.table import Table

from ...core import Config
from ..utils import console, exit_on_error

app = typer.Typer(help="Configuration management")


@app.command("set")
def set_config(
    key: str = typer.Argument(..., help="Configuration key"),
    value: str = typer.Argument(..., help="Configuration value (lists are comma-separated)"),
) -> None:
    """Set a configuration value."""
    with exit_on_error():
        Config().set(key, value)
    console.print(f"✅ Set {key} = {value}")


@app.command("get")
def get_config(key: str = typer.Argument(..., help="Configuration key, dotted for list items")) -> None:
    """Get a configuration value."""
    with exit_on_error():
        value = Config().get(key)
    if value is not None:
        console.print(f"{key} = {value}")
    else:
        console.print(f"[yellow]{key} is not set[/yellow]")


@app.command("show")
def show_config() -> None:
    """Show all configuration values."""
    with exit_on_error():
        config = Config()

    table = Table(title="innoviterbi configuration")
    table.add_column("Key", style="cyan")
    table.add_column("Value", style="green")
    for key, value in config.config.model_dump().items():
        table.add_row(key, "[dim]None[/dim]" if value is None else str(value))
    table.caption = str(config.config_path)
    console.print(table)


@app.command("reset")
def reset_config(yes: bool = typer.Option(False, "--yes", "-y", help="Do not ask for confirmation")) -> None:
    """Reset configuration to defaults."""
    if yes or typer.confirm("Are you sure you want to reset all configuration?"):
        with exit_on_error():
            Config().reset()
        console.print("✅ Configuration reset to defaults")
