"""Main CLI application entry point."""

import typer
from rich.console import Console

from ..core.config import Config
from ..core.exceptions import InnoviterbiError
from ..core.log import configure_logging
from .commands import analyze, block, codes, config, decode, simulate, table

app = typer.Typer(
    name="innoviterbi",
    help="SST Viterbi decoding, innovations and trellis degeneration workbench",
    add_completion=False,
    rich_markup_mode="rich",
)

app.add_typer(config.app, name="config", help="Configuration commands")
app.command("table")(table.table)
app.command("simulate")(simulate.simulate)
app.command("decode")(decode.decode)
app.command("block-decode")(block.block_decode)
app.command("analyze")(analyze.analyze)
app.command("codes")(codes.codes)

console = Console()
err_console = Console(stderr=True)


@app.callback()
def root(verbose: bool = typer.Option(False, "--verbose", "-v", help="Log debug output to stderr")) -> None:
    """innoviterbi command-line interface."""
    level = "DEBUG"
    if not verbose:
        try:
            level = Config().config.log_level
        except InnoviterbiError:
            level = "WARNING"
    configure_logging(level, err_console)


@app.command()
def version() -> None:
    """Show version information."""
    from .. import __version__

    console.print(f"innoviterbi v{__version__}")


def main() -> None:
    """Main entry point for the CLI."""
    try:
        app()
    except KeyboardInterrupt:
        err_console.print("\n[yellow]Cancelled by user[/yellow]")
        raise typer.Exit(1) from None
    except InnoviterbiError as e:
        err_console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(e.exit_code) from e


if __name__ == "__main__":
    main()
