"""Code registry listing."""

import json

import typer
from rich.table import Table

from ...core.blockcode import BLOCK_CODES
from ...core.convcode import BUILTIN_CODES, load_code
from ..utils import console, exit_on_error


def codes(
    ref: str | None = typer.Argument(None, help="Code id or code file to describe (default: all built-ins)"),
    as_json: bool = typer.Option(False, "--json", help="Emit JSON"),
) -> None:
    """List the built-in convolutional codes, or describe one code."""
    with exit_on_error():
        described = [load_code(ref).describe()] if ref else [load_code(name).describe() for name in BUILTIN_CODES]

    if as_json:
        typer.echo(json.dumps(described, indent=2))
        return

    table = Table(title="Convolutional codes", show_header=True)
    table.add_column("Id", style="cyan")
    table.add_column("k0/n0", style="white")
    table.add_column("ν", style="white")
    table.add_column("G(D)", style="green")
    table.add_column("G⁻¹(D)", style="green")
    table.add_column("QLI L", style="yellow")
    for info in described:
        table.add_row(
            str(info["name"]),
            f"{info['k0']}/{info['n0']}",
            str(info["nu"]),
            " ; ".join(", ".join(row) for row in info["G"]),
            " ; ".join(", ".join(row) for row in info["G_inv"]),
            "-" if info["qli_L"] is None else str(info["qli_L"]),
        )
    console.print(table)
    if not ref:
        console.print(f"Block codes: {', '.join(BLOCK_CODES)}")
