"""Reference table reproduction."""

from pathlib import Path

import typer

from ...core.tables import SIMULATION_SNRS, TITLES, build_table
from ..utils import emit_document, exit_on_error, experiment, progress_bar, split_floats, split_ints


def table(
    number: int = typer.Argument(..., help="Table number, 1..9"),
    code: str | None = typer.Option(None, "--code", "-c", help="Code id or code file (tables 2-9)"),
    ebn0_db: str | None = typer.Option(None, "--ebn0-db", help="Comma-separated Eb/N0 values in dB"),
    l0: str | None = typer.Option(None, "--l0", help="Comma-separated zero-string thresholds (tables 7-9)"),
    sim_blocks: int | None = typer.Option(None, "--sim-blocks", "-M", help="Simulated blocks per SNR (tables 7-9)"),
    seed: int | None = typer.Option(None, "--seed", help="Master seed"),
    start_offset: int | None = typer.Option(None, "--start-offset", help="Probe start offset (table 9)"),
    threads: int | None = typer.Option(None, "--threads", "-j", help="Worker threads", envvar="INNOVITERBI_THREADS"),
    config_file: Path | None = typer.Option(None, "--config", help="Experiment file (JSON or TOML)"),
    as_json: bool = typer.Option(False, "--json", help="Emit JSON instead of CSV"),
    output: Path | None = typer.Option(None, "--output", "-o", help="Write to a file instead of stdout"),
) -> None:
    """Reproduce one of the nine reference tables as CSV."""
    with exit_on_error():
        exp = experiment(
            config_file,
            code=code,
            sim_blocks=sim_blocks,
            seed=seed,
            start_offset=start_offset,
            threads=threads,
        )
        snrs = split_floats(ebn0_db)
        l0s = split_ints(l0)
        if number in (7, 8, 9):
            with progress_bar() as progress:
                task_id = progress.add_task(f"Table {number}: {TITLES[number]}", total=len(snrs or SIMULATION_SNRS))
                doc = build_table(number, exp, snrs, l0s, on_row=lambda: progress.advance(task_id))
        else:
            doc = build_table(number, exp, snrs, l0s)
        emit_document(doc, as_json or exp.output_format == "json", output or exp.output)
