"""Monte Carlo decoder sweeps."""

from pathlib import Path

import typer

from ...core.convcode import load_code
from ...core.log import get_logger
from ...core.models import GvaConfig
from ...core.simulation import DECODERS, SweepSettings, run_sweep
from ...core.tables import records_table, sweep_table
from ..utils import emit, emit_document, exit_on_error, experiment, progress_bar, split_floats

logger = get_logger(__name__)


def simulate(
    code: str | None = typer.Option(None, "--code", "-c", help="Code id or code file"),
    decoders: str | None = typer.Option(None, "--decoders", "-d", help=f"Comma-separated: {', '.join(DECODERS)}"),
    ebn0_db: str | None = typer.Option(None, "--ebn0-db", help="Comma-separated Eb/N0 values in dB"),
    frames: int | None = typer.Option(None, "--frames", "-n", help="Frames per Eb/N0 value"),
    frame_blocks: int | None = typer.Option(None, "--frame-blocks", "-M", help="Blocks per frame, tail included"),
    seed: int | None = typer.Option(None, "--seed", help="Master seed"),
    l0: int = typer.Option(20, "--l0", help="Zero-string threshold for the degenerate decoder"),
    start_offset: int | None = typer.Option(None, "--start-offset", help="Probe start offset"),
    gva_nu_tilde: int | None = typer.Option(None, "--gva-nu-tilde", help="GVA decoder state memory"),
    gva_survivors: int = typer.Option(2, "--gva-survivors", help="Survivors kept for low-weight decoder states"),
    pss_states: int | None = typer.Option(None, "--pss-states", help="States kept by PSS (default 2/3)"),
    quantize_levels: int | None = typer.Option(None, "--quantize-levels", help="0 (off) or 8"),
    threads: int | None = typer.Option(None, "--threads", "-j", help="Worker threads", envvar="INNOVITERBI_THREADS"),
    config_file: Path | None = typer.Option(None, "--config", help="Experiment file (JSON or TOML)"),
    records: Path | None = typer.Option(None, "--records", help="Also write per-frame outcomes to this CSV"),
    as_json: bool = typer.Option(False, "--json", help="Emit JSON instead of CSV"),
    output: Path | None = typer.Option(None, "--output", "-o", help="Write to a file instead of stdout"),
) -> None:
    """Run a paired decoder sweep and emit BER, metric and complexity aggregates."""
    with exit_on_error():
        exp = experiment(
            config_file,
            code=code,
            decoders=decoders,
            ebn0_db=split_floats(ebn0_db),
            frames=frames,
            frame_blocks=frame_blocks,
            seed=seed,
            start_offset=start_offset,
            quantize_levels=quantize_levels,
            threads=threads,
        )
        conv = load_code(exp.code)
        settings = SweepSettings(
            l0=l0,
            start_offset=exp.start_offset,
            gva=GvaConfig.low_weight(gva_nu_tilde, survivors=gva_survivors) if gva_nu_tilde else None,
            pss_states=pss_states,
        )
        logger.info("sweep %s on %s: %d frames x %d SNR values", exp.decoders, conv.name, exp.frames, len(exp.ebn0_db))
        with progress_bar() as progress:
            task_id = progress.add_task("Decoding frames...", total=exp.frames * len(exp.ebn0_db))
            rows, frame_records = run_sweep(
                conv,
                exp.decoders,
                exp.ebn0_db,
                exp.frames,
                exp.frame_blocks,
                exp.seed,
                settings=settings,
                threads=exp.threads,
                quantize_levels=exp.quantize_levels,
                quantize_step=exp.quantize_step,
                on_frame=lambda: progress.advance(task_id),
            )
        if records is not None:
            emit(records_table(frame_records).to_csv(), records)
        emit_document(sweep_table(rows), as_json or exp.output_format == "json", output or exp.output)
