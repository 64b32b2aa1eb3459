"""Decode transmitted or received frames."""

import json
from pathlib import Path
from typing import Any

import numpy as np
import typer
from rich.table import Table

from ...core.channel import ChannelConfig, SoftFrame, quantize, receive
from ...core.config import Config
from ...core.convcode import encode, load_code
from ...core.exceptions import ConfigurationError
from ...core.models import FrameRecord
from ...core.simulation import DECODERS, SweepSettings, aggregate, frame_rng, make_decoder
from ...core.tables import sweep_table
from ..utils import emit, emit_document, err_console, exit_on_error, parse_quantize


def read_soft(path: Path) -> SoftFrame:
    """One block per line, n0 comma-separated reals."""
    try:
        return SoftFrame(np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64))
    except (OSError, ValueError) as e:
        raise ConfigurationError(f"cannot read soft values from {path}: {e}") from e


def _bits(rows: np.ndarray) -> list[str]:
    return ["".join(str(int(b)) for b in row) for row in rows]


def _parse_info(info: str, k0: int) -> np.ndarray:
    if not info or any(ch not in "01" for ch in info):
        raise ConfigurationError(f"--info must be a nonempty 0/1 string, got {info!r}")
    if len(info) % k0:
        raise ConfigurationError(f"--info needs a multiple of k0={k0} bits, got {len(info)}")
    return np.array([int(ch) for ch in info], dtype=np.uint8).reshape(-1, k0)


def decode(
    mode: str = typer.Option(
        "sst-general", "--mode", "--decoder", "-d", help=f"Decoder, one of: {', '.join(DECODERS)}"
    ),
    code: str | None = typer.Option(None, "--code", "-c", help="Code id or code file"),
    ebn0_db: float = typer.Option(4.0, "--ebn0-db", help="Channel Eb/N0 in dB"),
    frames: int = typer.Option(1, "--frames", "-n", min=1, help="Number of frames to transmit and decode"),
    blocks: int = typer.Option(20, "--blocks", "-M", help="Frame length in blocks, tail included"),
    info: str | None = typer.Option(None, "--info", help="Information bits sent in every frame, as a 0/1 string"),
    soft_input: Path | None = typer.Option(None, "--input", "-i", help="CSV of received soft values to decode"),
    seed: int | None = typer.Option(None, "--seed", help="Seed of the simulated transmission"),
    quantize_spec: str | None = typer.Option(None, "--quantize", help="0, 8 or 8:<step> (default: stored config)"),
    l0: int = typer.Option(20, "--l0", help="Zero-string threshold for the degenerate decoder"),
    start_offset: int = typer.Option(1, "--start-offset", help="Probe start offset"),
    as_json: bool = typer.Option(False, "--json", help="Emit per-frame JSON instead of the aggregate CSV"),
    output: Path | None = typer.Option(None, "--output", "-o", help="Write to a file instead of stdout"),
) -> None:
    """Transmit frames (or read one) and decode them."""
    with exit_on_error():
        workbench = Config().config
        conv = load_code(code or workbench.default_code)
        seed = workbench.seed if seed is None else seed
        if quantize_spec is None:
            levels, step = workbench.quantize_levels, workbench.quantize_step
        else:
            levels, step = parse_quantize(quantize_spec)
        cfg = ChannelConfig.from_ebn0(ebn0_db, conv.rate, seed=seed, quantize_levels=levels, quantize_step=step)
        run = make_decoder(mode, conv, cfg, SweepSettings(l0=l0, start_offset=start_offset))

        truth = _parse_info(info, conv.k0) if info is not None else None
        received = None
        if soft_input is not None:
            if frames != 1 or truth is not None:
                raise ConfigurationError("--input holds a single received frame; drop --frames and --info")
            received = read_soft(soft_input)
            received = quantize(received, cfg) if levels else received
        elif truth is None and blocks <= conv.nu:
            raise ConfigurationError(f"--blocks must exceed nu={conv.nu}")
        known = received is None

        records: list[FrameRecord] = []
        details: list[dict[str, Any]] = []
        for frame in range(frames):
            sent = truth
            if received is not None:
                soft = received
            else:
                rng = frame_rng(seed, 0, frame)
                if sent is None:
                    sent = rng.integers(0, 2, size=(blocks - conv.nu, conv.k0), dtype=np.uint8)
                soft = receive(cfg, encode(conv, sent), rng=rng)
            result, q_c = run(soft)
            record = FrameRecord(
                frame=frame,
                decoder=mode,
                ebn0_db=ebn0_db,
                metric=result.metric,
                bit_errors=0 if sent is None else int(np.count_nonzero(result.info_hat != sent)),
                info_bits=0 if sent is None else int(sent.size),
                complexity=result.complexity_units,
                q_c=q_c,
            )
            records.append(record)
            details.append(
                {
                    **record.model_dump(),
                    "blocks": soft.length,
                    "bit_errors": record.bit_errors if known else None,
                    "info_bits": record.info_bits if known else None,
                    "info_hat": _bits(result.info_hat),
                    "codeword_hat": result.codeword_hat.to_strings(),
                }
            )

        summary = aggregate(records, ebn0_db, [mode])[0]
        view = Table(title="Decode summary", show_header=False)
        view.add_column("Field", style="cyan")
        view.add_column("Value", style="green")
        view.add_row("code", conv.name)
        view.add_row("quantizer", "off" if not levels else f"8 levels, step {step or cfg.c / 2:g}")
        for key, value in summary.model_dump().items():
            view.add_row(key, "-" if value is None else str(value))
        err_console.print(view)

        if as_json:
            payload = {
                "code": conv.name,
                "decoder": mode,
                "ebn0_db": ebn0_db,
                "quantize_levels": levels,
                "quantize_step": step,
                "frames": details,
                "bit_errors": summary.bit_errors if known else None,
                "ber": summary.ber if known else None,
            }
            emit(json.dumps(payload, indent=2), output)
            return
        emit_document(sweep_table([summary]), False, output)
