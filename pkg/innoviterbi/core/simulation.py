"""Seeded Monte Carlo runs: syndrome statistics and paired decoder sweeps."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .analysis import most_probable_states
from .channel import ChannelConfig, SoftFrame, channel_epsilon, hard_decision, receive, transmit
from .convcode import ConvCode, HardFrame, encode, syndrome
from .degeneration import degenerate_decode, find_zero_strings
from .exceptions import ConfigurationError
from .log import get_logger
from .models import FrameRecord, GvaConfig, SweepRow, ZeroStringRow
from .reduced import gva_decode, pss_decode
from .viterbi import DecodeResult, sst_decode, viterbi

logger = get_logger(__name__)

DECODERS = ("viterbi", "sst-general", "sst-qli", "degenerate", "gva", "pss")
Z_95 = 1.959963984540054


def frame_rng(seed: int, row: int, frame: int) -> np.random.Generator:
    """Generator for one frame of one sweep row; independent of thread scheduling."""
    return np.random.default_rng(np.random.SeedSequence([seed, row, frame]))


def simulate_syndromes(code: ConvCode, cfg: ChannelConfig, blocks: int, rng: np.random.Generator) -> np.ndarray:
    """Syndrome sequence of one long noisy all-zero transmission, shape (blocks, n0 - k0).

    The syndrome depends on the channel errors only, so the all-zero codeword is enough.
    """
    codeword = HardFrame(np.zeros((blocks, code.n0), dtype=np.uint8))
    return syndrome(code, hard_decision(transmit(cfg, codeword, rng=rng)))


def zero_string_stats(runs: Iterable[np.ndarray], l0_list: Sequence[int], ebn0_db: float) -> list[ZeroStringRow]:
    """Count and mean length of zero-strings with length >= l0, pooled over runs."""
    lengths = np.array(
        [s.length for zeta in runs for s in find_zero_strings(zeta, min(l0_list))] if l0_list else [],
        dtype=np.int64,
    )
    rows = []
    for l0 in l0_list:
        selected = lengths[lengths >= l0]
        mean = float(selected.mean()) if len(selected) else 0.0
        rows.append(ZeroStringRow(ebn0_db=ebn0_db, l0=l0, count=len(selected), mean_length=mean))
    return rows


def normalized_complexity(
    code: ConvCode,
    cfg: ChannelConfig,
    blocks: int,
    l0_list: Sequence[int],
    start_offset: int,
    rng: np.random.Generator,
) -> dict[int, float]:
    """Q_c / M of degenerate decoding on one long random frame, per l0."""
    info = rng.integers(0, 2, size=(blocks - code.nu, code.k0), dtype=np.uint8)
    soft = receive(cfg, encode(code, info), rng=rng)
    out = {}
    for l0 in l0_list:
        _, report = degenerate_decode(code, soft, l0, start_offset)
        out[l0] = report.normalized
        logger.debug("Eb/N0=%s l0=%d: Q_c/M=%.3f", cfg.ebn0_db, l0, report.normalized)
    return out


@dataclass
class SweepSettings:
    """Decoder options shared by every frame of a sweep."""

    l0: int = 20
    start_offset: int = 1
    gva: GvaConfig | None = None
    pss_states: int | None = None
    terminated: bool = True


Decoder = Callable[[SoftFrame], tuple[DecodeResult, int | None]]


def make_decoder(name: str, code: ConvCode, cfg: ChannelConfig, settings: SweepSettings) -> Decoder:
    """Bind a decoder name to a frame -> (result, Q_c) callable."""
    mode: Literal["general", "qli"] = "qli" if code.is_qli else "general"
    term = settings.terminated
    if name == "viterbi":
        return lambda soft: (viterbi(code, soft, terminated=term), None)
    if name == "sst-general":
        return lambda soft: (sst_decode(code, soft, "general", terminated=term), None)
    if name == "sst-qli":
        code.require_qli()
        return lambda soft: (sst_decode(code, soft, "qli", terminated=term), None)
    if name == "degenerate":

        def run_degenerate(soft: SoftFrame) -> tuple[DecodeResult, int | None]:
            result, report = degenerate_decode(code, soft, settings.l0, settings.start_offset, terminated=term)
            return result, report.q_c

        return run_degenerate
    if name == "gva":
        gva_cfg = settings.gva or GvaConfig.low_weight(max(1, code.nu - 1))
        return lambda soft: (gva_decode(code, soft, gva_cfg, mode=mode, terminated=term), None)
    if name == "pss":
        count = settings.pss_states or max(1, (1 << (code.k0 * code.nu)) * 2 // 3)
        keep = most_probable_states(code, mode, channel_epsilon(cfg), count)
        return lambda soft: (pss_decode(code, soft, keep, mode=mode, terminated=term), None)
    raise ConfigurationError(f"unknown decoder {name!r}; choose from {', '.join(DECODERS)}")


def _run_frame(
    code: ConvCode,
    cfg: ChannelConfig,
    decoders: dict[str, Decoder],
    frame_blocks: int,
    seed: int,
    row: int,
    frame: int,
) -> list[FrameRecord]:
    rng = frame_rng(seed, row, frame)
    info = rng.integers(0, 2, size=(frame_blocks - code.nu, code.k0), dtype=np.uint8)
    soft = receive(cfg, encode(code, info), rng=rng)
    records = []
    for name, decode in decoders.items():
        result, q_c = decode(soft)
        records.append(
            FrameRecord(
                frame=frame,
                decoder=name,
                ebn0_db=cfg.ebn0_db if cfg.ebn0_db is not None else 0.0,
                metric=result.metric,
                bit_errors=int(np.count_nonzero(result.info_hat != info)),
                info_bits=int(info.size),
                complexity=result.complexity_units,
                q_c=q_c,
            )
        )
    return records


def _normal_interval(errors: int, bits: int) -> tuple[float, float, float]:
    if bits == 0:
        return 0.0, 0.0, 0.0
    ber = errors / bits
    half = Z_95 * math.sqrt(ber * (1 - ber) / bits)
    return ber, max(0.0, ber - half), min(1.0, ber + half)


def aggregate(records: Sequence[FrameRecord], ebn0_db: float, decoders: Sequence[str]) -> list[SweepRow]:
    """Per-decoder BER with a 95% normal interval; metric agreement is measured against viterbi."""
    reference = {r.frame: r.metric for r in records if r.decoder == "viterbi"}
    rows = []
    for name in decoders:
        mine = [r for r in records if r.decoder == name]
        errors = sum(r.bit_errors for r in mine)
        bits = sum(r.info_bits for r in mine)
        ber, low, high = _normal_interval(errors, bits)
        equal = None
        if reference and mine:
            same = sum(math.isclose(r.metric, reference[r.frame], rel_tol=1e-9, abs_tol=1e-9) for r in mine)
            equal = same / len(mine)
        rows.append(
            SweepRow(
                ebn0_db=ebn0_db,
                decoder=name,
                frames=len(mine),
                info_bits=bits,
                bit_errors=errors,
                ber=ber,
                ci_low=low,
                ci_high=high,
                mean_metric=float(np.mean([r.metric for r in mine])) if mine else 0.0,
                mean_complexity=float(np.mean([r.complexity for r in mine])) if mine else 0.0,
                metric_equal_rate=equal,
            )
        )
    return rows


def run_sweep(
    code: ConvCode,
    decoders: Sequence[str],
    ebn0_list: Sequence[float],
    frames: int,
    frame_blocks: int,
    seed: int,
    settings: SweepSettings | None = None,
    threads: int = 1,
    quantize_levels: Literal[0, 8] = 0,
    quantize_step: float | None = None,
    on_frame: Callable[[], None] | None = None,
) -> tuple[list[SweepRow], list[FrameRecord]]:
    """Paired sweep: every decoder sees the same frames; results do not depend on thread count."""
    settings = settings or SweepSettings()
    if frame_blocks <= code.nu:
        raise ConfigurationError(f"frames need more than nu={code.nu} blocks, got {frame_blocks}")
    rows: list[SweepRow] = []
    records: list[FrameRecord] = []
    for row, ebn0_db in enumerate(ebn0_list):
        cfg = ChannelConfig.from_ebn0(
            ebn0_db, code.rate, seed=seed, quantize_levels=quantize_levels, quantize_step=quantize_step
        )
        bound = {name: make_decoder(name, code, cfg, settings) for name in decoders}

        def task(
            frame: int, cfg: ChannelConfig = cfg, bound: dict[str, Decoder] = bound, row: int = row
        ) -> list[FrameRecord]:
            out = _run_frame(code, cfg, bound, frame_blocks, seed, row, frame)
            if on_frame:
                on_frame()
            return out

        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            per_frame = list(pool.map(task, range(frames)))
        row_records = [r for batch in per_frame for r in batch]
        records.extend(row_records)
        rows.extend(aggregate(row_records, ebn0_db, decoders))
        logger.debug("Eb/N0=%.2f dB: %d frames decoded", ebn0_db, frames)
    return rows, records
