"""Builders for the nine reference tables."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .analysis import View, amplitude, distribution_report, state_distribution
from .channel import ChannelConfig, q_function
from .config import ExperimentConfig
from .convcode import ConvCode, HardFrame, encode, load_code, predecode_general, predecode_qli, syndrome
from .exceptions import ConfigurationError
from .log import get_logger
from .models import FrameRecord, SweepRow, TableDocument
from .simulation import frame_rng, normalized_complexity, simulate_syndromes, zero_string_stats

logger = get_logger(__name__)

WORKED_INFO = [1, 0, 0, 1, 0, 1, 0, 0]
WORKED_ERRORS = ["00", "10", "00", "01", "00", "10", "00", "00"]
SIMULATION_SNRS = [4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]
COMPLEXITY_L0 = [20, 25, 30]

TITLES = {
    1: "Encoding, syndrome and estimator outputs for C1",
    2: "Entropies associated with input distributions (filtered estimate)",
    3: "Entropies associated with input distributions (smoothed estimate)",
    4: "State distributions for the main decoder (general SST)",
    5: "State distributions for the main decoder (QLI SST)",
    6: "State distributions for the error trellis",
    7: "Number of zero-strings",
    8: "Average length of zero-strings",
    9: "Normalized decoding complexity",
}


def fmt(value: float) -> str:
    """Four decimals, more for very small values."""
    if value != 0 and abs(value) < 0.001:
        return f"{value:.6f}"
    return f"{value:.4f}"


def _bits(row: np.ndarray) -> str:
    return "".join(str(int(b)) for b in row)


def _starred(estimate: np.ndarray, truth: np.ndarray) -> list[str]:
    return [f"{int(e)}*" if e != t else str(int(e)) for e, t in zip(estimate, truth, strict=True)]


def table_1() -> TableDocument:
    """Noiseless replay of the worked example; '*' marks estimates that miss i_{k-1}."""
    code = load_code("C1")
    info = np.array(WORKED_INFO, dtype=np.uint8).reshape(-1, 1)
    y = encode(code, info, terminate=False)
    e = HardFrame.from_strings(WORKED_ERRORS)
    zh = y ^ e
    zeta = syndrome(code, zh)[:, 0]
    smoothed = predecode_qli(code, zh).aligned(1)[:, 0]
    filtered = predecode_general(code, zh).aligned(1)[:, 0]
    previous = np.concatenate([[0], info[:-1, 0]])
    columns = ["k", "i_k", "y_k", "e_k", "z_k^h", "ζ_k", "î(k-1|k)", "î(k-1|k-1)", "i_{k-1}"]
    stars = zip(_starred(smoothed, previous), _starred(filtered, previous), strict=True)
    rows = [
        [str(k + 1), str(int(info[k, 0])), *(_bits(f.blocks[k]) for f in (y, e, zh)), str(int(zeta[k])), s, f, str(p)]
        for k, ((s, f), p) in enumerate(zip(stars, previous, strict=True))
    ]
    return TableDocument(table=1, title=TITLES[1], columns=columns, rows=rows)


RowHook = Callable[[], None] | None


def _tick(on_row: RowHook) -> None:
    if on_row:
        on_row()


def _entropy_table(number: int, code: ConvCode, snrs: Sequence[float], on_row: RowHook = None) -> TableDocument:
    kind = "alpha" if number == 2 else "beta"
    if kind == "beta":
        code.require_qli()
    symbol, gap = ("α", "Hr") if kind == "alpha" else ("β", "Hη")
    n0 = code.n0
    columns = ["Eb/N0 [dB]", "c", "ε"]
    columns += [f"{symbol}{j + 1}" for j in range(n0)] + [f"{gap}({j + 1})" for j in range(n0)] + ["Sum"]
    rows = []
    for snr in snrs:
        rep = distribution_report(code, kind, snr)
        rows.append(
            [f"{snr:g}", f"{rep.c:.3f}", fmt(rep.epsilon)]
            + [fmt(p) for p in rep.params]
            + [fmt(g) for g in rep.entropy_gaps]
            + [fmt(rep.total)]
        )
        _tick(on_row)
    return TableDocument(table=number, title=TITLES[number], columns=columns, rows=rows)


def _state_table(number: int, code: ConvCode, snrs: Sequence[float], on_row: RowHook = None) -> TableDocument:
    view: View = {4: "general", 5: "qli", 6: "error-trellis"}[number]
    prefix, entropy = ("P̃", "H̃") if view == "error-trellis" else ("P", "H")
    reports = []
    for snr in snrs:
        eps = float(q_function(amplitude(snr, code.rate)))
        reports.append(state_distribution(code, view, eps, snr_db=snr))
        _tick(on_row)
    labels = list(reports[0].probs) if reports else []
    columns = ["Eb/N0 [dB]"] + [f"{prefix}{label}" for label in labels] + [entropy]
    rows = [[f"{r.snr_db:g}"] + [fmt(r.probs[label]) for label in labels] + [fmt(r.entropy)] for r in reports]
    return TableDocument(table=number, title=TITLES[number], columns=columns, rows=rows)


def _zero_string_table(
    number: int,
    code: ConvCode,
    exp: ExperimentConfig,
    snrs: Sequence[float],
    l0s: Sequence[int],
    on_row: RowHook = None,
) -> TableDocument:
    def row(index: int) -> list[str]:
        snr = snrs[index]
        cfg = ChannelConfig.from_ebn0(snr, code.rate, seed=exp.seed)
        zeta = simulate_syndromes(code, cfg, exp.sim_blocks, frame_rng(exp.seed, index, 0))
        stats = zero_string_stats([zeta], l0s, snr)
        cells = [str(s.count) for s in stats] if number == 7 else [f"{s.mean_length:.1f}" for s in stats]
        _tick(on_row)
        return [f"{snr:g}", *cells]

    with ThreadPoolExecutor(max_workers=exp.threads) as pool:
        rows = list(pool.map(row, range(len(snrs))))
    columns = ["Eb/N0 [dB]"] + [f"ℓ0={l0}" for l0 in l0s]
    return TableDocument(table=number, title=TITLES[number], columns=columns, rows=rows)


def _complexity_table(
    code: ConvCode, exp: ExperimentConfig, snrs: Sequence[float], l0s: Sequence[int], on_row: RowHook = None
) -> TableDocument:
    def row(index: int) -> list[str]:
        snr = snrs[index]
        cfg = ChannelConfig.from_ebn0(
            snr, code.rate, seed=exp.seed, quantize_levels=exp.quantize_levels, quantize_step=exp.quantize_step
        )
        ratios = normalized_complexity(
            code, cfg, exp.sim_blocks, l0s, exp.start_offset, frame_rng(exp.seed, index, 0)
        )
        _tick(on_row)
        return [f"{snr:g}", *(f"{ratios[l0]:.2f}" for l0 in l0s)]

    with ThreadPoolExecutor(max_workers=exp.threads) as pool:
        rows = list(pool.map(row, range(len(snrs))))
    columns = ["Eb/N0 [dB]"] + [f"ℓ0={l0}" for l0 in l0s]
    return TableDocument(table=9, title=TITLES[9], columns=columns, rows=rows)


def build_table(
    number: int,
    exp: ExperimentConfig,
    snrs: Sequence[float] | None = None,
    l0s: Sequence[int] | None = None,
    on_row: RowHook = None,
) -> TableDocument:
    """Build table 1..9; snrs and l0s default to the reference grids of each table."""
    if number not in TITLES:
        raise ConfigurationError(f"unknown table {number}; choose 1..9")
    if number == 1:
        return table_1()
    code = load_code(exp.code)
    if number in (2, 3, 4, 5, 6):
        grid = list(snrs) if snrs is not None else [float(x) for x in range(11)]
        builder = _entropy_table if number in (2, 3) else _state_table
        return builder(number, code, grid, on_row)
    grid = list(snrs) if snrs is not None else SIMULATION_SNRS
    logger.info("table %d: simulating %d blocks per SNR", number, exp.sim_blocks)
    if number in (7, 8):
        return _zero_string_table(number, code, exp, grid, list(l0s or exp.l0), on_row)
    return _complexity_table(code, exp, grid, list(l0s or COMPLEXITY_L0), on_row)


def _num(value: float | None) -> str:
    return "" if value is None else f"{value:.6g}"


def sweep_table(rows: Sequence[SweepRow]) -> TableDocument:
    """Aggregates of a decoder sweep, one row per (Eb/N0, decoder)."""
    columns = [
        "Eb/N0 [dB]",
        "decoder",
        "frames",
        "info_bits",
        "bit_errors",
        "BER",
        "CI low",
        "CI high",
        "mean metric",
        "mean complexity",
        "metric equal rate",
    ]
    body = [
        [
            f"{r.ebn0_db:g}",
            r.decoder,
            str(r.frames),
            str(r.info_bits),
            str(r.bit_errors),
            _num(r.ber),
            _num(r.ci_low),
            _num(r.ci_high),
            _num(r.mean_metric),
            _num(r.mean_complexity),
            _num(r.metric_equal_rate),
        ]
        for r in rows
    ]
    return TableDocument(table="simulate", title="Decoder sweep", columns=columns, rows=body)


def records_table(records: Sequence[FrameRecord]) -> TableDocument:
    """Per-frame outcomes, in a whitespace-free layout that plotting tools read directly."""
    columns = ["ebn0_db", "frame", "decoder", "metric", "bit_errors", "info_bits", "complexity", "q_c"]
    body = [
        [
            f"{r.ebn0_db:g}",
            str(r.frame),
            r.decoder,
            f"{r.metric:.10g}",
            str(r.bit_errors),
            str(r.info_bits),
            _num(r.complexity),
            "" if r.q_c is None else str(r.q_c),
        ]
        for r in records
    ]
    return TableDocument(table="records", title="Per-frame decoder outcomes", columns=columns, rows=body)
