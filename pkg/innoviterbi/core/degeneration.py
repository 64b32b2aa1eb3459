"""Zero-string trellis degeneration.

Where the main decoder sees a long run of zero hard inputs, forward and backward probes
from every candidate state find the depths at which state 0 takes over; between those
depths the path is pinned to state 0 and no ACS is performed.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable

import numpy as np

from .channel import SoftFrame
from .convcode import ConvCode, Mode
from .exceptions import ConsistencyError, ValidationError
from .log import get_logger
from .models import DegenerationOutcome, DegenerationReport, ZeroString
from .viterbi import DecodeResult, ViterbiEngine, finish, input_bits, sst_main_input, trellis_for

logger = get_logger(__name__)


def find_zero_strings(zeta: np.ndarray | list, l0: int) -> list[ZeroString]:
    """Maximal zero-strings of length >= l0, sorted by start depth.

    Element k of zeta belongs to time k+1; a 2-D input counts a row as zero when all of
    its bits are zero.
    """
    if l0 < 1:
        raise ValidationError(f"l0 must be at least 1, got {l0}")
    arr = np.asarray(zeta, dtype=np.uint8)
    if arr.size == 0:
        return []
    zero = ~arr.reshape(len(arr), -1).any(axis=1)
    edges = np.flatnonzero(np.diff(np.concatenate([[0], zero.astype(np.int8), [0]])))
    return [
        ZeroString(t=int(a), t_end=int(b))
        for a, b in zip(edges[0::2], edges[1::2], strict=True)
        if b - a >= l0
    ]


def _zero_best(metric: np.ndarray) -> bool:
    return bool(np.isfinite(metric[0]) and metric[0] >= metric.max())


def forward_probe(engine: ViterbiEngine, r: np.ndarray, start: int, begin: int, t: int, t_end: int) -> int | None:
    """First depth in [t, t_end] at which state 0 is best, starting from `start` at depth begin."""
    metric = engine.initial_metric(start)
    for d in range(begin, t_end):
        metric, _ = engine.step(metric, r[d])
        if d + 1 >= t and _zero_best(metric):
            return d + 1
    return None


def backward_probe(engine: ViterbiEngine, r: np.ndarray, start: int, end: int, t: int, t_end: int) -> int | None:
    """Last depth in [t, t_end] at which state 0 is best, running back from `start` at depth end."""
    metric = engine.initial_metric(start)
    for d in range(end - 1, t - 1, -1):
        metric = engine.step_back(metric, r[d])
        if d <= t_end and _zero_best(metric):
            return d
    return None


def _combine(depths: list[int | None], pick: Callable[[list[int]], int]) -> int | None:
    found = [d for d in depths if d is not None]
    return pick(found) if found and len(found) == len(depths) else None


def probe_states(num_states: int, start_offset: int, start_states: Iterable[int] | None = None) -> list[int]:
    """Probe starting states: the nonzero states (or a restricted set), plus 0 once the start is offset."""
    if start_states is None:
        states = set(range(1, num_states))
    else:
        states = {int(s) for s in start_states}
        bad = [s for s in states if not 0 <= s < num_states]
        if bad:
            raise ValidationError(f"probe start states {sorted(bad)} outside 0..{num_states - 1}")
    if start_offset > 0:
        states.add(0)
    return sorted(states)


def degenerate_string(
    engine: ViterbiEngine,
    r: np.ndarray,
    string: ZeroString,
    start_offset: int,
    starts: list[int],
) -> tuple[DegenerationOutcome, int]:
    """Probe one zero-string; returns the outcome and the probe work in section units."""
    length = len(r)
    begin, end = max(0, string.t - start_offset), min(length, string.t_end + start_offset)

    forward = [forward_probe(engine, r, x, begin, string.t, string.t_end) for x in starts]
    backward = [backward_probe(engine, r, x, end, string.t, string.t_end) for x in starts]
    tau = _combine(forward, max)
    tau_prime = _combine(backward, min)

    fwd_stop = tau if tau is not None else string.t_end
    bwd_stop = tau_prime if tau_prime is not None else string.t
    work = len(starts) * ((fwd_stop - begin) + (end - bwd_stop))
    success = tau is not None and tau_prime is not None and string.t <= tau < tau_prime <= string.t_end
    outcome = DegenerationOutcome(
        t=string.t, t_end=string.t_end, tau=tau, tau_prime=tau_prime, success=success, probe_units=work
    )
    logger.debug("zero-string [%d, %d]: tau=%s tau'=%s success=%s", string.t, string.t_end, tau, tau_prime, success)
    return outcome, work


def degenerate_decode(
    code: ConvCode,
    soft: SoftFrame,
    l0: int,
    start_offset: int = 0,
    mode: Mode | None = None,
    start_states: Iterable[int] | None = None,
    terminated: bool = True,
) -> tuple[DecodeResult, DegenerationReport]:
    """SST decoding with zero-string degeneration of the main decoder's trellis.

    Zero-strings are maximal all-zero runs of the main decoder's hard input rows, so every
    pinned section has zero hard decisions. In QLI mode those rows are (zeta_{k+L}, zeta_{k+L})
    away from the frame edges. In general mode zeta = r H^T, so a zero run of r over [t, t')
    carries a zero run of zeta over [t + deg H^T, t').

    Q_c = M + Delta' - Delta, with Delta the pinned sections and Delta' the probe work.
    """
    if start_offset < 0:
        raise ValidationError(f"start offset must be non-negative, got {start_offset}")
    mode = mode or ("qli" if code.is_qli else "general")
    v, main_hard, r_frame = sst_main_input(code, soft, mode, terminated)
    r = r_frame.blocks
    engine = ViterbiEngine(trellis_for(code))
    starts = probe_states(engine.num_states, start_offset, start_states)

    report = DegenerationReport(sections=soft.length)
    pins: list[tuple[int, int]] = []
    for string in find_zero_strings(main_hard.blocks, l0):
        outcome, work = degenerate_string(engine, r, string, start_offset, starts)
        report.outcomes.append(outcome)
        report.delta_prime += work
        if outcome.success and outcome.tau is not None and outcome.tau_prime is not None:
            pins.append((outcome.tau, outcome.tau_prime))
            report.delta += outcome.tau_prime - outcome.tau

    inputs, states = engine.run(r, end_state=0 if terminated else None, pins=pins)
    u_hat = input_bits(inputs, code.k0)
    result = finish(code, soft, v ^ u_hat, terminated, float(report.q_c), states, main_hard, u_hat)
    logger.debug("degeneration: %d strings, Q_c/M = %.3f", len(report.outcomes), report.normalized)
    return result, report


def hard_decision_lh(code: ConvCode, horizon: int | None = None) -> int:
    """(tau - t) + (t' - tau') for an all-zero hard-decision input, probes from every nonzero state."""
    horizon = horizon or max(64, 16 * code.nu)
    engine = ViterbiEngine(trellis_for(code))
    r = np.ones((horizon, code.n0))
    string = ZeroString(t=0, t_end=horizon)
    outcome, _ = degenerate_string(engine, r, string, 0, probe_states(engine.num_states, 0))
    if outcome.tau is None or outcome.tau_prime is None:
        raise ConsistencyError(f"state 0 never dominates within {horizon} all-zero sections")
    return (outcome.tau - string.t) + (string.t_end - outcome.tau_prime)
