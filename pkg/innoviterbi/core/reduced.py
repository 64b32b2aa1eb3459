"""Reduced-state decoders: generalized Viterbi (GVA) and probability-selected states (PSS).

Both run either directly on the code trellis (mode=None) or as the main decoder of an SST
pipeline, where the state distribution concentrates around the zero state.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .channel import SoftFrame
from .convcode import ConvCode, HardFrame, Mode
from .exceptions import ConfigurationError, UnsupportedCodeError
from .log import get_logger
from .models import GvaConfig
from .viterbi import (
    DecodeResult,
    ViterbiEngine,
    check_frame,
    finish,
    input_bits,
    sst_main_input,
    trellis_for,
)

logger = get_logger(__name__)


def _decoder_input(
    code: ConvCode, soft: SoftFrame, mode: Mode | None, terminated: bool
) -> tuple[np.ndarray | None, HardFrame | None, np.ndarray]:
    if mode is None:
        check_frame(code, soft, terminated)
        return None, None, soft.blocks
    v, main_hard, r = sst_main_input(code, soft, mode, terminated)
    return v, main_hard, r.blocks


def _keep_mask(keep: Iterable[int], num_states: int) -> np.ndarray:
    states = {int(s) for s in keep}
    if 0 not in states:
        raise ConfigurationError("the kept state set must contain the zero state")
    bad = sorted(s for s in states if not 0 <= s < num_states)
    if bad:
        raise ConfigurationError(f"kept states {bad} outside 0..{num_states - 1}")
    mask = np.zeros(num_states, dtype=bool)
    mask[sorted(states)] = True
    return mask


def _budget_table(code: ConvCode, cfg: GvaConfig) -> np.ndarray:
    if not 1 <= cfg.nu_tilde <= code.nu:
        raise ConfigurationError(f"nu_tilde must lie in 1..{code.nu}, got {cfg.nu_tilde}")
    size = 1 << cfg.nu_tilde
    bad = sorted(s for s in cfg.survivor_budget if not 0 <= s < size)
    if bad:
        raise ConfigurationError(f"decoder states {bad} outside 0..{size - 1}")
    capacity = 1 << (code.nu - cfg.nu_tilde)
    budget = np.array([cfg.budget(s) for s in range(size)], dtype=np.int64)
    over = np.flatnonzero(budget > capacity)
    if len(over):
        state = int(over[0])
        raise ConfigurationError(
            f"budget {budget[state]} for decoder state {state} exceeds its {capacity} encoder states"
        )
    return budget


def _first_of_groups(keys: np.ndarray) -> np.ndarray:
    first = np.ones(len(keys), dtype=bool)
    first[1:] = keys[1:] != keys[:-1]
    return first


def _rank_in_groups(keys: np.ndarray) -> np.ndarray:
    starts = np.flatnonzero(_first_of_groups(keys))
    sizes = np.diff(np.append(starts, len(keys)))
    return np.arange(len(keys)) - np.repeat(starts, sizes)


def gva_decode(
    code: ConvCode,
    soft: SoftFrame,
    cfg: GvaConfig,
    mode: Mode | None = None,
    terminated: bool = True,
) -> DecodeResult:
    """Generalized Viterbi decoding with decoder states of the latest nu_tilde inputs.

    Each section extends every survivor, pre-selects the best path per encoder state
    (ties: lower previous state, then input 0) and keeps the best budget[d] paths per
    decoder state d (ties: lower encoder state). Tail inputs of terminated frames are 0.
    """
    if code.k0 != 1:
        raise UnsupportedCodeError("GVA decoding is implemented for k0 = 1")
    budget = _budget_table(code, cfg)
    v, main_hard, r = _decoder_input(code, soft, mode, terminated)
    trellis = trellis_for(code)
    keep = None if cfg.pss_keep is None else _keep_mask(cfg.pss_keep, trellis.num_states)
    dec_mask = len(budget) - 1
    length = len(r)

    states = np.zeros(1, dtype=np.int64)
    metrics = np.zeros(1)
    history: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    units = 0.0
    for d in range(length):
        units += len(states) / trellis.num_states
        bm = trellis.signs @ r[d]
        num_inputs = 1 if terminated and d >= length - code.nu else trellis.num_inputs
        parent = np.repeat(np.arange(len(states)), num_inputs)
        u = np.tile(np.arange(num_inputs), len(states))
        prev = states[parent]
        nxt = trellis.next_state[prev, u]
        m = metrics[parent] + bm[prev, u]
        if keep is not None:
            allowed = keep[nxt]
            parent, u, prev, nxt, m = parent[allowed], u[allowed], prev[allowed], nxt[allowed], m[allowed]

        order = np.lexsort((u, prev, -m, nxt))
        chosen = order[_first_of_groups(nxt[order])]

        dstate = nxt[chosen] & dec_mask
        order = np.lexsort((nxt[chosen], -m[chosen], dstate))
        chosen, dstate = chosen[order], dstate[order]
        chosen = chosen[_rank_in_groups(dstate) < budget[dstate]]

        states, metrics = nxt[chosen], m[chosen]
        history.append((parent[chosen], u[chosen], states))

    if terminated:
        hits = np.flatnonzero(states == 0)
        if len(hits) == 0:
            raise ConfigurationError("no survivor reached the zero state; the kept state set is too small")
        index = int(hits[0])
    else:
        index = int(np.argmax(metrics))
    inputs = np.zeros(length, dtype=np.int64)
    path = np.zeros(length + 1, dtype=np.int64)
    for d in range(length - 1, -1, -1):
        parents, us, sts = history[d]
        inputs[d], path[d + 1] = us[index], sts[index]
        index = int(parents[index])

    logger.debug("gva nu_tilde=%d: %.2f full-trellis section equivalents", cfg.nu_tilde, units)
    u_hat = input_bits(inputs, code.k0)
    info = u_hat if v is None else v ^ u_hat
    return finish(code, soft, info, terminated, units, path, main_hard, None if v is None else u_hat)


def pss_decode(
    code: ConvCode,
    soft: SoftFrame,
    keep: Iterable[int],
    mode: Mode | None = None,
    terminated: bool = True,
) -> DecodeResult:
    """Viterbi decoding with ACS restricted to the kept states."""
    trellis = trellis_for(code)
    mask = _keep_mask(keep, trellis.num_states)
    v, main_hard, r = _decoder_input(code, soft, mode, terminated)
    engine = ViterbiEngine(trellis, keep=mask)
    inputs, states = engine.run(r, end_state=0 if terminated else None)
    units = len(r) * int(mask.sum()) / trellis.num_states
    u_hat = input_bits(inputs, code.k0)
    info = u_hat if v is None else v ^ u_hat
    return finish(code, soft, info, terminated, units, states, main_hard, None if v is None else u_hat)
