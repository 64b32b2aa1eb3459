"""Viterbi decoding on the code trellis and the SST pipeline in front of it."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import SoftFrame, hard_decision, remap_soft
from .convcode import (
    ConvCode,
    HardFrame,
    Mode,
    TrellisModule,
    build_code_trellis,
    encode,
    predecode_general,
    predecode_qli,
)
from .exceptions import FrameError, ShapeError
from .log import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class DecodeResult:
    """Decoder output for one frame.

    path_states[d] is the winning-path state at depth d (d = 0 .. M). For SST decoding the
    states and main_info belong to the main decoder.
    """

    info_hat: np.ndarray
    codeword_hat: HardFrame
    metric: float
    complexity_units: float
    path_states: np.ndarray
    main_hard: HardFrame | None = None
    main_info: np.ndarray | None = None

    @property
    def sections(self) -> int:
        return len(self.path_states) - 1

    def state_histogram(self, num_states: int) -> np.ndarray:
        """How often each state is on the winning path over depths 1 .. M."""
        return np.bincount(self.path_states[1:], minlength=num_states)

    @property
    def survivor_stats(self) -> dict[int, int]:
        counts = np.bincount(self.path_states[1:]) if self.sections else np.zeros(0, dtype=np.int64)
        return {state: int(n) for state, n in enumerate(counts) if n}


def correlation(codeword: HardFrame, soft: SoftFrame) -> float:
    """Sum of (1 - 2 c) z over all code bits."""
    if codeword.blocks.shape != soft.blocks.shape:
        raise ShapeError(f"codeword {codeword.blocks.shape} and soft frame {soft.blocks.shape} differ")
    return float(np.sum((1.0 - 2.0 * codeword.blocks) * soft.blocks))


@lru_cache(maxsize=32)
def trellis_for(code: ConvCode) -> TrellisModule:
    return build_code_trellis(code)


class ViterbiEngine:
    """Add-compare-select over a fixed trellis.

    Engines keep no per-frame state between runs; use one instance per thread.
    """

    def __init__(self, trellis: TrellisModule, keep: np.ndarray | None = None) -> None:
        self.trellis = trellis
        self._signs = trellis.signs
        self._rows = np.arange(trellis.num_states)
        self._keep = None if keep is None else np.asarray(keep, dtype=bool)

    @property
    def num_states(self) -> int:
        return self.trellis.num_states

    def initial_metric(self, state: int = 0) -> np.ndarray:
        metric = np.full(self.num_states, -np.inf)
        metric[state] = 0.0
        return metric

    def branch_metrics(self, r_k: np.ndarray) -> np.ndarray:
        """(states, inputs) correlation of every branch label with one received block."""
        return self._signs @ r_k

    def step(self, metric: np.ndarray, r_k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """One ACS section; the decision is the index into the sorted predecessor list."""
        t = self.trellis
        bm = self.branch_metrics(r_k)
        cand = metric[t.prev_state] + bm[t.prev_state, t.prev_input]
        choice = np.argmax(cand, axis=1)
        new = cand[self._rows, choice]
        if self._keep is not None:
            new = np.where(self._keep, new, -np.inf)
        return new, choice

    def hold_zero(self, metric: np.ndarray, r_k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Pinned section: only the zero-input self-loop of state 0 is extended."""
        new = np.full(self.num_states, -np.inf)
        new[0] = metric[0] + float(self._signs[0, 0] @ r_k)
        # (prev 0, input 0) is first in state 0's predecessor list
        return new, np.zeros(self.num_states, dtype=np.int64)

    def step_back(self, metric: np.ndarray, r_k: np.ndarray) -> np.ndarray:
        """Backward recursion: best continuation metric from each state through one section."""
        bm = self.branch_metrics(r_k)
        return np.max(bm + metric[self.trellis.next_state], axis=1)

    def _traceback(self, decisions: np.ndarray, depth: int, state: int, stop: int) -> Iterator[tuple[int, int, int]]:
        """Yield (section, input, state after the section) from depth back to stop."""
        t = self.trellis
        for d in range(depth - 1, stop - 1, -1):
            j = decisions[d, state]
            yield d, int(t.prev_input[state, j]), state
            state = int(t.prev_state[state, j])

    def run(
        self,
        r: np.ndarray,
        end_state: int | None = 0,
        pins: Sequence[tuple[int, int]] = (),
        traceback_depth: int | None = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Decode a whole frame starting in state 0.

        pins are depth intervals [a, b] on which the path is held in state 0 without ACS.
        Returns the input index per section and the path state per depth.
        """
        length = len(r)
        pinned = np.zeros(length, dtype=bool)
        for a, b in pins:
            pinned[a:b] = True
        decisions = np.zeros((length, self.num_states), dtype=np.int64)
        inputs = np.zeros(length, dtype=np.int64)
        states = np.zeros(length + 1, dtype=np.int64)

        metric = self.initial_metric()
        for d in range(length):
            metric, decisions[d] = self.hold_zero(metric, r[d]) if pinned[d] else self.step(metric, r[d])
            if traceback_depth is not None and d + 1 >= traceback_depth:
                best = int(np.argmax(metric))
                for j, u, s in self._traceback(decisions, d + 1, best, d + 1 - traceback_depth):
                    inputs[j], states[j + 1] = u, s

        final = int(np.argmax(metric)) if end_state is None else end_state
        if not np.isfinite(metric[final]):
            raise FrameError(f"no surviving path ends in state {final}")
        stop = 0 if traceback_depth is None else max(0, length - traceback_depth + 1)
        for j, u, s in self._traceback(decisions, length, final, stop):
            inputs[j], states[j + 1] = u, s
        return inputs, states


def input_bits(inputs: np.ndarray, k0: int) -> np.ndarray:
    return ((inputs[:, None] >> np.arange(k0)) & 1).astype(np.uint8)


def check_frame(code: ConvCode, soft: SoftFrame, terminated: bool) -> None:
    if soft.width != code.n0:
        raise ShapeError(f"soft frame has {soft.width} values per block, code needs {code.n0}")
    if terminated and soft.length < code.nu:
        raise FrameError(f"a terminated frame needs at least nu={code.nu} blocks, got {soft.length}")


def finish(
    code: ConvCode,
    soft: SoftFrame,
    info_bits: np.ndarray,
    terminated: bool,
    complexity_units: float,
    path_states: np.ndarray,
    main_hard: HardFrame | None = None,
    main_info: np.ndarray | None = None,
) -> DecodeResult:
    """Re-encode the decided information and score it against the received frame."""
    info = info_bits[: soft.length - code.nu] if terminated else info_bits
    codeword = encode(code, info, terminate=terminated)
    return DecodeResult(
        info_hat=info,
        codeword_hat=codeword,
        metric=correlation(codeword, soft),
        complexity_units=complexity_units,
        path_states=path_states,
        main_hard=main_hard,
        main_info=main_info,
    )


def viterbi(
    code: ConvCode,
    soft: SoftFrame,
    terminated: bool = True,
    traceback_depth: int | None = None,
) -> DecodeResult:
    """Maximum-correlation decoding on the code trellis.

    Ties go to the lower predecessor state, then input 0.
    """
    check_frame(code, soft, terminated)
    engine = ViterbiEngine(trellis_for(code))
    inputs, states = engine.run(soft.blocks, end_state=0 if terminated else None, traceback_depth=traceback_depth)
    return finish(code, soft, input_bits(inputs, code.k0), terminated, float(soft.length), states)


def sst_estimate(code: ConvCode, soft: SoftFrame, mode: Mode, terminated: bool = True) -> np.ndarray:
    """Pre-decoder estimate aligned to the information sequence, tail blocks zeroed."""
    zh = hard_decision(soft)
    if mode == "general":
        v = predecode_general(code, zh).bits.copy()
    elif mode == "qli":
        qli_l = code.require_qli()
        v = np.zeros((soft.length, code.k0), dtype=np.uint8)
        v[: soft.length - qli_l] = predecode_qli(code, zh).bits[qli_l:]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if terminated:
        v[soft.length - code.nu :] = 0
    return v


def sst_main_input(
    code: ConvCode,
    soft: SoftFrame,
    mode: Mode,
    terminated: bool = True,
) -> tuple[np.ndarray, HardFrame, SoftFrame]:
    """Estimate v, the main decoder's hard input z + vG, and the sign-remapped soft input."""
    check_frame(code, soft, terminated)
    v = sst_estimate(code, soft, mode, terminated)
    main_hard = hard_decision(soft) ^ HardFrame(code.G.filter(v))
    return v, main_hard, remap_soft(soft, main_hard)


def sst_decode(
    code: ConvCode,
    soft: SoftFrame,
    mode: Mode = "general",
    terminated: bool = True,
    traceback_depth: int | None = None,
) -> DecodeResult:
    """Pre-decode, decode the error pattern on the remapped input, then add the two estimates."""
    v, main_hard, r = sst_main_input(code, soft, mode, terminated)
    engine = ViterbiEngine(trellis_for(code))
    inputs, states = engine.run(r.blocks, end_state=0 if terminated else None, traceback_depth=traceback_depth)
    u_hat = input_bits(inputs, code.k0)
    logger.debug("sst %s: %d nonzero main-decoder inputs", mode, int(np.count_nonzero(u_hat)))
    return finish(code, soft, v ^ u_hat, terminated, float(soft.length), states, main_hard, u_hat)
