"""BPSK over a memoryless AWGN channel, hard decisions and receiver quantization."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.special import erfc

from .convcode import HardFrame
from .exceptions import ShapeError, ValidationError


class QuantizerConfig(BaseModel):
    """Uniform midrise quantizer; levels=0 disables it, step=None means c/2."""

    levels: Literal[0, 8] = 0
    step: float | None = Field(default=None, gt=0)


class ChannelConfig(BaseModel):
    """Channel parameters; es_n0 is the linear symbol SNR."""

    es_n0: float = Field(gt=0)
    seed: int = 0
    quantizer: QuantizerConfig = Field(default_factory=QuantizerConfig)
    ebn0_db: float | None = None

    @model_validator(mode="after")
    def _finite(self) -> ChannelConfig:
        if not math.isfinite(self.es_n0):
            raise ValueError("es_n0 must be finite")
        return self

    @classmethod
    def from_ebn0(
        cls,
        ebn0_db: float,
        rate: float,
        seed: int = 0,
        quantize_levels: Literal[0, 8] = 0,
        quantize_step: float | None = None,
    ) -> ChannelConfig:
        """E_s = R E_b."""
        return cls(
            es_n0=rate * 10 ** (ebn0_db / 10),
            seed=seed,
            quantizer=QuantizerConfig(levels=quantize_levels, step=quantize_step),
            ebn0_db=ebn0_db,
        )

    @property
    def c(self) -> float:
        """Signal amplitude sqrt(2 E_s / N_0) relative to unit-variance noise."""
        return math.sqrt(2 * self.es_n0)

    def rng(self, stream: Sequence[int] = ()) -> np.random.Generator:
        """Independent generator for a stream index derived from the master seed."""
        return np.random.default_rng(np.random.SeedSequence([self.seed, *stream]))


@dataclass(frozen=True, eq=False)
class SoftFrame:
    """Received reals, one row of n0 values per time step."""

    blocks: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.blocks, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-D block array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("soft values must be finite")
        object.__setattr__(self, "blocks", arr)

    @property
    def length(self) -> int:
        return int(self.blocks.shape[0])

    @property
    def width(self) -> int:
        return int(self.blocks.shape[1])

    def __len__(self) -> int:
        return self.length

    def to_rows(self) -> list[tuple[int, int, float]]:
        """(k, l, z) triples for CSV export."""
        return [(k, j, float(v)) for k, row in enumerate(self.blocks) for j, v in enumerate(row)]


def q_function(x: float | np.ndarray) -> float | np.ndarray:
    """Gaussian tail probability Q(x)."""
    return 0.5 * erfc(np.asarray(x) / math.sqrt(2.0))


def transmit(
    cfg: ChannelConfig,
    codeword: HardFrame,
    rng: np.random.Generator | None = None,
    noise: bool = True,
) -> SoftFrame:
    """z = c x + w with x = +1 for bit 0 and -1 for bit 1."""
    x = 1.0 - 2.0 * codeword.blocks.astype(np.float64)
    z = cfg.c * x
    if noise:
        rng = rng or cfg.rng()
        z = z + rng.standard_normal(z.shape)
    return SoftFrame(z)


def hard_decision(frame: SoftFrame) -> HardFrame:
    """z >= 0 -> 0, z < 0 -> 1."""
    return HardFrame((frame.blocks < 0).astype(np.uint8))


def remap_soft(frame: SoftFrame, target_hard: HardFrame) -> SoftFrame:
    """Keep |z|, take the sign from target_hard."""
    if frame.blocks.shape != target_hard.blocks.shape:
        raise ShapeError(f"soft frame {frame.blocks.shape} and hard target {target_hard.blocks.shape} differ")
    magnitude = np.abs(frame.blocks)
    return SoftFrame(np.where(target_hard.blocks == 0, magnitude, -magnitude))


def channel_epsilon(cfg: ChannelConfig) -> float:
    """Crossover probability of the hard-decision channel, Q(c)."""
    return float(q_function(cfg.c))


def quantize(frame: SoftFrame, cfg: ChannelConfig) -> SoftFrame:
    """8-level midrise quantizer: thresholds 0, ±step, ±2 step, ±3 step; outputs at cell midpoints.

    Inputs beyond ±3 step saturate to ±3.5 step, the midpoint of the outer cell [3 step, 4 step).
    Every reproduction level is an odd multiple of step/2, so there is no 3.25 step level.
    """
    if cfg.quantizer.levels == 0:
        raise ValidationError("quantizer is disabled in this channel configuration")
    step = cfg.quantizer.step or cfg.c / 2
    cells = np.minimum(np.floor(np.abs(frame.blocks) / step), cfg.quantizer.levels // 2 - 1)
    magnitude = (cells + 0.5) * step
    return SoftFrame(np.where(frame.blocks >= 0, magnitude, -magnitude))


def receive(cfg: ChannelConfig, codeword: HardFrame, rng: np.random.Generator | None = None) -> SoftFrame:
    """transmit, then quantize when the configuration asks for it."""
    soft = transmit(cfg, codeword, rng=rng)
    return quantize(soft, cfg) if cfg.quantizer.levels else soft
