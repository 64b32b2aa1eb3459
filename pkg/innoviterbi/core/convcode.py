"""Convolutional codes: definitions, encoding, syndromes, pre-decoders and trellises."""

from __future__ import annotations

import json
import tomllib
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .exceptions import (
    ConfigurationError,
    ConsistencyError,
    FrameError,
    NoPolynomialInverseError,
    ShapeError,
    StateBudgetError,
    UnsupportedCodeError,
)
from .gf2poly import (
    ONE,
    Gf2Poly,
    PolyMatrix,
    couple_left_inverse,
    left_inverse_transpose,
    right_inverse,
    syndrome_former,
)
from .log import get_logger

logger = get_logger(__name__)

Mode = Literal["general", "qli"]
MAX_STATE_BITS = 24


def _as_bits(blocks: np.ndarray | list, width: int | None = None) -> np.ndarray:
    arr = np.asarray(blocks, dtype=np.uint8)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if width in (None, 1) else arr.reshape(-1, width)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D block array, got shape {arr.shape}")
    if width is not None and arr.shape[1] != width:
        raise ShapeError(f"blocks have {arr.shape[1]} bits, expected {width}")
    if arr.size and arr.max() > 1:
        raise ShapeError("block entries must be bits")
    return arr


@dataclass(frozen=True, eq=False)
class HardFrame:
    """Hard bits, one row of n0 bits per time step."""

    blocks: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", _as_bits(self.blocks))

    @classmethod
    def from_strings(cls, blocks: list[str]) -> HardFrame:
        """Build from per-block bit strings such as ["11", "10"]."""
        return cls(np.array([[int(ch) for ch in b] for b in blocks], dtype=np.uint8))

    def to_strings(self) -> list[str]:
        return ["".join(str(int(b)) for b in row) for row in self.blocks]

    @property
    def length(self) -> int:
        return int(self.blocks.shape[0])

    @property
    def width(self) -> int:
        return int(self.blocks.shape[1])

    def __xor__(self, other: HardFrame) -> HardFrame:
        if self.blocks.shape != other.blocks.shape:
            raise ShapeError(f"cannot combine frames of shape {self.blocks.shape} and {other.blocks.shape}")
        return HardFrame(self.blocks ^ other.blocks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HardFrame):
            return NotImplemented
        return self.blocks.shape == other.blocks.shape and bool(np.array_equal(self.blocks, other.blocks))

    def __len__(self) -> int:
        return self.length


@dataclass(frozen=True, eq=False)
class Estimate:
    """Pre-decoder output; row j estimates the information block at time j - delay."""

    bits: np.ndarray
    delay: int

    def aligned(self, delay: int) -> np.ndarray:
        """Re-index so that row j estimates time j - delay (zero-filled at the start)."""
        shift = delay - self.delay
        if shift < 0:
            raise ValueError(f"cannot advance an estimate with delay {self.delay} to delay {delay}")
        out = np.zeros_like(self.bits)
        out[shift:] = self.bits[: len(self.bits) - shift]
        return out


class ConvCode(BaseModel):
    """A validated convolutional code bundle."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = ""
    G: PolyMatrix
    GInv: PolyMatrix
    H: PolyMatrix
    HInvT: PolyMatrix
    nu: int = Field(ge=1)
    qli_L: int | None = None

    @classmethod
    def from_generators(
        cls,
        g: PolyMatrix,
        name: str = "",
        ginv: PolyMatrix | None = None,
        h: PolyMatrix | None = None,
        qli: bool | None = None,
    ) -> ConvCode:
        """Validate G (and optional G^-1, H) and derive what is missing.

        qli=None detects the quick-look-in structure, True insists on it, False ignores it.
        """
        k0, n0 = g.shape
        if n0 <= k0:
            raise ShapeError(f"a convolutional code needs n0 > k0, got {g.shape}")
        nu = max(g.row_degrees())
        if nu < 1:
            raise UnsupportedCodeError("generator has no memory (block code)")
        if ginv is None:
            ginv = right_inverse(g)
        elif not (g @ ginv).is_identity():
            raise NoPolynomialInverseError("supplied G^-1 is not a right inverse of G")
        if h is None:
            h = syndrome_former(g).T
        elif not (g @ h.T).is_zero():
            raise ShapeError("supplied H does not satisfy G H^T = 0")
        h_inv_t = couple_left_inverse(left_inverse_transpose(h), g, ginv)

        detected = _qli_offset(g)
        if qli and detected is None:
            raise UnsupportedCodeError(f"code {name or g!r} is not quick-look-in")
        qli_l = detected if qli is not False else None
        logger.debug("code %s: nu=%d qli_L=%s", name, nu, qli_l)
        return cls(name=name, G=g, GInv=ginv, H=h, HInvT=h_inv_t, nu=nu, qli_L=qli_l)

    @property
    def k0(self) -> int:
        return self.G.rows

    @property
    def n0(self) -> int:
        return self.G.cols

    @property
    def rate(self) -> float:
        return self.k0 / self.n0

    @property
    def HT(self) -> PolyMatrix:
        return self.H.T

    @property
    def F(self) -> PolyMatrix:
        """Smoothing pre-decoder (1, 1)^T."""
        return PolyMatrix([[ONE]] * self.n0)

    @property
    def is_qli(self) -> bool:
        return self.qli_L is not None

    def require_qli(self) -> int:
        if self.qli_L is None:
            raise UnsupportedCodeError(f"code {self.name or '?'} is not quick-look-in")
        return self.qli_L

    def describe(self) -> dict[str, object]:
        return {
            "name": self.name,
            "k0": self.k0,
            "n0": self.n0,
            "nu": self.nu,
            "G": [[e.pretty() for e in row] for row in self.G.entries],
            "G_inv": [[e.pretty() for e in row] for row in self.GInv.entries],
            "H": [[e.pretty() for e in row] for row in self.H.entries],
            "qli_L": self.qli_L,
        }


def _qli_offset(g: PolyMatrix) -> int | None:
    if g.shape != (1, 2):
        return None
    diff = g[0, 0] + g[0, 1]
    nu = max(g.row_degrees())
    if diff.is_zero() or diff != Gf2Poly.monomial(diff.degree):
        return None
    return diff.degree if 1 <= diff.degree <= nu - 1 else None


class CodeSpec(BaseModel):
    """On-disk code definition."""

    model_config = ConfigDict(extra="forbid")

    name: str = ""
    generators: list[list[str]]
    notation: Literal["binary", "octal"] = "binary"
    ginv: list[list[str]] | None = None
    h: list[list[str]] | None = None
    qli: bool | None = None

    def _matrix(self, rows: list[list[str]]) -> PolyMatrix:
        if self.notation == "octal":
            return PolyMatrix([[Gf2Poly.from_octal(s) for s in row] for row in rows])
        return PolyMatrix.from_strings(rows)

    def to_code(self) -> ConvCode:
        return ConvCode.from_generators(
            self._matrix(self.generators),
            name=self.name,
            ginv=self._matrix(self.ginv) if self.ginv else None,
            h=self._matrix(self.h) if self.h else None,
            qli=self.qli,
        )


BUILTIN_CODES: dict[str, CodeSpec] = {
    "C1": CodeSpec(name="C1", generators=[["111", "101"]], qli=True),
    "C2": CodeSpec(name="C2", generators=[["1101101", "1111101"]], qli=True),
    "C3": CodeSpec(name="C3", generators=[["1100111", "1011101"]]),
    "C4": CodeSpec(name="C4", generators=[["11001", "10111"]]),
}


@lru_cache(maxsize=None)
def _builtin(name: str) -> ConvCode:
    return BUILTIN_CODES[name].to_code()


def load_code(ref: str | Path) -> ConvCode:
    """Resolve a registry id (C1, C2, ...) or a JSON/TOML code file."""
    key = str(ref).upper()
    if key in BUILTIN_CODES:
        return _builtin(key)
    path = Path(ref)
    if not path.exists():
        raise ConfigurationError(f"unknown code {ref!r}: not a built-in id and no such file")
    try:
        if path.suffix.lower() == ".toml":
            data = tomllib.loads(path.read_text())
        else:
            data = json.loads(path.read_text())
        spec = CodeSpec(**data)
    except (ValueError, TypeError) as e:
        raise ConfigurationError(f"invalid code file {path}: {e}") from e
    return spec.to_code()


def encode(code: ConvCode, info: np.ndarray | list, terminate: bool = True) -> HardFrame:
    """y_k = i_k G(D); with terminate, nu zero blocks flush the encoder."""
    bits = _as_bits(info, code.k0)
    if terminate:
        bits = np.vstack([bits, np.zeros((code.nu, code.k0), dtype=np.uint8)])
    return HardFrame(code.G.filter(bits))


def syndrome(code: ConvCode, frame: HardFrame) -> np.ndarray:
    """zeta_k = z_k H^T(D), shape (M, n0 - k0)."""
    if frame.width != code.n0:
        raise ShapeError(f"frame blocks have {frame.width} bits, code needs {code.n0}")
    return code.HT.filter(frame.blocks)


def predecode_general(code: ConvCode, frame: HardFrame) -> Estimate:
    """Filtered estimate z_k G^-1."""
    if frame.width != code.n0:
        raise ShapeError(f"frame blocks have {frame.width} bits, code needs {code.n0}")
    return Estimate(code.GInv.filter(frame.blocks), delay=0)


def predecode_qli(code: ConvCode, frame: HardFrame) -> Estimate:
    """Smoothed estimate z_k F = z_k(1) + z_k(2), which estimates i_{k-L}."""
    qli_l = code.require_qli()
    if frame.width != code.n0:
        raise ShapeError(f"frame blocks have {frame.width} bits, code needs {code.n0}")
    return Estimate(code.F.filter(frame.blocks), delay=qli_l)


def main_input_hard(code: ConvCode, frame: HardFrame, mode: Mode = "general") -> HardFrame:
    """Hard input of the main decoder.

    general: r = z + (z G^-1) G, checked against zeta (H^-1)^T.
    qli: row j is eta_j = z_j + ((z F) G)_{j+L}, checked against (zeta_{j+L}, zeta_{j+L});
    the result is L blocks shorter than the frame.
    """
    zeta = syndrome(code, frame)
    z = frame.blocks
    if mode == "general":
        v = predecode_general(code, frame).bits
        r = z ^ code.G.filter(v)
        if not np.array_equal(r, code.HInvT.filter(zeta)):
            raise ConsistencyError("main decoder input disagrees with zeta (H^-1)^T")
        return HardFrame(r)
    if mode == "qli":
        qli_l = code.require_qli()
        s = predecode_qli(code, frame).bits
        eta = z[: len(z) - qli_l] ^ code.G.filter(s)[qli_l:]
        if not np.array_equal(eta, np.repeat(zeta[qli_l:], code.n0, axis=1)):
            raise ConsistencyError("QLI main decoder input disagrees with (zeta, zeta)")
        return HardFrame(eta)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True, eq=False)
class TrellisModule:
    """One section of a controller-canonical encoder trellis.

    State bits of input row r occupy bits [r*nu, (r+1)*nu); within a row bit j holds the
    input j+1 steps back, so the newest input sits in bit 0.
    """

    k0: int
    n0: int
    nu: int
    next_state: np.ndarray
    output_bits: np.ndarray
    prev_state: np.ndarray
    prev_input: np.ndarray

    @property
    def num_states(self) -> int:
        return int(self.next_state.shape[0])

    @property
    def num_inputs(self) -> int:
        return int(self.next_state.shape[1])

    @property
    def signs(self) -> np.ndarray:
        """+1 for label bit 0, -1 for label bit 1."""
        return 1.0 - 2.0 * self.output_bits.astype(np.float64)

    def state_label(self, state: int) -> str:
        """Bits oldest first, e.g. "01" is (u_{k-1}, u_k) = (0, 1) for nu = 2."""
        return format(state, f"0{self.k0 * self.nu}b")

    def walk(self, info: np.ndarray) -> np.ndarray:
        """Output labels along the path driven by info from the zero state."""
        info = _as_bits(info, self.k0)
        state = 0
        out = np.zeros((len(info), self.n0), dtype=np.uint8)
        for k, block in enumerate(info):
            u = int(sum(int(b) << r for r, b in enumerate(block)))
            out[k] = self.output_bits[state, u]
            state = int(self.next_state[state, u])
        return out


def build_code_trellis(code: ConvCode) -> TrellisModule:
    """Encoder trellis with 2^(k0 nu) states."""
    k0, n0, nu = code.k0, code.n0, code.nu
    if k0 * nu > MAX_STATE_BITS:
        raise StateBudgetError(f"k0*nu = {k0 * nu} exceeds the {MAX_STATE_BITS}-bit state budget")
    num_states, num_inputs = 1 << (k0 * nu), 1 << k0
    mask = (1 << nu) - 1
    taps = [[code.G[r, j].bits for j in range(n0)] for r in range(k0)]

    next_state = np.zeros((num_states, num_inputs), dtype=np.int64)
    output_bits = np.zeros((num_states, num_inputs, n0), dtype=np.uint8)
    for s in range(num_states):
        for u in range(num_inputs):
            nxt = 0
            for r in range(k0):
                reg = (s >> (r * nu)) & mask
                history = (reg << 1) | ((u >> r) & 1)
                nxt |= (history & mask) << (r * nu)
                for j in range(n0):
                    output_bits[s, u, j] ^= (taps[r][j] & history).bit_count() & 1
            next_state[s, u] = nxt

    incoming: list[list[tuple[int, int]]] = [[] for _ in range(num_states)]
    for s in range(num_states):
        for u in range(num_inputs):
            incoming[int(next_state[s, u])].append((s, u))
    if any(len(preds) != num_inputs for preds in incoming):
        raise ConsistencyError("trellis in-degree differs from 2^k0")
    prev_state = np.array([[p[0] for p in sorted(preds)] for preds in incoming], dtype=np.int64)
    prev_input = np.array([[p[1] for p in sorted(preds)] for preds in incoming], dtype=np.int64)
    return TrellisModule(k0, n0, nu, next_state, output_bits, prev_state, prev_input)


@dataclass(frozen=True)
class ErrorStateMap:
    """sigma_k = e_k U(D), the observer-form state of the syndrome former."""

    U: PolyMatrix

    def states(self, errors: np.ndarray) -> np.ndarray:
        """Error-trellis states for an error block sequence, shape (M, nu)."""
        return self.U.filter(errors)


def error_state_map(code: ConvCode) -> ErrorStateMap:
    """U[l][i-1] = sum_{j >= i} h_{l,j} D^(j-i) for the single syndrome-former column h."""
    if code.n0 - code.k0 != 1:
        raise UnsupportedCodeError("error-trellis states are defined for k0 = n0 - 1 only")
    h_t = code.HT
    nu_h = h_t.max_degree()
    rows = []
    for j in range(code.n0):
        h = h_t[j, 0].bits
        rows.append([Gf2Poly(h >> i) for i in range(1, nu_h + 1)])
    return ErrorStateMap(PolyMatrix(rows))


def _tap_sum(poly: Gf2Poly, seq: np.ndarray, k: int) -> int:
    return int(sum(int(seq[k - d]) for d in poly.support() if 0 <= k - d < len(seq)) & 1)


def state_correspondence(
    code: ConvCode,
    mode: Mode,
    u_seq: np.ndarray,
    zeta_seq: np.ndarray,
    k: int,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Pair the main decoder's code-trellis state at time k with the error-trellis state.

    general: sigma_k = (u G U)_k + (zeta (H^-1)^T U)_k.
    qli: sigma_k = (u G U)_{k+L} + (zeta (1,1) U)_{k+L}.
    """
    if code.k0 != 1:
        raise UnsupportedCodeError("state correspondence is implemented for k0 = 1")
    u_seq = np.asarray(u_seq, dtype=np.uint8).ravel()
    zeta_seq = np.asarray(zeta_seq, dtype=np.uint8).ravel()
    u_map = error_state_map(code).U
    gu = code.G @ u_map
    if mode == "general":
        at, zeta_u = k, code.HInvT @ u_map
    else:
        qli_l = code.require_qli()
        if qli_l != 1:
            logger.warning("QLI state correspondence with L=%d uses the unverified general-L form", qli_l)
        at, zeta_u = k + qli_l, PolyMatrix([[ONE] * code.n0]) @ u_map
    if not 0 <= k < len(u_seq) or at >= min(len(u_seq), len(zeta_seq)):
        raise FrameError(f"time {k} is out of range for sequences of length {len(u_seq)}")
    code_state = tuple(int(u_seq[k - j]) if k - j >= 0 else 0 for j in range(code.nu - 1, -1, -1))
    error_state = tuple(
        _tap_sum(gu[0, i], u_seq, at) ^ _tap_sum(zeta_u[0, i], zeta_seq, at) for i in range(u_map.cols)
    )
    return code_state, error_state
