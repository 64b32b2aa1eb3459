"""Linear block codes and their two-stage (pre-decoder + error-pattern ML) decoder."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict

from .exceptions import ConfigurationError, ConsistencyError, NoPolynomialInverseError, OracleSizeError, ShapeError
from .log import get_logger

logger = get_logger(__name__)

MAX_ORACLE_BITS = 20


def _bits(m: np.ndarray | list, ndim: int = 2) -> np.ndarray:
    arr = np.asarray(m, dtype=np.uint8)
    if arr.ndim != ndim:
        raise ShapeError(f"expected a {ndim}-D bit array, got shape {arr.shape}")
    if arr.size and arr.max() > 1:
        raise ShapeError("entries must be bits")
    return arr


def gf2_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64) & 1).astype(np.uint8)


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int], np.ndarray]:
    """Reduced row echelon form over GF(2).

    Returns (R, pivot columns, E) with R = E m and E invertible.
    """
    rows, cols = m.shape
    work = np.hstack([m.copy(), np.eye(rows, dtype=np.uint8)])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        hits = np.flatnonzero(work[r:, c])
        if len(hits) == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        for i in np.flatnonzero(work[:, c]):
            if i != r:
                work[i] ^= work[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return work[:, :cols], pivots, work[:, cols:]


def block_right_inverse(g: np.ndarray | list) -> np.ndarray:
    """X with g X = I over GF(2); (I | S) gives (I | 0)^T."""
    g = _bits(g)
    k = g.shape[0]
    _, pivots, e = rref(g)
    if len(pivots) < k:
        raise NoPolynomialInverseError(f"generator has rank {len(pivots)} < k={k}")
    x = np.zeros((g.shape[1], k), dtype=np.uint8)
    x[pivots, :] = e
    return x


def null_space(g: np.ndarray) -> np.ndarray:
    """Rows spanning {h : g h^T = 0}."""
    reduced, pivots, _ = rref(g)
    n = g.shape[1]
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = np.zeros(n, dtype=np.uint8)
        v[free] = 1
        for i, p in enumerate(pivots):
            v[p] = reduced[i, free]
        basis.append(v)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), n)


@dataclass(frozen=True, eq=False)
class BlockCode:
    """G (k x n), H ((n-k) x n), G^-1 (n x k) and the coupled (H^-1)^T ((n-k) x n)."""

    name: str
    G: np.ndarray
    H: np.ndarray
    GInv: np.ndarray
    HInvT: np.ndarray

    @classmethod
    def from_generator(
        cls,
        g: np.ndarray | list,
        name: str = "",
        h: np.ndarray | list | None = None,
        ginv: np.ndarray | list | None = None,
    ) -> BlockCode:
        g = _bits(g)
        k, n = g.shape
        if n <= k:
            raise ShapeError(f"a block code needs n > k, got {g.shape}")
        ginv = block_right_inverse(g) if ginv is None else _bits(ginv)
        h = null_space(g) if h is None else _bits(h)
        if h.shape != (n - k, n):
            raise ShapeError(f"H must be {(n - k, n)}, got {h.shape}")
        if not np.array_equal(gf2_matmul(g, ginv), np.eye(k, dtype=np.uint8)):
            raise NoPolynomialInverseError("supplied G^-1 is not a right inverse of G")
        if gf2_matmul(g, h.T).any():
            raise ShapeError("G H^T is not zero")
        projector = np.eye(n, dtype=np.uint8) ^ gf2_matmul(ginv, g)
        h_inv_t = gf2_matmul(block_right_inverse(h).T, projector)
        if not np.array_equal(gf2_matmul(ginv, g) ^ gf2_matmul(h.T, h_inv_t), np.eye(n, dtype=np.uint8)):
            raise ConsistencyError("G^-1 G + H^T (H^-1)^T differs from the identity")
        return cls(name=name, G=g, H=h, GInv=ginv, HInvT=h_inv_t)

    @property
    def k(self) -> int:
        return int(self.G.shape[0])

    @property
    def n(self) -> int:
        return int(self.G.shape[1])

    @property
    def is_systematic(self) -> bool:
        return bool(np.array_equal(self.G[:, : self.k], np.eye(self.k, dtype=np.uint8)))

    def encode(self, message: np.ndarray | list) -> np.ndarray:
        return gf2_matmul(_bits(message, 1), self.G)

    def codebook(self) -> tuple[np.ndarray, np.ndarray]:
        """All 2^k messages (in counting order) and their codewords."""
        if self.k > MAX_ORACLE_BITS:
            raise OracleSizeError(f"k={self.k} exceeds the {MAX_ORACLE_BITS}-bit exhaustive search limit")
        idx = np.arange(1 << self.k, dtype=np.int64)
        messages = ((idx[:, None] >> np.arange(self.k)) & 1).astype(np.uint8)
        return messages, gf2_matmul(messages, self.G)


def hamming74() -> BlockCode:
    p = np.array([[1, 1, 0], [0, 1, 1], [1, 1, 1], [1, 0, 1]], dtype=np.uint8)
    return BlockCode.from_generator(np.hstack([np.eye(4, dtype=np.uint8), p]), name="hamming74")


def extended_hamming84() -> BlockCode:
    g = hamming74().G
    return BlockCode.from_generator(np.hstack([g, g.sum(axis=1, keepdims=True) & 1]), name="hamming84")


BLOCK_CODES = {"hamming74": hamming74, "hamming84": extended_hamming84}


class BlockCodeSpec(BaseModel):
    """On-disk block code: generator rows as bit lists or bit strings."""

    model_config = ConfigDict(extra="forbid")

    name: str = ""
    generator: list[list[int]] | list[str]
    parity_check: list[list[int]] | list[str] | None = None

    @staticmethod
    def _rows(rows: list[list[int]] | list[str]) -> np.ndarray:
        return np.array([[int(b) for b in row] for row in rows], dtype=np.uint8)

    def to_code(self) -> BlockCode:
        h = self._rows(self.parity_check) if self.parity_check else None
        return BlockCode.from_generator(self._rows(self.generator), name=self.name, h=h)


def load_block_code(ref: str | Path) -> BlockCode:
    """Resolve a built-in name (hamming74, hamming84) or a JSON file of bit rows."""
    key = str(ref).lower()
    if key in BLOCK_CODES:
        return BLOCK_CODES[key]()
    path = Path(ref)
    if not path.exists():
        raise ConfigurationError(f"unknown block code {ref!r}: not a built-in name and no such file")
    try:
        spec = BlockCodeSpec(**json.loads(path.read_text()))
    except (ValueError, TypeError) as e:
        raise ConfigurationError(f"invalid block code file {path}: {e}") from e
    return spec.to_code()


def block_syndrome(code: BlockCode, zh: np.ndarray | list) -> np.ndarray:
    """zeta = z^h H^T."""
    zh = _bits(zh, 1)
    if len(zh) != code.n:
        raise ShapeError(f"received word has {len(zh)} bits, code length is {code.n}")
    return gf2_matmul(zh, code.H.T)


def exhaustive_ml(code: BlockCode, soft: np.ndarray | list) -> tuple[np.ndarray, np.ndarray]:
    """Maximum-correlation message and codeword; ties go to the lower message index."""
    z = np.asarray(soft, dtype=np.float64)
    if z.shape != (code.n,):
        raise ShapeError(f"soft vector must have {code.n} entries, got shape {z.shape}")
    messages, codewords = code.codebook()
    best = int(np.argmax((1.0 - 2.0 * codewords) @ z))
    return messages[best], codewords[best]


def two_stage_decode(code: BlockCode, soft: np.ndarray | list) -> tuple[np.ndarray, np.ndarray]:
    """Pre-decode with G^-1, ML-decode the error pattern on xi, add the two estimates.

    Returns (info_hat, xi) with xi_j = +-|z_j| signed by xi^h = z^h + (z^h G^-1) G.
    """
    z = np.asarray(soft, dtype=np.float64)
    if z.shape != (code.n,):
        raise ShapeError(f"soft vector must have {code.n} entries, got shape {z.shape}")
    zh = (z < 0).astype(np.uint8)
    i_hat = gf2_matmul(zh, code.GInv)
    xi_h = zh ^ gf2_matmul(i_hat, code.G)
    if code.is_systematic and xi_h[: code.k].any():
        raise ConsistencyError("systematic code: the first k bits of xi^h must vanish")
    xi = np.where(xi_h == 0, np.abs(z), -np.abs(z))
    u_hat, _ = exhaustive_ml(code, xi)
    return i_hat ^ u_hat, xi
