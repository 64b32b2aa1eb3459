"""Polynomials and polynomial matrices over GF(2)[D].

A polynomial is stored as a nonnegative integer whose bit j is the coefficient of D^j,
so addition is XOR and multiplication is carry-less. Matrices are immutable grids of
such polynomials. The Smith (invariant-factor) decomposition supplies right inverses,
syndrome formers and left inverses of syndrome formers.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .exceptions import DegreeOverflowError, NoPolynomialInverseError, ShapeError, ValidationError
from .log import get_logger

logger = get_logger(__name__)

MAX_DEGREE = 64
ZERO_DEGREE = -1


def _clmul(a: int, b: int) -> int:
    if a < b:
        a, b = b, a
    c = 0
    while b:
        if b & 1:
            c ^= a
        a <<= 1
        b >>= 1
    return c


def _divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    n = b.bit_length()
    q = 0
    while a.bit_length() >= n:
        shift = a.bit_length() - n
        q |= 1 << shift
        a ^= b << shift
    return q, a


class Gf2Poly:
    """Polynomial over GF(2) in the delay operator D."""

    __slots__ = ("_bits",)

    def __init__(self, bits: int = 0) -> None:
        if bits < 0:
            raise ValidationError(f"polynomial bit pattern must be nonnegative, got {bits}")
        if bits.bit_length() - 1 > MAX_DEGREE:
            raise DegreeOverflowError(
                f"polynomial degree {bits.bit_length() - 1} exceeds cap {MAX_DEGREE}",
                {"degree": bits.bit_length() - 1},
            )
        self._bits = bits

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> Gf2Poly:
        """Build from coefficients listed by increasing power of D."""
        bits = 0
        for power, c in enumerate(coeffs):
            if c not in (0, 1):
                raise ValidationError(f"coefficient {c!r} is not a bit")
            bits |= int(c) << power
        return cls(bits)

    @classmethod
    def from_string(cls, text: str) -> Gf2Poly:
        """Parse an LSB-first binary string: "111" is 1+D+D^2, "011" is D+D^2."""
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValidationError(f"not a binary coefficient string: {text!r}")
        return cls.from_coeffs(int(ch) for ch in text)

    @classmethod
    def from_octal(cls, text: str) -> Gf2Poly:
        """Parse octal shorthand, most significant bit = coefficient of D^0 (7 -> 1+D+D^2, 5 -> 1+D^2)."""
        text = text.strip().removeprefix("0o")
        try:
            value = int(text, 8)
        except ValueError as e:
            raise ValidationError(f"not an octal generator: {text!r}") from e
        if value == 0:
            return cls(0)
        return cls.from_string(format(value, "b"))

    @classmethod
    def monomial(cls, power: int) -> Gf2Poly:
        """D^power."""
        if power < 0:
            raise ValidationError("negative powers of D are not polynomials")
        return cls(1 << power)

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def degree(self) -> int:
        """Degree, or ZERO_DEGREE (-1) for the zero polynomial."""
        return self._bits.bit_length() - 1

    def is_zero(self) -> bool:
        return self._bits == 0

    def coeffs(self) -> np.ndarray:
        """Coefficient array indexed by power of D."""
        return np.array([(self._bits >> j) & 1 for j in range(self.degree + 1)], dtype=np.uint8)

    def support(self) -> list[int]:
        """Powers of D with coefficient 1."""
        return [j for j in range(self.degree + 1) if (self._bits >> j) & 1]

    def to_string(self) -> str:
        if self._bits == 0:
            return "0"
        return "".join(str((self._bits >> j) & 1) for j in range(self.degree + 1))

    def to_octal(self) -> str:
        if self._bits == 0:
            return "0"
        return format(int(self.to_string(), 2), "o")

    def pretty(self) -> str:
        if self._bits == 0:
            return "0"
        terms = []
        for j in self.support():
            terms.append("1" if j == 0 else "D" if j == 1 else f"D^{j}")
        return "+".join(terms)

    def shift(self, n: int) -> Gf2Poly:
        """Multiply by D^n."""
        return Gf2Poly(self._bits << n)

    def __add__(self, other: Gf2Poly) -> Gf2Poly:
        return Gf2Poly(self._bits ^ other._bits)

    __sub__ = __add__

    def __mul__(self, other: Gf2Poly) -> Gf2Poly:
        return Gf2Poly(_clmul(self._bits, other._bits))

    def __divmod__(self, other: Gf2Poly) -> tuple[Gf2Poly, Gf2Poly]:
        q, r = _divmod(self._bits, other._bits)
        return Gf2Poly(q), Gf2Poly(r)

    def __floordiv__(self, other: Gf2Poly) -> Gf2Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Gf2Poly) -> Gf2Poly:
        return divmod(self, other)[1]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Gf2Poly):
            return self._bits == other._bits
        if isinstance(other, int):
            return self._bits == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Gf2Poly", self._bits))

    def __bool__(self) -> bool:
        return self._bits != 0

    def __repr__(self) -> str:
        return f"Gf2Poly({self.pretty()})"

    def __str__(self) -> str:
        return self.pretty()


ZERO = Gf2Poly(0)
ONE = Gf2Poly(1)


def poly_mul_add(a: Gf2Poly, b: Gf2Poly, acc: Gf2Poly) -> Gf2Poly:
    """Return acc + a*b."""
    return Gf2Poly(acc.bits ^ _clmul(a.bits, b.bits))


def _as_poly(value: Gf2Poly | int | str) -> Gf2Poly:
    if isinstance(value, Gf2Poly):
        return value
    if isinstance(value, str):
        return Gf2Poly.from_string(value)
    return Gf2Poly(int(value))


def filter_bits(bits: np.ndarray, poly: Gf2Poly) -> np.ndarray:
    """Pass a bit sequence through the causal filter poly(D), truncated to the input length."""
    length = len(bits)
    if poly.is_zero() or length == 0:
        return np.zeros(length, dtype=np.uint8)
    out = np.convolve(bits.astype(np.int64), poly.coeffs().astype(np.int64))[:length]
    return (out & 1).astype(np.uint8)


class PolyMatrix:
    """Immutable matrix over GF(2)[D]."""

    __slots__ = ("_entries", "rows", "cols")

    def __init__(self, entries: Sequence[Sequence[Gf2Poly | int | str]]) -> None:
        grid = tuple(tuple(_as_poly(e) for e in row) for row in entries)
        if not grid or not grid[0]:
            raise ShapeError("a polynomial matrix needs at least one row and one column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise ShapeError("ragged polynomial matrix")
        self._entries = grid
        self.rows = len(grid)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> PolyMatrix:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> PolyMatrix:
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]]) -> PolyMatrix:
        """Build from LSB-first coefficient strings, the JSON layout of code files."""
        return cls([[Gf2Poly.from_string(s) for s in row] for row in rows])

    @classmethod
    def _from_ints(cls, rows: Sequence[Sequence[int]]) -> PolyMatrix:
        return cls([[Gf2Poly(v) for v in row] for row in rows])

    def to_strings(self) -> list[list[str]]:
        return [[e.to_string() for e in row] for row in self._entries]

    def _ints(self) -> list[list[int]]:
        return [[e.bits for e in row] for row in self._entries]

    @property
    def entries(self) -> tuple[tuple[Gf2Poly, ...], ...]:
        return self._entries

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, index: tuple[int, int]) -> Gf2Poly:
        i, j = index
        return self._entries[i][j]

    def row(self, i: int) -> tuple[Gf2Poly, ...]:
        return self._entries[i]

    def col(self, j: int) -> tuple[Gf2Poly, ...]:
        return tuple(row[j] for row in self._entries)

    def columns(self, start: int, stop: int | None = None) -> PolyMatrix:
        stop = self.cols if stop is None else stop
        return PolyMatrix([row[start:stop] for row in self._entries])

    def transpose(self) -> PolyMatrix:
        return PolyMatrix([self.col(j) for j in range(self.cols)])

    @property
    def T(self) -> PolyMatrix:
        return self.transpose()

    def max_degree(self) -> int:
        return max(e.degree for row in self._entries for e in row)

    def row_degrees(self) -> list[int]:
        return [max(e.degree for e in row) for row in self._entries]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self._entries for e in row)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == PolyMatrix.identity(self.rows)

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape} matrices")
        rows = zip(self._entries, other._entries, strict=True)
        return PolyMatrix([[a + b for a, b in zip(ra, rb, strict=True)] for ra, rb in rows])

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        return mat_mul(self, other)

    def scale(self, poly: Gf2Poly) -> PolyMatrix:
        return PolyMatrix([[poly * e for e in row] for row in self._entries])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(e.pretty() for e in row) for row in self._entries)
        return f"PolyMatrix([{body}])"

    def filter(self, seq: np.ndarray) -> np.ndarray:
        """Apply the matrix to a block sequence: (M, rows) bits -> (M, cols) bits."""
        seq = np.asarray(seq, dtype=np.uint8)
        if seq.ndim != 2 or seq.shape[1] != self.rows:
            raise ShapeError(f"sequence of width {seq.shape[-1] if seq.ndim else 0} does not fit {self.shape} matrix")
        out = np.zeros((seq.shape[0], self.cols), dtype=np.uint8)
        for j in range(self.cols):
            for i in range(self.rows):
                if self._entries[i][j]:
                    out[:, j] ^= filter_bits(seq[:, i], self._entries[i][j])
        return out


def mat_mul(x: PolyMatrix, y: PolyMatrix) -> PolyMatrix:
    """Matrix product over GF(2)[D]."""
    if x.cols != y.rows:
        raise ShapeError(f"cannot multiply {x.shape} by {y.shape}")
    a, b = x._ints(), y._ints()
    out = []
    for i in range(x.rows):
        row = []
        for j in range(y.cols):
            acc = 0
            for t in range(x.cols):
                if a[i][t] and b[t][j]:
                    acc ^= _clmul(a[i][t], b[t][j])
            row.append(acc)
        out.append(row)
    return PolyMatrix._from_ints(out)


def _det_ints(m: list[list[int]]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return _clmul(m[0][0], m[1][1]) ^ _clmul(m[0][1], m[1][0])
    total = 0
    for j, lead in enumerate(m[0]):
        if lead:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            total ^= _clmul(lead, _det_ints(minor))
    return total


def det(m: PolyMatrix) -> Gf2Poly:
    """Determinant by cofactor expansion (signs vanish in characteristic 2)."""
    if m.rows != m.cols:
        raise ShapeError(f"determinant of a non-square {m.shape} matrix")
    return Gf2Poly(_det_ints(m._ints()))


@dataclass(frozen=True)
class SmithDecomposition:
    """m = A @ Gamma @ B with unimodular A, B; AInv and BInv are their inverses."""

    A: PolyMatrix
    Gamma: PolyMatrix
    B: PolyMatrix
    AInv: PolyMatrix
    BInv: PolyMatrix

    def invariant_factors(self) -> list[Gf2Poly]:
        return [self.Gamma[i, i] for i in range(min(self.Gamma.rows, self.Gamma.cols))]


class _SmithWorkspace:
    """Elementary row/column operations that keep the four transforms in step.

    Over GF(2)[D] adding q times one line to another is its own inverse, so each inverse
    transform is updated with the same q.
    """

    def __init__(self, m: PolyMatrix) -> None:
        self.work = m._ints()
        self.r, self.c = m.rows, m.cols
        self.u = [[int(i == j) for j in range(self.r)] for i in range(self.r)]
        self.u_inv = [[int(i == j) for j in range(self.r)] for i in range(self.r)]
        self.v = [[int(i == j) for j in range(self.c)] for i in range(self.c)]
        self.v_inv = [[int(i == j) for j in range(self.c)] for i in range(self.c)]

    def row_add(self, dst: int, src: int, q: int) -> None:
        self.work[dst] = [a ^ _clmul(q, b) for a, b in zip(self.work[dst], self.work[src], strict=True)]
        self.u[dst] = [a ^ _clmul(q, b) for a, b in zip(self.u[dst], self.u[src], strict=True)]
        for row in self.u_inv:
            row[src] ^= _clmul(q, row[dst])

    def col_add(self, dst: int, src: int, q: int) -> None:
        for row in self.work:
            row[dst] ^= _clmul(q, row[src])
        for row in self.v:
            row[dst] ^= _clmul(q, row[src])
        self.v_inv[src] = [a ^ _clmul(q, b) for a, b in zip(self.v_inv[src], self.v_inv[dst], strict=True)]

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.work[i], self.work[j] = self.work[j], self.work[i]
        self.u[i], self.u[j] = self.u[j], self.u[i]
        for row in self.u_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for grid in (self.work, self.v):
            for row in grid:
                row[i], row[j] = row[j], row[i]
        self.v_inv[i], self.v_inv[j] = self.v_inv[j], self.v_inv[i]

    def pivot(self, t: int) -> tuple[int, int] | None:
        best: tuple[int, int, int] | None = None
        for i in range(t, self.r):
            for j in range(t, self.c):
                value = self.work[i][j]
                if value and (best is None or value.bit_length() < best[0]):
                    best = (value.bit_length(), i, j)
        return None if best is None else (best[1], best[2])


def smith_decompose(m: PolyMatrix) -> SmithDecomposition:
    """Invariant-factor decomposition by elementary operations.

    Pivot: nonzero entry of least degree in the trailing block, first in row-major order.
    """
    if m.is_zero():
        raise ValidationError("cannot decompose the zero matrix")
    ws = _SmithWorkspace(m)
    for t in range(min(ws.r, ws.c)):
        found = ws.pivot(t)
        if found is None:
            break
        while found is not None:
            ws.swap_rows(t, found[0])
            ws.swap_cols(t, found[1])
            p = ws.work[t][t]
            clean = True
            for i in range(t + 1, ws.r):
                if ws.work[i][t]:
                    q, rem = _divmod(ws.work[i][t], p)
                    ws.row_add(i, t, q)
                    clean = clean and rem == 0
            for j in range(t + 1, ws.c):
                if ws.work[t][j]:
                    q, rem = _divmod(ws.work[t][j], p)
                    ws.col_add(j, t, q)
                    clean = clean and rem == 0
            if not clean:
                found = ws.pivot(t)
                continue
            blocker = next(
                (i for i in range(t + 1, ws.r) for j in range(t + 1, ws.c) if _divmod(ws.work[i][j], p)[1]),
                None,
            )
            if blocker is None:
                break
            ws.row_add(t, blocker, 1)
            found = ws.pivot(t)
    logger.debug("smith: invariant factors %s", [ws.work[i][i] for i in range(min(ws.r, ws.c))])
    return SmithDecomposition(
        A=PolyMatrix._from_ints(ws.u_inv),
        Gamma=PolyMatrix._from_ints(ws.work),
        B=PolyMatrix._from_ints(ws.v_inv),
        AInv=PolyMatrix._from_ints(ws.u),
        BInv=PolyMatrix._from_ints(ws.v),
    )


def _col_measure(col: Sequence[int]) -> tuple[int, int]:
    return max(v.bit_length() for v in col), sum(v.bit_length() for v in col)


def _reduce_column(col: list[int], basis: Sequence[Sequence[int]]) -> list[int]:
    improved = True
    while improved:
        improved = False
        for b in basis:
            db = max(v.bit_length() for v in b)
            dc = max(v.bit_length() for v in col)
            if db == 0 or dc < db:
                continue
            for s in range(dc - db, -1, -1):
                cand = [c ^ (x << s) for c, x in zip(col, b, strict=True)]
                if _col_measure(cand) < _col_measure(col):
                    col = cand
                    improved = True
                    break
            if improved:
                break
    return col


def column_reduce(m: PolyMatrix) -> PolyMatrix:
    """Lower column degrees by adding shifted multiples of other columns until nothing improves."""
    cols = [list(c) for c in zip(*m._ints(), strict=True)]
    changed = True
    while changed:
        changed = False
        for i in range(len(cols)):
            others = [c for j, c in enumerate(cols) if j != i]
            reduced = _reduce_column(cols[i], others)
            if reduced != cols[i]:
                cols[i] = reduced
                changed = True
    return PolyMatrix._from_ints([list(r) for r in zip(*cols, strict=True)])


def reduce_modulo(m: PolyMatrix, kernel: PolyMatrix) -> PolyMatrix:
    """Reduce each column of m by the columns of kernel, keeping m's column space coset."""
    basis = [list(c) for c in zip(*kernel._ints(), strict=True)]
    cols = [_reduce_column(list(c), basis) for c in zip(*m._ints(), strict=True)]
    return PolyMatrix._from_ints([list(r) for r in zip(*cols, strict=True)])


def constraint_length(g: PolyMatrix) -> int:
    """Sum of row degrees."""
    return sum(max(d, 0) for d in g.row_degrees())


def _unit_decomposition(g: PolyMatrix) -> SmithDecomposition:
    if g.rows > g.cols:
        raise NoPolynomialInverseError(f"{g.shape} matrix has no right inverse")
    dec = smith_decompose(g)
    factors = dec.invariant_factors()
    if any(f != ONE for f in factors):
        raise NoPolynomialInverseError(
            "matrix has a non-unit invariant factor, so no polynomial right inverse exists",
            {"invariant_factors": [f.pretty() for f in factors]},
        )
    return dec


def right_inverse(g: PolyMatrix) -> PolyMatrix:
    """Polynomial right inverse with columns reduced modulo the right kernel."""
    dec = _unit_decomposition(g)
    k = g.rows
    ginv = dec.BInv.columns(0, k) @ dec.AInv
    if g.cols > k:
        ginv = reduce_modulo(ginv, column_reduce(dec.BInv.columns(k)))
    return ginv


def syndrome_former(g: PolyMatrix) -> PolyMatrix:
    """H^T, the column-reduced basis of the right kernel of g."""
    if g.cols <= g.rows:
        raise ShapeError("a syndrome former needs n0 > k0")
    dec = _unit_decomposition(g)
    h_t = column_reduce(dec.BInv.columns(g.rows))
    if constraint_length(h_t.T) != constraint_length(g):
        logger.warning(
            "syndrome former constraint length %d differs from the encoder's %d",
            constraint_length(h_t.T),
            constraint_length(g),
        )
    return h_t


def left_inverse_transpose(h: PolyMatrix) -> PolyMatrix:
    """(H^-1)^T: a matrix X with X @ H^T = I."""
    return right_inverse(h).T


def couple_left_inverse(x: PolyMatrix, g: PolyMatrix, g_inv: PolyMatrix) -> PolyMatrix:
    """Turn any left inverse X of H^T into the one with G^-1 G + H^T X = I.

    X (I + G^-1 G) is still a left inverse of H^T and no longer depends on the choice of X.
    """
    n = g.cols
    return x @ (PolyMatrix.identity(n) + g_inv @ g)
