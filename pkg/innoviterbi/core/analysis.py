"""Exact error-pattern statistics of the SST main decoder.

Every quantity here is the probability that a set of parities of iid Bernoulli(eps)
channel errors takes given values. Supports are enumerated jointly, so dependence
between state components is kept, and the counts N_w of matching patterns per weight
give both exact sympy polynomials and float evaluations.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
import sympy
from scipy.integrate import quad

from .channel import q_function
from .convcode import ConvCode, error_state_map
from .exceptions import SupportTooLargeError, UnsupportedCodeError, ValidationError
from .gf2poly import Gf2Poly, PolyMatrix, det
from .log import get_logger
from .models import DistributionReport, StateDistReport

logger = get_logger(__name__)

View = Literal["general", "qli", "error-trellis"]
MAX_SUPPORT_BITS = 24
EPSILON = sympy.Symbol("epsilon")


@dataclass(frozen=True)
class ErrorSupportExpr:
    """XOR of channel error bits e^(component)_{k - offset}."""

    terms: frozenset[tuple[int, int]]

    @classmethod
    def from_column(cls, polys: Sequence[Gf2Poly], shift: int = 0) -> ErrorSupportExpr:
        """sum_l e^(l) polys[l], delayed by shift."""
        return cls(frozenset((d + shift, comp) for comp, p in enumerate(polys) for d in p.support()))

    def shifted(self, shift: int) -> ErrorSupportExpr:
        return ErrorSupportExpr(frozenset((d + shift, c) for d, c in self.terms))

    def __xor__(self, other: ErrorSupportExpr) -> ErrorSupportExpr:
        return ErrorSupportExpr(self.terms ^ other.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for d, c in sorted(self.terms, key=lambda t: (t[1], t[0])):
            at = "k" if d == 0 else (f"k-{d}" if d > 0 else f"k+{-d}")
            parts.append(f"e{c + 1}[{at}]")
        return " + ".join(parts)


def _check_eps(eps: float) -> None:
    if not 0.0 <= eps <= 1.0:
        raise ValidationError(f"eps must lie in [0, 1], got {eps}")


def parity_probability(n: int, eps: float) -> float:
    """P(e_1 + ... + e_n = 1) = (1 - (1 - 2 eps)^n) / 2."""
    if n < 1:
        raise ValidationError(f"parity needs n >= 1, got {n}")
    _check_eps(eps)
    return (1.0 - (1.0 - 2.0 * eps) ** n) / 2.0


def parity_polynomial(n: int) -> sympy.Poly:
    if n < 1:
        raise ValidationError(f"parity needs n >= 1, got {n}")
    return sympy.Poly((1 - (1 - 2 * EPSILON) ** n) / 2, EPSILON)


def joint_counts(exprs: Sequence[ErrorSupportExpr]) -> tuple[np.ndarray, int]:
    """counts[v, w]: error patterns of weight w whose parities read v (expr 0 is the MSB of v)."""
    bits = sorted(set().union(*(e.terms for e in exprs))) if exprs else []
    n = len(bits)
    if n > MAX_SUPPORT_BITS:
        raise SupportTooLargeError(f"{n} distinct error bits exceed the enumeration limit of {MAX_SUPPORT_BITS}")
    index = {b: i for i, b in enumerate(bits)}
    patterns = np.arange(1 << n, dtype=np.uint32)
    weight = np.bitwise_count(patterns).astype(np.int64)
    value = np.zeros(len(patterns), dtype=np.int64)
    for expr in exprs:
        mask = np.uint32(sum(1 << index[t] for t in expr.terms))
        value = (value << 1) | (np.bitwise_count(patterns & mask) & 1).astype(np.int64)
    counts = np.bincount(value * (n + 1) + weight, minlength=(1 << len(exprs)) * (n + 1))
    return counts.reshape(1 << len(exprs), n + 1), n


def _weights(n: int, eps: float) -> np.ndarray:
    w = np.arange(n + 1)
    return eps**w * (1.0 - eps) ** (n - w)


def _target_index(target: Sequence[int], size: int) -> int:
    if len(target) != size:
        raise ValidationError(f"target has {len(target)} bits for {size} expressions")
    return int("".join(str(int(b) & 1) for b in target) or "0", 2)


def expr_probability(exprs: Sequence[ErrorSupportExpr], target: Sequence[int], eps: float) -> float:
    """P(expr_i = target_i for all i)."""
    _check_eps(eps)
    counts, n = joint_counts(exprs)
    return float(counts[_target_index(target, len(exprs))] @ _weights(n, eps))


def _poly_from_counts(row: np.ndarray, n: int) -> sympy.Poly:
    total = sum(int(c) * EPSILON**w * (1 - EPSILON) ** (n - w) for w, c in enumerate(row) if c)
    return sympy.Poly(sympy.expand(total), EPSILON)


def expr_polynomial(exprs: Sequence[ErrorSupportExpr], target: Sequence[int]) -> sympy.Poly:
    counts, n = joint_counts(exprs)
    return _poly_from_counts(counts[_target_index(target, len(exprs))], n)


def alpha_params(code: ConvCode) -> list[ErrorSupportExpr]:
    """Column l of e G^-1 G: the part of r^(l) beyond the direct error e^(l)_k."""
    product = code.GInv @ code.G
    return [ErrorSupportExpr.from_column(product.col(j)) for j in range(code.n0)]


def beta_params(code: ConvCode) -> list[ErrorSupportExpr]:
    """Column l of (e F) G, i.e. e^(l)_{k-L} + zeta_k for rate 1/2."""
    code.require_qli()
    return [ErrorSupportExpr.from_column([code.G[0, j]] * code.n0) for j in range(code.n0)]


def _single_probabilities(exprs: Iterable[ErrorSupportExpr], eps: float) -> list[float]:
    """A single expression XORs distinct iid bits, so its law is the parity of len(e) bits."""
    _check_eps(eps)
    return [parity_probability(len(e), eps) if len(e) else 0.0 for e in exprs]


def _single_polynomial(expr: ErrorSupportExpr) -> sympy.Poly:
    return parity_polynomial(len(expr)) if len(expr) else sympy.Poly(0, EPSILON)


def alpha_values(code: ConvCode, eps: float) -> list[float]:
    return _single_probabilities(alpha_params(code), eps)


def beta_values(code: ConvCode, eps: float) -> list[float]:
    return _single_probabilities(beta_params(code), eps)


def alpha_polynomials(code: ConvCode) -> list[sympy.Poly]:
    return [_single_polynomial(e) for e in alpha_params(code)]


def beta_polynomials(code: ConvCode) -> list[sympy.Poly]:
    return [_single_polynomial(e) for e in beta_params(code)]


def entropy_gap(param: float, c: float) -> float:
    """Approximate H[z] - H[r] in nats: 1/2 ln((1 + c^2) / (1 + 4 c^2 param (1 - param)))."""
    if not 0.0 <= param <= 0.5:
        raise ValidationError(f"parameter must lie in [0, 1/2], got {param}")
    if c <= 0:
        raise ValidationError(f"c must be positive, got {c}")
    return 0.5 * math.log((1 + c * c) / (1 + 4 * c * c * param * (1 - param)))


def amplitude(ebn0_db: float, rate: float) -> float:
    """c = sqrt(2 R Eb/N0)."""
    return math.sqrt(2 * rate * 10 ** (ebn0_db / 10))


def distribution_report(code: ConvCode, kind: Literal["alpha", "beta"], ebn0_db: float) -> DistributionReport:
    c = amplitude(ebn0_db, code.rate)
    eps = float(q_function(c))
    params = alpha_values(code, eps) if kind == "alpha" else beta_values(code, eps)
    gaps = [entropy_gap(p, c) for p in params]
    return DistributionReport(
        snr_db=ebn0_db, c=c, epsilon=eps, kind=kind, params=params, entropy_gaps=gaps, total=sum(gaps)
    )


def state_exprs(code: ConvCode, view: View) -> list[ErrorSupportExpr]:
    """Error-support expressions of the state bits, ordered like the state label.

    general: inputs of the filtered estimate error e G^-1, oldest first per input row.
    qli: the smoothed estimate error e F, L blocks ahead, oldest first.
    error-trellis: components of e U.
    """
    if view == "general":
        return [
            ErrorSupportExpr.from_column(code.GInv.col(r), shift=j)
            for r in range(code.k0 - 1, -1, -1)
            for j in range(code.nu - 1, -1, -1)
        ]
    if view == "qli":
        qli_l = code.require_qli()
        ones = [Gf2Poly(1)] * code.n0
        return [ErrorSupportExpr.from_column(ones, shift=j - qli_l) for j in range(code.nu - 1, -1, -1)]
    if view == "error-trellis":
        u_map = error_state_map(code).U
        return [ErrorSupportExpr.from_column(u_map.col(i)) for i in range(u_map.cols)]
    raise ValidationError(f"unknown view {view!r}")


def _entropy_bits(probs: Iterable[float]) -> float:
    return float(-sum(p * math.log2(p) for p in probs if p > 0))


def state_distribution(code: ConvCode, view: View, eps: float, snr_db: float | None = None) -> StateDistReport:
    """Joint state probabilities and their entropy in bits."""
    _check_eps(eps)
    exprs = state_exprs(code, view)
    counts, n = joint_counts(exprs)
    values = counts @ _weights(n, eps)
    width = len(exprs)
    probs = {format(s, f"0{width}b"): float(p) for s, p in enumerate(values)}
    return StateDistReport(snr_db=snr_db, epsilon=eps, view=view, probs=probs, entropy=_entropy_bits(values))


def state_polynomials(code: ConvCode, view: View) -> dict[str, sympy.Poly]:
    exprs = state_exprs(code, view)
    counts, n = joint_counts(exprs)
    return {format(s, f"0{len(exprs)}b"): _poly_from_counts(row, n) for s, row in enumerate(counts)}


def low_weight_state_probability(code: ConvCode, view: View, eps: float, max_weight: int = 1) -> float:
    """Total probability of the states with at most max_weight ones."""
    report = state_distribution(code, view, eps)
    return sum(p for label, p in report.probs.items() if label.count("1") <= max_weight)


def most_probable_states(code: ConvCode, view: View, eps: float, count: int) -> list[int]:
    """The count most probable states (ties: lower state), always including state 0."""
    report = state_distribution(code, view, eps)
    ranked = sorted(((-p, int(label, 2)) for label, p in report.probs.items()))
    chosen = [s for _, s in ranked[:count]]
    if 0 not in chosen:
        chosen[-1] = 0
    return sorted(chosen)


def smoothed_vs_filtered(code: ConvCode, eps: float) -> tuple[float, float]:
    """(p_f, p_s): error probability of the filtered estimate e G^-1 and of the smoothed one e F."""
    code.require_qli()
    if code.k0 != 1:
        raise UnsupportedCodeError("smoothed and filtered estimates are compared for k0 = 1")
    filtered = ErrorSupportExpr.from_column(code.GInv.col(0))
    smoothed = ErrorSupportExpr.from_column([Gf2Poly(1)] * code.n0)
    return expr_probability([filtered], [1], eps), expr_probability([smoothed], [1], eps)


def capacity_entropy_bounds(c: float) -> tuple[float, float]:
    """Gaussian-input bounds on H[z] and H[x; z] in nats."""
    if c <= 0:
        raise ValidationError(f"c must be positive, got {c}")
    return 0.5 * math.log(2 * math.pi * math.e * (1 + c * c)), 0.5 * math.log(1 + c * c)


def mutual_information(c: float) -> float:
    """H[x; z] in nats for equiprobable x = +-1 and z = c x + w, w ~ N(0, 1)."""
    if c <= 0:
        raise ValidationError(f"c must be positive, got {c}")
    log_norm = math.log(2 * math.sqrt(2 * math.pi))

    def integrand(z: float) -> float:
        log_p = np.logaddexp(-((z - c) ** 2) / 2, -((z + c) ** 2) / 2) - log_norm
        return float(-math.exp(log_p) * log_p)

    h_z, _ = quad(integrand, -c - 12.0, c + 12.0, limit=200)
    return h_z - 0.5 * math.log(2 * math.pi * math.e)


def degeneration_criterion(n_s: int, l_h: int, start_offset: int = 0) -> int:
    """Zero-string length above which degeneration is expected to save work.

    With an offset the zero-state probe costs l_h only; every other probe also covers the
    2 * start_offset extra sections.
    """
    if n_s < 1 or l_h < 0 or start_offset < 0:
        raise ValidationError("criterion needs n_s >= 1, l_h >= 0 and start_offset >= 0")
    if start_offset == 0:
        return n_s * l_h
    return (n_s - 1) * (l_h + 2 * start_offset) + l_h


def algebraic_identities(code: ConvCode) -> dict[str, bool]:
    """Closed-form checks behind the innovation construction; every value should be True."""
    n0 = code.n0
    eye = PolyMatrix.identity(n0)
    projector = eye + code.GInv @ code.G
    checks = {
        "G G^-1 = I": (code.G @ code.GInv).is_identity(),
        "G H^T = 0": (code.G @ code.HT).is_zero(),
        "G^-1 G + H^T (H^-1)^T = I": (code.GInv @ code.G + code.HT @ code.HInvT).is_identity(),
        "det(I + G^-1 G) = 0": det(projector).is_zero(),
        "I + G^-1 G idempotent": projector @ projector == projector,
    }
    if code.is_qli:
        shift = Gf2Poly.monomial(code.require_qli())
        smoothing = eye.scale(shift) + code.F @ code.G
        checks["det(D^L I + F G) = 0"] = det(smoothing).is_zero()
        checks["(D^L I + F G)^2 = D^L (D^L I + F G)"] = smoothing @ smoothing == smoothing.scale(shift)
    return checks
