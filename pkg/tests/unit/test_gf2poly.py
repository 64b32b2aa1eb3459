"""Tests for GF(2)[D] polynomials and polynomial matrices."""

import numpy as np
import pytest

from innoviterbi.core.exceptions import DegreeOverflowError, NoPolynomialInverseError, ShapeError, ValidationError
from innoviterbi.core.gf2poly import (
    MAX_DEGREE,
    ZERO,
    Gf2Poly,
    PolyMatrix,
    det,
    filter_bits,
    left_inverse_transpose,
    right_inverse,
    smith_decompose,
    syndrome_former,
)

C1_G = PolyMatrix.from_strings([["111", "101"]])


def test_string_is_lsb_first():
    """Test that coefficient strings list D^0 first."""
    assert Gf2Poly.from_string("111") == Gf2Poly(0b111)
    assert Gf2Poly.from_string("011") == Gf2Poly(0b110)
    assert Gf2Poly.from_string("101").pretty() == "1+D^2"
    assert Gf2Poly.from_string("011").to_string() == "011"


def test_octal_shorthand():
    """Test octal generators with the most significant bit on D^0."""
    assert Gf2Poly.from_octal("7") == Gf2Poly.from_string("111")
    assert Gf2Poly.from_octal("5") == Gf2Poly.from_string("101")
    assert Gf2Poly.from_octal("15") == Gf2Poly.from_string("1101")
    assert Gf2Poly.from_string("1101").to_octal() == "15"
    with pytest.raises(ValidationError):
        Gf2Poly.from_octal("9")


def test_invalid_inputs():
    """Test rejected coefficient strings and bit patterns."""
    with pytest.raises(ValidationError):
        Gf2Poly.from_string("102")
    with pytest.raises(ValidationError):
        Gf2Poly.from_string("")
    with pytest.raises(ValidationError):
        Gf2Poly(-1)
    with pytest.raises(ValidationError):
        Gf2Poly.from_coeffs([1, 2])


def test_degree_and_zero():
    """Test degree bookkeeping."""
    assert ZERO.degree == -1
    assert ZERO.is_zero()
    assert not ZERO
    assert Gf2Poly(1).degree == 0
    assert Gf2Poly.monomial(5).degree == 5
    assert Gf2Poly.from_string("1101").support() == [0, 1, 3]


def test_degree_cap():
    """Test the degree guard."""
    assert Gf2Poly.monomial(MAX_DEGREE).degree == MAX_DEGREE
    with pytest.raises(DegreeOverflowError):
        Gf2Poly.monomial(MAX_DEGREE + 1)


def test_arithmetic():
    """Test addition, carry-less multiplication and division."""
    one_plus_d = Gf2Poly(0b11)
    assert one_plus_d + one_plus_d == ZERO
    assert one_plus_d * one_plus_d == Gf2Poly(0b101)
    assert Gf2Poly(0b111) * one_plus_d == Gf2Poly(0b1001)
    assert divmod(Gf2Poly(0b1001), one_plus_d) == (Gf2Poly(0b111), ZERO)
    assert Gf2Poly(0b11).shift(2) == Gf2Poly(0b1100)


@pytest.mark.parametrize("a,b", [(0b10001, 0b111), (0b1101101, 0b1011), (0b1, 0b11), (0b101100111, 0b1000011)])
def test_division_identity(a, b):
    """Test a = q b + r with deg r < deg b."""
    q, r = divmod(Gf2Poly(a), Gf2Poly(b))
    assert q * Gf2Poly(b) + r == Gf2Poly(a)
    assert r.degree < Gf2Poly(b).degree


def test_division_by_zero():
    """Test division by the zero polynomial."""
    with pytest.raises(ZeroDivisionError):
        divmod(Gf2Poly(0b101), ZERO)


def test_filter_bits():
    """Test causal filtering of a bit sequence."""
    impulse = np.array([1, 0, 0, 0, 0], dtype=np.uint8)
    assert filter_bits(impulse, Gf2Poly(0b111)).tolist() == [1, 1, 1, 0, 0]
    assert filter_bits(np.array([1, 1, 0], dtype=np.uint8), Gf2Poly(0b11)).tolist() == [1, 0, 1]
    assert filter_bits(impulse, ZERO).tolist() == [0, 0, 0, 0, 0]


def test_matrix_shapes():
    """Test matrix construction and shape checks."""
    assert C1_G.shape == (1, 2)
    assert C1_G.T.shape == (2, 1)
    with pytest.raises(ShapeError):
        PolyMatrix([["1", "11"], ["1"]])
    with pytest.raises(ShapeError):
        C1_G @ C1_G
    with pytest.raises(ShapeError):
        C1_G + C1_G.T


def _random_matrix(rng: np.random.Generator, rows: int, cols: int) -> PolyMatrix:
    return PolyMatrix([[Gf2Poly(int(rng.integers(0, 64))) for _ in range(cols)] for _ in range(rows)])


def test_matrix_ring_laws():
    """Test associativity and both distributive laws on random polynomial matrices."""
    rng = np.random.default_rng(5)
    for _ in range(50):
        a, a2 = _random_matrix(rng, 2, 3), _random_matrix(rng, 2, 3)
        b, b2 = _random_matrix(rng, 3, 2), _random_matrix(rng, 3, 2)
        c = _random_matrix(rng, 2, 4)
        assert (a @ b) @ c == a @ (b @ c)
        assert a @ (b + b2) == a @ b + a @ b2
        assert (a + a2) @ b == a @ b + a2 @ b
        assert (a @ b).T == b.T @ a.T


def test_matrix_filter_matches_product():
    """Test that filtering by G encodes an impulse into the generator coefficients."""
    impulse = np.zeros((4, 1), dtype=np.uint8)
    impulse[0, 0] = 1
    out = C1_G.filter(impulse)
    assert out.tolist() == [[1, 1], [1, 0], [1, 1], [0, 0]]


def test_determinant():
    """Test determinants over GF(2)[D]."""
    m = PolyMatrix([["11", "01"], ["1", "1"]])
    assert det(m) == Gf2Poly(1)
    singular = PolyMatrix([["11", "11"], ["1", "1"]])
    assert det(singular).is_zero()
    with pytest.raises(ShapeError):
        det(C1_G)


@pytest.mark.parametrize(
    "rows",
    [
        [["111", "101"]],
        [["1101101", "1111101"]],
        [["11", "01", "11"], ["01", "1", "1"]],
        [["11", "101"]],
    ],
)
def test_smith_decomposition(rows):
    """Test m = A Gamma B with unimodular, correctly inverted transforms."""
    m = PolyMatrix.from_strings(rows)
    dec = smith_decompose(m)
    assert dec.A @ dec.Gamma @ dec.B == m
    assert (dec.A @ dec.AInv).is_identity()
    assert (dec.B @ dec.BInv).is_identity()
    factors = dec.invariant_factors()
    for a, b in zip(factors, factors[1:], strict=False):
        assert b.is_zero() or (b % a).is_zero()


def test_non_basic_generator_has_no_inverse():
    """Test that a common factor blocks the polynomial right inverse."""
    g = PolyMatrix.from_strings([["11", "101"]])
    assert smith_decompose(g).invariant_factors() == [Gf2Poly(0b11)]
    with pytest.raises(NoPolynomialInverseError):
        right_inverse(g)


@pytest.mark.parametrize(
    "rows", [[["111", "101"]], [["1101101", "1111101"]], [["1100111", "1011101"]], [["11001", "10111"]]]
)
def test_inverses_and_syndrome_former(rows):
    """Test G G^-1 = I, G H^T = 0 and (H^-1)^T H^T = I."""
    g = PolyMatrix.from_strings(rows)
    ginv = right_inverse(g)
    assert (g @ ginv).is_identity()
    h_t = syndrome_former(g)
    assert (g @ h_t).is_zero()
    assert (left_inverse_transpose(h_t.T) @ h_t).is_identity()


def test_syndrome_former_of_c1():
    """Test that C1's syndrome former swaps the generators."""
    assert syndrome_former(C1_G) == PolyMatrix.from_strings([["101"], ["111"]])


def test_syndrome_former_needs_redundancy():
    """Test that a square generator has no syndrome former."""
    with pytest.raises(ShapeError):
        syndrome_former(PolyMatrix.from_strings([["1"]]))
