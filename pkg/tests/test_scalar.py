from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from deformq.scalar import C, H, HBAR, I, ONE, SQRT2, ZERO, Scalar, as_scalar

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def scalars(draw):
    out = ZERO
    for _ in range(draw(st.integers(0, 3))):
        out = out + Scalar.monomial(draw(small), draw(small), draw(st.integers(0, 1)),
                                    draw(st.integers(-2, 2)), draw(st.integers(-2, 2)))
    return out


def test_hbar_is_twice_h_squared():
    assert HBAR == H * H * 2
    assert SQRT2 * SQRT2 == as_scalar(2)
    assert I * I == -ONE


def test_inverse_of_monomials():
    x = Scalar.monomial(3, 4, 1, -2, 3)
    assert x * x.inverse() == ONE
    assert (C ** -3) * C ** 3 == ONE


def test_non_invertible_sum_raises():
    with pytest.raises(ArithmeticError):
        (ONE + HBAR).inverse()


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        Scalar.parse("(1+0i·√2^0·h^0·c^0) junk")


def test_evaluate_even_h_power_is_exact():
    assert HBAR.evaluate(1.0) == 1.0
    assert (HBAR / 2).evaluate(3.0) == 1.5


def test_as_fraction():
    assert as_scalar(Fraction(7, 3)).as_fraction() == Fraction(7, 3)
    with pytest.raises(ValueError):
        HBAR.as_fraction()


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ZERO


@given(scalars(), scalars(), st.floats(0.1, 3.0), st.floats(0.5, 2.0))
def test_evaluate_is_a_homomorphism(a, b, hbar, c):
    lhs = (a * b + a).evaluate(hbar, c)
    rhs = a.evaluate(hbar, c) * b.evaluate(hbar, c) + a.evaluate(hbar, c)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))


@given(scalars())
def test_parse_roundtrip(a):
    assert Scalar.parse(str(a)) == a


@given(scalars())
def test_conjugate_is_involutive_and_multiplicative(a):
    assert a.conjugate().conjugate() == a
    assert (a * I).conjugate() == a.conjugate() * -I
