import math
import random

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from conftest import HBAR_S, evaluate_phase, poly_to_sympy
from deformq.grassmann import BilinearForm
from deformq.moyal import (
    NonDecayingError,
    conserved_frame,
    gaussian_integral,
    gaussian_moment,
    landau_problem,
    laguerre,
    laguerre_coefficients,
    oscillator,
)
from deformq.phase import PhaseFunction, moyal_star
from deformq.scalar import ONE, as_scalar
from deformq.verify import random_polynomial

Q, P = sp.symbols("q p")


def sympy_moyal(f, g, order=12):
    """f exp[(i hbar/2)(<-d_q d_p-> - <-d_p d_q->)] g, summed until the series stops."""
    out = 0
    for k in range(order + 1):
        acc = 0
        for j in range(k + 1):
            acc += sp.binomial(k, j) * (-1) ** j * sp.diff(f, Q, k - j, P, j) * sp.diff(g, P, k - j, Q, j)
        out += (sp.I * HBAR_S / 2) ** k / sp.factorial(k) * acc
    return sp.expand(out)


@st.composite
def polys(draw):
    star = moyal_star()
    out = star.zero()
    for _ in range(draw(st.integers(1, 4))):
        a, b = draw(st.integers(0, 3)), draw(st.integers(0, 3))
        c = as_scalar(draw(st.fractions(min_value=-3, max_value=3, max_denominator=3)))
        out = out + (star.var("q") ** a) * (star.var("p") ** b) * star.one(c)
    return out


@given(polys(), polys())
def test_moyal_matches_sympy_series(f, g):
    star = moyal_star()
    lhs = poly_to_sympy(star.product(f, g), (Q, P))
    rhs = sympy_moyal(poly_to_sympy(f, (Q, P)), poly_to_sympy(g, (Q, P)))
    assert sp.simplify(lhs - rhs) == 0


@given(polys(), polys(), polys())
def test_moyal_associative(f, g, h):
    star = moyal_star()
    assert star.product(star.product(f, g), h) == star.product(f, star.product(g, h))


def test_canonical_commutator():
    star = moyal_star()
    q, p = star.var("q"), star.var("p")
    # [q, p] = i hbar
    assert star.commutator(q, p) == star.one(star.kernel[("q", "p")] * 2)


def test_laguerre_coefficients_against_scipy():
    for n in range(8):
        for x in (0.0, 0.3, 2.5):
            assert abs(float(laguerre(n, x)) - special.eval_laguerre(n, x)) < 1e-10
    assert [float(c) for c in laguerre_coefficients(2)] == [1, -2, 0.5]


def test_oscillator_genvalues_exact():
    osc = oscillator(3, 5)
    for n in range(6):
        assert osc.residual(n).is_zero()
    assert osc.energy(0) == osc.energy(1) / 3


def test_oscillator_wigner_pointwise_formula():
    m, w, hbar = 1.5, 2.0 / 3.0, 0.8
    osc = oscillator(as_scalar(3) / 2, as_scalar(2) / 3)
    for n in range(4):
        pi = osc.wigner(n)
        for q, p in ((0.0, 0.0), (0.7, -0.4), (-1.1, 0.9)):
            H = p * p / (2 * m) + 0.5 * m * w * w * q * q
            ref = 2 * (-1) ** n * math.exp(-2 * H / (hbar * w)) * special.eval_laguerre(n, 4 * H / (hbar * w))
            val = evaluate_phase(pi, {"q": q, "p": p}, hbar=hbar)
            assert abs(val - ref) < 1e-12


def test_normalisation_by_quadrature():
    hbar = 0.9
    osc = oscillator(1, 1)
    for n in range(3):
        pi = osc.wigner(n)
        f = lambda p, q: evaluate_phase(pi, {"q": q, "p": p}, hbar=hbar).real  # noqa: E731
        val, _ = integrate.dblquad(f, -9, 9, -9, 9, epsabs=1e-11)
        assert abs(val / (2 * math.pi * hbar) - 1) < 1e-8
        assert abs(gaussian_moment(pi.to_float(hbar), hbar) - 1) < 1e-12


def test_gaussian_integral_rejects_growth():
    star = moyal_star()
    grow = PhaseFunction.gaussian(star.variables, star.var("q") * star.var("q"))
    with pytest.raises(NonDecayingError):
        gaussian_integral(grow.to_float(1.0), 1.0)


def test_landau_spectrum_and_angular_momentum():
    L = landau_problem(2, 3)
    for n in range(3):
        for l in range(3):
            pi = L.wigner(n, l)
            assert (L.star.product(L.hamiltonian, pi) - pi.scale(L.energy(n))).is_zero()
            assert (L.star.product(L.angular_momentum, pi) - pi.scale(L.angular_eigenvalue(n, l))).is_zero()


def test_landau_conserved_frame_kernel():
    L = landau_problem(2, 3)
    F = conserved_frame(L)
    assert not any(F.star.kernel.get((a, b)) for a in ("qt1", "qt2") for b in ("pt1", "pt2"))
    for n, l in ((0, 0), (1, 2), (2, 1)):
        assert F.to_frame(L.wigner(n, l)) == F.wigner(n, l)


def test_landau_commuting_polynomials():
    L = landau_problem(1, 2)
    rng = random.Random(3)
    one = L.star.one(ONE)
    for _ in range(3):
        f = random_polynomial(rng, L.qt, 3, one)
        assert L.star.commutator(L.hamiltonian, f).is_zero()


def test_landau_rejects_zero_frequency():
    with pytest.raises(ValueError):
        landau_problem(1, 0)


def test_moyal_with_grassmann_form_is_graded():
    star = moyal_star(1, form=BilinearForm.pauli(2))
    t1, t2 = star.theta(1), star.theta(2)
    assert star.anticommutator(t1, t2).is_zero()
    assert star.product(t1, t1) == star.one(star.form(1, 1))
