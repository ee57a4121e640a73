import numpy as np
import pytest
import sympy as sp

from conftest import ALPHA, BETA, C_S, I2, SIGMA, poly_to_sympy, scalar_to_sympy
from deformq import fw
from deformq.scalar import ONE, as_scalar

CTX = fw.fw_context("D4")
GENS = ALPHA + [BETA]
SPIN = [np.kron(I2, s) for s in SIGMA]
VARS = sp.symbols("q1 q2 q3 p1 p2 p3")
E_CH, MASS = 3, 2


@pytest.fixture(scope="module")
def results():
    return [fw.fw_dirac_em(f, CTX) for f in fw.standard_cases(CTX, E_CH, MASS)]


def phase_matrix(f, point, hbar, c):
    """4x4 Dirac matrix of a Moyal-Pauli phase function at a phase-space point."""
    h = np.sqrt(hbar / 2)
    out = np.zeros((4, 4), dtype=complex)
    for (g, e, m), coef in f.items():
        assert not g
        mono = np.prod([x ** k for x, k in zip(point, e)])
        P = np.eye(4, dtype=complex)
        k = 0
        for i in range(4):
            if m >> i & 1:
                P = P @ GENS[i]
                k += 1
        out += coef.evaluate(hbar, c) * mono * h ** k * P
    return out


def hand_matrix(case, point, hbar, c):
    """Textbook nonrelativistic Hamiltonian to order 1/c^2, written out with Dirac matrices."""
    e, m = E_CH, MASS
    q, p = np.array(point[:3]), np.array(point[3:])
    B = np.zeros(3)
    E = np.zeros(3)
    phi, divE = 0.0, 0.0
    A = np.zeros(3)
    if case == "constant-B":
        B[2] = 5
        A = np.array([-q[1], q[0], 0]) * 5 / 2
    elif case == "linear-phi":
        g = np.array([7, -2, 1])
        phi, E = g @ q, -g
    elif case == "quadratic-phi":
        k = np.array([1, 2, 4])
        phi, E, divE = (k * q * q).sum() / 2, -k * q, -k.sum()
    pi = p - e * A / c
    one = np.eye(4)
    SB = sum(b * s for b, s in zip(B, SPIN))
    SEp = sum(x * s for x, s in zip(np.cross(E, p), SPIN))
    return (BETA * (m * c * c + pi @ pi / (2 * m) - (p @ p) ** 2 / (8 * m ** 3 * c * c))
            - e * hbar / (2 * m * c) * BETA @ SB
            + e * phi * one
            - e * hbar / (4 * m * m * c * c) * SEp
            - e * hbar * hbar / (8 * m * m * c * c) * divE * one)


def test_free_energy_matches_sympy_series():
    m = as_scalar(MASS)
    res = fw.fw_dirac_em(fw.free_fields(CTX.star, E_CH, MASS), CTX)
    (mask, bcoef), = CTX.rep.beta.items()
    got = sp.expand(poly_to_sympy(res.h_double_prime, VARS, mask) / scalar_to_sympy(bcoef))
    p2 = sum(x ** 2 for x in VARS[3:])
    x = sp.Symbol("x")
    ser = sp.series(sp.sqrt(1 + x), x, 0, 3).removeO()
    ref = sp.expand(MASS * C_S ** 2 * ser.subs(x, p2 / (MASS * C_S) ** 2))
    assert sp.simplify(got - ref) == 0
    assert res.h_double_prime == fw.free_kinetic_target(CTX, m)


@pytest.mark.parametrize("idx", range(4))
def test_h_double_prime_against_dirac_matrices(results, idx):
    res = results[idx]
    pts = [(0.3, -0.7, 0.2, 1.1, 0.4, -0.5), (-1.2, 0.5, 0.9, -0.3, 0.8, 0.6)]
    for hbar, c in ((1.0, 1.0), (0.8, 1.7)):
        for pt in pts:
            got = phase_matrix(res.h_double_prime, pt, hbar, c)
            ref = hand_matrix(res.fields.label, pt, hbar, c)
            assert np.allclose(got, ref, atol=1e-10), res.fields.label


def test_all_rows_match_and_odd_parts_vanish(results):
    for res in results:
        for row in res.rows:
            assert row.ok, (res.fields.label, row.name)
        assert res.odd_after_second.is_zero()
        assert res.even_row_residual.is_zero()
        assert res.odd_row_residual.is_zero()
        assert res.ok


def test_first_step_leaves_odd_terms_of_order_three(results):
    for res in results[1:]:
        assert res.odd_after_first.order() >= 3
    assert results[0].odd_after_first.is_zero() or results[0].odd_after_first.order() >= 3


def test_magnetic_moment_coefficient():
    res = fw.fw_dirac_em(fw.constant_b_fields(CTX.star, 5, E_CH, MASS), CTX)
    row = next(r for r in res.rows if r.name == "magnetic moment")
    (coef,) = [c for (_, _, m), c in row.computed.items() if m == 0b1011]
    # -(e hbar / 2mc) B beta sigma_3 with beta = theta_4/h, sigma_3 = -(2i/hbar) theta_1 theta_2
    h = sp.sqrt(sp.Symbol("hbar", positive=True) / 2)
    assert sp.simplify(scalar_to_sympy(coef) - sp.Rational(15, 2) * sp.I / (h * C_S)) == 0


def test_parity_split_idempotent():
    f = fw.constant_b_fields(CTX.star, 5, E_CH, MASS)
    H = fw.dirac_em_hamiltonian(f, CTX)
    E, O = fw.parity_split(H, CTX)
    E2, O2 = fw.parity_split(CTX.beta + E, CTX)
    assert E2 == E and O2.is_zero()
    E3, O3 = fw.parity_split(CTX.beta + O, CTX)
    assert E3.is_zero() and O3 == O


def test_beta_alone_is_already_even():
    E, O = fw.parity_split(CTX.beta, CTX)
    assert E.is_zero() and O.is_zero()


def test_unitary_at_truncation_order():
    f = fw.linear_phi_fields(CTX.star, (7, -2, 1), E_CH, MASS)
    _, O = fw.parity_split(fw.dirac_em_hamiltonian(f, CTX), CTX)
    assert fw.unitarity_residual(O, CTX).is_zero()


def test_cube_factor_is_minus_one_third():
    f = fw.quadratic_phi_fields(CTX.star, (1, 2, 4), E_CH, MASS)
    H = fw.dirac_em_hamiltonian(f, CTX)
    E, O = fw.parity_split(H, CTX)
    _, O1 = fw.parity_split(fw.fw_step(H, CTX), CTX)
    assert (O1 - fw.odd_row(E, O, CTX)).is_zero()
    assert not (O1 - fw.odd_row(E, O, CTX, cube_factor=-ONE / 6)).is_zero()


def test_scalar_odd_matches_sqrt_series():
    for k in (1, 2):
        got, ref = fw.scalar_odd_check(CTX, k)
        assert got == ref
        # beta coefficient through 1/c^4 against sqrt(1 + k^2/c^2)
        c = 7.0
        coef = sum(cf.evaluate(1.0, c) for (_, _, m), cf in got.value.items() if m == 8) * np.sqrt(0.5)
        assert abs(coef - fw.closed_form_scalar_odd(k, c)) < (k / c) ** 6


def test_degree_overflow():
    ctx = fw.fw_context("D4")
    ctx.max_degree = 2
    p = fw.CSeries(ctx.star.var("p1"))
    with pytest.raises(fw.DegreeOverflowError):
        ctx.power(p, 3)


def test_rejects_momentum_dependent_potential():
    st = CTX.star
    bad = fw.Fields((st.zero(), st.zero(), st.zero()), st.var("p1"))
    with pytest.raises(ValueError):
        fw.dirac_em_hamiltonian(bad, CTX)
