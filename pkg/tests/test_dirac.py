import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate
from scipy.linalg import expm

from conftest import ALPHA, BETA, chevalley_matrix, euclid_matrix, form_array
from deformq import dirac as dr
from deformq.grassmann import Multivector
from deformq.scalar import HBAR, ONE, as_scalar
from deformq.spin import sigma
from deformq.verify import random_element

D4_GENS = ALPHA + [BETA]
GAMMA = [BETA] + [BETA @ a for a in ALPHA]
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
KIN = dr.Kinematics((4, 0, 0), 3, 1)


def d4(u, hbar=1.0):
    return euclid_matrix(u, D4_GENS, hbar)


def lambda_from_matrices(images):
    L = np.zeros((4, 4))
    for mu in range(4):
        for nu in range(4):
            L[mu, nu] = (np.trace(images[mu] @ GAMMA[nu]) / 4 * METRIC[nu, nu]).real
    return L


@pytest.mark.parametrize("kind", dr.REPS)
def test_algebra_relations_exact(kind):
    rep = dr.build_rep(kind)
    for name, diff in dr.algebra_relations(rep).items():
        assert diff.is_zero(), name
    for name, diff in dr.lorentz_relations(rep).items():
        assert diff.is_zero(), name
    assert all(v == 0 for v in dr.gamma_trace_suite(rep).values())


def test_d4_images_are_dirac_matrices():
    rep = dr.build_rep("D4")
    for a, ref in zip(rep.alpha, ALPHA):
        assert np.allclose(d4(a), ref)
    assert np.allclose(d4(rep.beta), BETA)
    assert np.allclose(d4(rep.gamma5), GAMMA[0] @ GAMMA[1] @ GAMMA[2] @ GAMMA[3] * 1j)


@pytest.mark.parametrize("kind", dr.REPS)
def test_trace_equals_regular_representation_trace(kind):
    rep = dr.build_rep(kind)
    rng = random.Random(5)
    B = form_array(rep.form)
    for _ in range(5):
        u = random_element(rng, rep.d, 6)
        ref = np.trace(chevalley_matrix(u, B)) * 4 / 2 ** rep.d
        assert abs(rep.trace(u).evaluate(1.0) - ref) < 1e-10


def test_spin_generators_are_half_hbar_sigma():
    for kind in dr.REPS:
        rep = dr.build_rep(kind)
        S = dr.spin_generators(rep)
        for i in range(3):
            assert S[i] == sigma(i + 1, rep.d).scale(HBAR / 2)


def test_energy_projectors_against_matrices():
    rep = dr.build_rep("D4")
    H = 4 * ALPHA[0] + 3 * BETA
    Pp = (np.eye(4) + H / 5) / 2
    pp, pm = dr.energy_projectors(rep, KIN)
    assert np.allclose(d4(pp), Pp)
    assert np.allclose(d4(pm), np.eye(4) - Pp)
    assert rep.trace(pp) == as_scalar(2)


@pytest.mark.parametrize("kind", dr.REPS)
def test_projector_families_commute(kind):
    rep = dr.build_rep(kind)
    pp, pm = dr.energy_projectors(rep, KIN)
    sp_, sm = dr.spin_projectors(rep, KIN.u)
    for a in (pp, pm):
        for b in (sp_, sm):
            assert rep.commutator(a, b).is_zero()
    assert rep.product(pp, pp) == pp
    assert rep.product(pp, pm).is_zero()


def test_boost_against_spinor_matrices():
    rep = dr.build_rep("D4")
    om = np.array([0.3, -0.2, 0.5])
    S = expm(sum(o * a for o, a in zip(om, ALPHA)) / 2)
    Sinv = np.linalg.inv(S)
    L = lambda_from_matrices([Sinv @ g @ S for g in GAMMA])
    gens = []
    for i in range(3):
        k = np.zeros((4, 4))
        k[0, i + 1] = k[i + 1, 0] = 1
        gens.append(k)
    assert np.allclose(L, expm(sum(o * k for o, k in zip(om, gens))), atol=1e-12)
    assert np.allclose(L, dr.boost_matrix(om), atol=1e-12)
    assert np.allclose(d4(dr.boost_element(rep, om)), S, atol=1e-12)


@pytest.mark.parametrize("kind", dr.REPS)
def test_boost_lambda_extraction(kind):
    rep = dr.build_rep(kind)
    om = (0.1, 0.4, -0.3)
    L = dr.extract_lambda(rep, dr.boost_gammas(rep, om))
    assert np.abs(L - dr.boost_matrix(om)).max() < 1e-12
    assert dr.boost_element(rep, om).distance(dr.boost_element_closed(rep, om)) < 1e-12


def test_general_lorentz_transform_sign():
    rep = dr.build_rep("D5")
    W = np.zeros((4, 4))
    W[0, 2], W[2, 0], W[1, 3], W[3, 1] = 0.25, -0.25, 0.5, -0.5
    L = dr.extract_lambda(rep, dr.lorentz_transform(rep, W))
    assert np.abs(L - dr.lorentz_matrix(W)).max() < 1e-12
    assert np.abs(L - dr.lorentz_matrix(-W)).max() > 1e-3


def test_boosted_gamma0_is_pslash():
    for kind in dr.REPS:
        rep = dr.build_rep(kind)
        w = dr.rapidity_for_momentum((4, 0, 0), 3)
        img = dr.boost_gammas(rep, w)[0]
        assert img.distance(rep.slash((5, 4, 0, 0)).scale(Fraction(1, 3)).to_float()) < 1e-12


def test_kinematics_exact_energy():
    assert KIN.energy == 5 and KIN.is_exact()
    assert not dr.Kinematics((1, 1, 0), 1, 1).is_exact()
    with pytest.raises(ValueError):
        dr.Kinematics((1, 0, 0), 1, 1, (1, 1, 0)).check()


def test_drift_slope_against_matrix_heisenberg():
    H = 4 * ALPHA[0] + 3 * BETA
    Pp = (np.eye(4) + H / 5) / 2
    for t in (0.2, 1.7):
        U = expm(-1j * H * t)
        v = U.conj().T @ ALPHA[0] @ U
        assert abs(np.trace(Pp @ v).real / 2 - 0.8) < 1e-12
    rep = dr.build_rep("D4")
    assert abs(dr.drift_slope(rep, KIN, 0, 1) - 0.8) < 1e-12
    assert abs(dr.drift_slope(rep, KIN, 0, -1) + 0.8) < 1e-12


def test_zitterbewegung_displacement_against_quadrature():
    rep = dr.build_rep("D4")
    H = 4 * ALPHA[0] + 3 * BETA
    t = 0.9

    def vel(s, k, part):
        U = expm(-1j * H * s)
        m = (U.conj().T @ ALPHA[0] @ U).ravel()[k]
        return m.real if part == 0 else m.imag

    ref = np.array([integrate.quad(vel, 0, t, args=(k, 0), epsabs=1e-13)[0]
                    + 1j * integrate.quad(vel, 0, t, args=(k, 1), epsabs=1e-13)[0] for k in range(16)]).reshape(4, 4)
    disp, _ = dr.zitterbewegung_displacement(rep, KIN, 0, t)
    assert np.allclose(d4(disp), ref, atol=1e-10)


@pytest.mark.parametrize("kind", dr.REPS)
def test_zitterbewegung_routes_agree(kind):
    rep = dr.build_rep(kind)
    for t in (0.0, 0.5, 1.3):
        assert dr.zitterbewegung_heisenberg_residual(rep, KIN, 0, t) < 1e-12
        disp, _ = dr.zitterbewegung_displacement(rep, KIN, 0, t)
        assert disp.distance(dr.zitterbewegung_direct(rep, KIN, 0, t)) < 1e-10


def test_zitterbewegung_empty_grid():
    with pytest.raises(ValueError):
        dr.zitterbewegung_series(dr.build_rep("D4"), KIN, 0, [])


def test_star_exponential_group_law():
    rep = dr.build_rep("D6")
    a = dr.dirac_star_exponential(rep, KIN, 0.3)
    b = dr.dirac_star_exponential(rep, KIN, 0.4)
    ab = dr.dirac_star_exponential(rep, KIN, 0.7)
    assert rep.product(a, b).distance(ab) < 1e-12
    assert ab.distance(dr.dirac_exponential_closed(rep, KIN, 0.7)) < 1e-12


def test_unknown_representation():
    with pytest.raises(ValueError):
        dr.build_rep("D7")


PYTH = [(Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)), (Fraction(8, 17), Fraction(15, 17))]
AXES = [(1, 0, 0), (Fraction(2, 3), Fraction(1, 3), Fraction(2, 3)), (Fraction(3, 5), 0, Fraction(-4, 5))]


@given(st.sampled_from(dr.REPS), st.sampled_from(PYTH), st.sampled_from(AXES))
def test_rotor_conjugation_preserves_algebra(kind, cs, n):
    rep = dr.build_rep(kind)
    R = dr.exact_rotor(rep, cs[0], cs[1], n)
    Rinv = dr.exact_rotor(rep, cs[0], -cs[1], n)
    assert rep.product(R, Rinv) == rep.one()
    alpha = [rep.product(R, a, Rinv) for a in rep.alpha]
    beta = rep.product(R, rep.beta, Rinv)
    assert beta == rep.beta
    for i in range(3):
        assert rep.anticommutator(alpha[i], beta).is_zero()
        for j in range(3):
            exp = rep.one(as_scalar(2)) if i == j else Multivector.zero(rep.d)
            assert rep.anticommutator(alpha[i], alpha[j]) == exp
    assert rep.trace(rep.product(alpha[0], alpha[0])) == 4 * ONE
