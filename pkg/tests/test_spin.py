import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import SIGMA, euclid_matrix
from deformq.grassmann import Multivector, involution, trace
from deformq.scalar import HBAR, I, ONE, ZERO
from deformq.spin import (
    evolve_sigma,
    fermionic_oscillator,
    pauli_product,
    precession_series,
    rodrigues,
    rotate,
    rotate_exact,
    rotor,
    sigma,
    sigma_closed_form,
    spin,
    spin_expectations,
    spin_projector,
)


def test_sigma_maps_to_pauli_matrices():
    for i in (1, 2, 3):
        assert np.allclose(euclid_matrix(sigma(i), SIGMA, 0.7), SIGMA[i - 1])


def test_sigma_needs_three_generators():
    with pytest.raises(ValueError):
        sigma(1, 2)


def test_sigma_algebra_and_hermiticity():
    s1, s2, s3 = (sigma(i) for i in (1, 2, 3))
    assert pauli_product(s1, s2) == s3.scale(I)
    assert pauli_product(s3, s3) == Multivector.scalar(3, ONE)
    for s in (s1, s2, s3):
        assert involution(s) == s


def test_fermionic_oscillator_states():
    osc = fermionic_oscillator(2)
    for label, st in osc.states.items():
        assert pauli_product(osc.hamiltonian, st.wigner) == st.wigner.scale(osc.energies[label])
        assert trace(st.wigner) == ONE
    up, down = osc.states[ONE / 2], osc.states[-ONE / 2]
    assert up.wigner + down.wigner == Multivector.scalar(3, ONE)
    assert pauli_product(up.wigner, down.wigner).is_zero()


def test_spin_expectations_exact():
    s1, s2, s3, ssq = spin_expectations(spin_projector(1))
    assert (s1, s2, s3) == (ZERO, ZERO, HBAR / 2)
    assert ssq == HBAR * HBAR * 3 / 4
    assert spin_expectations(spin_projector(-1))[2] == -HBAR / 2


def test_fermionic_oscillator_rejects_zero_frequency():
    with pytest.raises(ValueError):
        fermionic_oscillator(0)


def test_heisenberg_sigma_vs_matrix_evolution():
    # H = omega S_3 = (hbar omega / 2) sigma_3
    omega, hbar = 1.3, 0.7
    H = 0.5 * hbar * omega * SIGMA[2]
    for t in (0.0, 0.4, 2.2):
        U = expm(-1j * H * t / hbar)
        for i in (1, 2, 3):
            ref = U.conj().T @ SIGMA[i - 1] @ U
            assert np.allclose(euclid_matrix(evolve_sigma(i, omega, t, hbar), SIGMA, hbar), ref, atol=1e-12)
            assert evolve_sigma(i, omega, t, hbar).distance(sigma_closed_form(i, omega, t, hbar)) < 1e-12


def test_precession_follows_bloch_equation():
    times = list(np.linspace(0, 4, 9))
    rows = precession_series((0.0, 0.0, 2.0), 1.0, 1.0, 1.0, times, 1.0)
    for t, St, _dS, res in rows:
        assert res < 1e-12
        # S_1(t) = cos(wt) S_1 - sin(wt) S_2 in the Heisenberg picture
        target = spin(1).to_float().scale(math.cos(2 * t)) - spin(2).to_float().scale(math.sin(2 * t))
        assert St[0].distance(target) < 1e-12
        assert St[2].distance(spin(3).to_float()) < 1e-12


def test_precession_rejects_empty_grid():
    with pytest.raises(ValueError):
        precession_series((0, 0, 1), times=[])


def test_rotor_matches_su2_matrix():
    n = np.array([2, -1, 2]) / 3
    phi = 0.9
    U = expm(-0.5j * phi * sum(k * s for k, s in zip(n, SIGMA)))
    assert np.allclose(euclid_matrix(rotor(phi, tuple(n), 1.0), SIGMA, 1.0), U, atol=1e-12)


def test_rotation_of_generators_is_rodrigues():
    n = (0.6, 0.0, 0.8)
    t = [Multivector.generator(3, i, ONE).to_float() for i in (1, 2, 3)]
    rot = [rotate(1.2, n, x) for x in t]
    ref = rodrigues(1.2, n, t)
    assert max(a.distance(b) for a, b in zip(rot, ref)) < 1e-12


def test_exact_rotation_pythagorean_angle():
    n = (Fraction(2, 3), Fraction(-1, 3), Fraction(2, 3))
    s = [sigma(i) for i in (1, 2, 3)]
    rot = [rotate_exact(Fraction(3, 5), Fraction(4, 5), n, x) for x in s]
    # cos phi = 2 (3/5)^2 - 1, sin phi = 2 (3/5)(4/5)
    assert rot == rodrigues((Fraction(-7, 25), Fraction(24, 25)), n, s)
