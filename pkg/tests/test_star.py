import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import chevalley_matrix, euclid_matrix, form_array, mv_vector, SIGMA
from deformq.grassmann import BilinearForm, DimensionError, Multivector, contract_rules, involution
from deformq.scalar import HBAR, I, ONE, as_scalar
from deformq.star import (
    StarProductSpec,
    circle_chain,
    circle_power,
    circle_product,
    clifford_map,
    grassmann_exp,
    scalar_equivalence_check,
    solve_wick_form,
    square_scalar,
    star_exponential,
    wick_clifford,
    wick_conjugate,
    wick_pairing,
)
from deformq.verify import random_element, random_form, random_invertible_form


def brute_pairing(indices, Bm):
    """Sum over all permutations, kept when they list ordered pairs, with permutation sign."""
    n = len(indices)
    if n % 2:
        return 0
    total = 0
    seen = set()
    for perm in itertools.permutations(range(n)):
        pairs = [(perm[2 * k], perm[2 * k + 1]) for k in range(n // 2)]
        if any(a > b for a, b in pairs):
            continue
        key = tuple(sorted(pairs))
        if key in seen:
            continue
        seen.add(key)
        sign = 1
        flat = [x for pr in key for x in pr]
        for i in range(n):
            for j in range(i + 1, n):
                if flat[i] > flat[j]:
                    sign = -sign
        val = sign
        for a, b in key:
            val *= Bm[indices[a] - 1, indices[b] - 1]
        total += val
    return total


def test_circle_matches_chevalley_operators():
    rng = random.Random(11)
    for _ in range(30):
        d = rng.randint(1, 5)
        B = random_form(rng, d)
        u, v = random_element(rng, d), random_element(rng, d)
        lhs = mv_vector(circle_product(u, v, B))
        rhs = chevalley_matrix(u, form_array(B)) @ mv_vector(v)
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_pauli_product_matches_pauli_matrices():
    rng = random.Random(12)
    P = BilinearForm.pauli(3)
    for hbar in (1.0, 0.3):
        for _ in range(20):
            u, v = random_element(rng, 3), random_element(rng, 3)
            lhs = euclid_matrix(circle_product(u, v, P), SIGMA, hbar)
            rhs = euclid_matrix(u, SIGMA, hbar) @ euclid_matrix(v, SIGMA, hbar)
            assert np.allclose(lhs, rhs, atol=1e-12)


def test_clifford_map_anticommutator():
    rng = random.Random(13)
    d = 4
    B = random_form(rng, d)
    u = random_element(rng, d)
    for i, j in itertools.product(range(1, d + 1), repeat=2):
        ti, tj = Multivector.generator(d, i, ONE), Multivector.generator(d, j, ONE)
        lhs = clifford_map(ti, clifford_map(tj, u, B), B) + clifford_map(tj, clifford_map(ti, u, B), B)
        assert lhs == u.scale(B(i, j) + B(j, i))


def test_generator_circle_is_wedge_plus_contraction():
    rng = random.Random(14)
    B = random_form(rng, 4)
    u = random_element(rng, 4)
    t2 = Multivector.generator(4, 2, ONE)
    assert circle_product(t2, u, B) == t2.wedge(u) + contract_rules(t2, u, B)


def test_wick_pairing_against_brute_force():
    rng = random.Random(15)
    for n in (2, 4, 6):
        for _ in range(10):
            d = rng.randint(2, 4)
            B = random_form(rng, d)
            idx = [rng.randint(1, d) for _ in range(n)]
            Bm = form_array(B)
            assert abs(complex(wick_pairing(idx, B).evaluate(1.0)) - brute_pairing(idx, Bm)) < 1e-12


def test_scalar_part_against_chevalley_chain():
    rng = random.Random(16)
    for _ in range(20):
        d = rng.randint(2, 4)
        B = random_invertible_form(rng, d)
        idx = [rng.randint(1, d) for _ in range(4)]
        r = scalar_equivalence_check(idx, B)
        assert r.ok
        Bm = form_array(B)
        vec = np.zeros(1 << d, dtype=complex)
        vec[0] = 1
        for i in reversed(idx):
            vec = chevalley_matrix(Multivector.generator(d, i, ONE), Bm) @ vec
        assert abs(complex(r.lhs.evaluate(1.0)) - vec[0]) < 1e-12
        assert r.lhs == wick_pairing(idx, B)


def test_odd_length_scalar_parts_vanish():
    B = random_invertible_form(random.Random(17), 3)
    r = scalar_equivalence_check([1, 2, 3], B)
    assert r.ok and not r.lhs and not r.rhs


def test_wick_form_solves_its_equation():
    rng = random.Random(18)
    for d in (2, 3, 5):
        B = random_invertible_form(rng, d)
        w = solve_wick_form(B.g, B.A)
        assert all(not x for row in w.residual() for x in row)
        u = random_element(rng, d)
        minus = solve_wick_form(B.g, BilinearForm([[-x for x in row] for row in B.A.rows()]))
        assert wick_conjugate(wick_conjugate(u, w), minus) == u


def test_wick_conjugated_generators_generate_clifford_algebra():
    rng = random.Random(19)
    B = random_invertible_form(rng, 3)
    w = solve_wick_form(B.g, B.A)
    u = random_element(rng, 3)
    for i, j in itertools.product((1, 2, 3), repeat=2):
        gi = wick_clifford(Multivector.generator(3, i, ONE), w)
        gj = wick_clifford(Multivector.generator(3, j, ONE), w)
        assert gi(gj(u)) + gj(gi(u)) == u.scale(B.g(i, j) * 2)


def test_singular_symmetric_part_is_reported():
    B = BilinearForm([[as_scalar(0), as_scalar(1)], [as_scalar(-1), as_scalar(0)]])
    with pytest.raises(ArithmeticError):
        solve_wick_form(B.g, B.A)


def test_grassmann_exp_requires_even_nilpotent():
    with pytest.raises(ValueError):
        grassmann_exp(Multivector.generator(2, 1, ONE))
    F = Multivector.monomial(4, [1, 2], ONE) + Multivector.monomial(4, [3, 4], ONE)
    e = grassmann_exp(F)
    assert e == Multivector.scalar(4, ONE) + F + Multivector.monomial(4, [1, 2, 3, 4], ONE)


def test_star_exponential_closed_vs_matrix():
    X = (Multivector.monomial(3, [1, 2], I * 2) + Multivector.monomial(3, [2, 3], as_scalar(3))).scale(ONE / 5)
    spec = StarProductSpec.pauli(3)
    assert square_scalar(X, spec) is not None
    for t in (0.0, 0.7, 2.5):
        a = star_exponential(X, spec, t, 0.8, method="closed")
        b = star_exponential(X, spec, t, 0.8, method="matrix")
        assert a.distance(b) < 1e-12


def test_star_exponential_generic_matches_matrix_expm():
    from scipy.linalg import expm

    rng = random.Random(20)
    X = random_element(rng, 2, 4)
    spec = StarProductSpec.pauli(2)
    M = euclid_matrix(X, SIGMA[:2], 1.0)
    E = star_exponential(X, spec, 0.6, 1.0)
    assert np.allclose(euclid_matrix(E, SIGMA[:2], 1.0), expm(-1j * 0.6 * M), atol=1e-12)


def test_spec_dimension_check():
    with pytest.raises(DimensionError):
        StarProductSpec.pauli(3).product(Multivector.generator(2, 1, ONE), Multivector.generator(2, 1, ONE))


def test_circle_power_and_chain():
    B = BilinearForm.pauli(3)
    t1 = Multivector.generator(3, 1, ONE)
    assert circle_power(t1, 2, B) == Multivector.scalar(3, HBAR / 2)
    assert circle_chain([t1, t1, t1], B) == t1.scale(HBAR / 2)


@st.composite
def circle_data(draw):
    d = draw(st.integers(1, 4))
    seed = draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    return random_form(rng, d), random_element(rng, d), random_element(rng, d), random_element(rng, d)


@given(circle_data())
def test_circle_product_associative(data):
    B, x, y, z = data
    assert circle_product(circle_product(x, y, B), z, B) == circle_product(x, circle_product(y, z, B), B)


@given(circle_data())
def test_circle_unit_and_linearity(data):
    B, x, y, z = data
    one = Multivector.scalar(x.d, ONE)
    assert circle_product(one, x, B) == x
    assert circle_product(x, one, B) == x
    assert circle_product(x + y, z, B) == circle_product(x, z, B) + circle_product(y, z, B)


@given(circle_data())
def test_symmetric_form_circle_respects_involution(data):
    B, x, y, _ = data
    g = B.g
    assert involution(circle_product(x, y, g)) == circle_product(involution(y), involution(x), g)
