import itertools
import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from deformq.grassmann import (
    BilinearForm,
    DimensionError,
    Multivector,
    berezin_integrate,
    contract_closed,
    contract_rules,
    hodge,
    involution,
    left_derivative,
    right_derivative,
    trace,
)
from deformq.scalar import HBAR, ONE, ZERO, as_scalar
from deformq.verify import random_form

coef = st.fractions(min_value=-3, max_value=3, max_denominator=4).map(as_scalar)


@st.composite
def elements(draw, d):
    terms = draw(st.dictionaries(st.integers(0, (1 << d) - 1), coef, max_size=4))
    return Multivector(d, terms)


@st.composite
def element_triples(draw):
    d = draw(st.integers(1, 5))
    return d, draw(elements(d)), draw(elements(d)), draw(elements(d))


def perm_sign(seq):
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def test_wedge_sign_matches_permutation_parity():
    d = 5
    for a, b in itertools.product(range(1 << d), repeat=2):
        if a & b:
            continue
        ia = [i for i in range(d) if a >> i & 1]
        ib = [i for i in range(d) if b >> i & 1]
        w = Multivector(d, {a: ONE}).wedge(Multivector(d, {b: ONE}))
        assert w.coefficient(a | b) == as_scalar(perm_sign(ia + ib))


def test_wedge_of_overlapping_monomials_vanishes():
    t1 = Multivector.generator(3, 1, ONE)
    assert t1.wedge(t1).is_zero()


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        Multivector.generator(2, 1) + Multivector.generator(3, 1)


def test_generator_contraction_values():
    B = BilinearForm([[as_scalar(1), as_scalar(2)], [as_scalar(-3), as_scalar(5)]])
    t1, t2 = Multivector.generator(2, 1, ONE), Multivector.generator(2, 2, ONE)
    assert contract_rules(t1, t2, B) == Multivector.scalar(2, as_scalar(2))
    assert contract_rules(t2, t1, B) == Multivector.scalar(2, as_scalar(-3))
    # theta_1 ⌋ (theta_1 theta_2) = B11 theta_2 - theta_1 B12
    assert contract_rules(t1, t1.wedge(t2), B) == t2 - t1.scale(2)


def test_berezin_and_trace_normalisation():
    top = Multivector.monomial(3, [1, 2, 3], ONE)
    assert berezin_integrate(top) == HBAR ** 3
    assert trace(Multivector.scalar(3, ONE)) == as_scalar(2)
    assert trace(Multivector.scalar(4, ONE)) == as_scalar(4)
    assert trace(Multivector.scalar(6, ONE)) == as_scalar(8)


def test_hodge_twice_is_identity_up_to_sign():
    for d in range(1, 6):
        for m in range(1 << d):
            u = Multivector(d, {m: ONE})
            hh = hodge(hodge(u))
            assert hh == u or hh == -u


def test_json_roundtrip():
    u = Multivector(4, {0: as_scalar(3), 5: HBAR, 15: as_scalar(-1) / 7})
    assert Multivector.from_json(json.loads(json.dumps(u.to_json()))) == u


def test_float_distance():
    u = Multivector.generator(2, 1, ONE)
    assert u.to_float().distance(u) == 0.0
    assert abs(u.scale(2).to_float().distance(u) - 1.0) < 1e-15


@given(element_triples())
def test_wedge_associative_and_graded_commutative(data):
    d, u, v, w = data
    assert u.wedge(v).wedge(w) == u.wedge(v.wedge(w))
    for (a, ca), (b, cb) in itertools.product(u.items(), v.items()):
        x, y = Multivector(d, {a: ca}), Multivector(d, {b: cb})
        ga, gb = bin(a).count("1"), bin(b).count("1")
        assert x.wedge(y) == y.wedge(x).scale((-1) ** (ga * gb))


@given(element_triples(), st.integers(0, 10 ** 6))
def test_closed_contraction_equals_rules(data, seed):
    d, u, v, w = data
    B = random_form(random.Random(seed), d)
    assert contract_closed(u, w, B) == contract_rules(u, w, B)
    assert contract_rules(u.wedge(v), w, B) == contract_rules(u, contract_rules(v, w, B), B)


@given(element_triples())
def test_involution_anti_automorphism(data):
    _, u, v, _ = data
    assert involution(u.wedge(v)) == involution(v).wedge(involution(u))
    assert involution(involution(u)) == u


@given(element_triples())
def test_derivatives_are_antiderivations(data):
    d, u, v, _ = data
    for i in range(1, d + 1):
        even = u.even_part()
        lhs = left_derivative(even.wedge(v), i)
        rhs = left_derivative(even, i).wedge(v) + even.wedge(left_derivative(v, i))
        assert lhs == rhs
        assert right_derivative(u.wedge(v.even_part()), i) == (
            u.wedge(right_derivative(v.even_part(), i)) + right_derivative(u, i).wedge(v.even_part()))


def test_scalar_part_of_zero():
    assert Multivector.zero(3).scalar_part() == ZERO
