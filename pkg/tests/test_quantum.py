import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_epsilon
from symplectic_double.double import DoubleSeed, mutate_double
from symplectic_double.quantum import (
    QCoeff,
    QFraction,
    QTorus,
    check_bar_symmetry,
    check_generator_relations,
    check_q_equals_one,
    check_relations_preserved,
    expand_geometric,
    psi_truncated,
    q_conjugation_check,
    q_mul,
    q_mutate_generators,
    q_specialize,
    shift_q_power,
)
from symplectic_double.quiver import Quiver
from symplectic_double.symbolic import RationalFunction as RF
from symplectic_double.symbolic import rf_equal

A2 = DoubleSeed(Quiver.from_matrix([[0, 1], [-1, 0]]))
T = QTorus(A2)
q = QCoeff.q


@st.composite
def seeds(draw, max_rank=3, bound=2):
    n = draw(st.integers(1, max_rank))
    rng = random.Random(draw(st.integers(0, 10**6)))
    return DoubleSeed(Quiver.from_matrix(random_epsilon(rng, n, bound))), draw(st.integers(0, n - 1))


def test_product_examples():
    x1, x2, b1, b2 = T.X(0), T.X(1), T.B(0), T.B(1)
    assert q_mul(x1, b1) == (b1 * x1).scale(q(2))
    assert b1 * b2 == b2 * b1
    assert x1 * x2 == (x2 * x1).scale(q(2))
    assert x1 * b2 == b2 * x1


def test_product_rejects_mixed_tori():
    other = QTorus(DoubleSeed(Quiver.from_matrix([[0]])))
    with pytest.raises(ValueError):
        q_mul(T.X(0), other.X(0))


@given(seeds())
def test_generator_relations(sk):
    s, _ = sk
    assert check_generator_relations(QTorus(s))


@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)),
                min_size=3, max_size=3))
def test_product_is_associative(vs):
    a, b, c = (T.monomial(v, q(i)) + T.one() for i, v in enumerate(vs))
    assert (a * b) * c == a * (b * c)


def test_normal_order_render():
    m = (T.B(0) * T.X(0))
    assert m.render() == "B1*X1"
    assert (T.X(0) * T.B(0)).render() == "(q^2)*B1*X1"


def test_coefficients():
    c = q(1) + QCoeff(-2)
    assert c.bar() == q(-1) + QCoeff(-2)
    assert (c * c).at_one() == 1
    assert QCoeff({1: 1, -1: -1}).render() == "q - q^(-1)"


def test_psi_truncated_examples():
    x = T.x_vec(0)
    assert psi_truncated(T, x, 1).denominator == ((1, x),)
    assert psi_truncated(T, x, 2).denominator == ((1, x), (3, x))
    series = expand_geometric(psi_truncated(T, x, 1), 2)
    expected = T.one() - T.monomial(x, q(1)) + T.monomial(T.x_vec(0, 2), q(2))
    assert series == expected
    assert rf_equal(q_specialize(psi_truncated(T, x, 1)), 1 / (1 + RF.var("X1")))
    with pytest.raises(ValueError):
        psi_truncated(T, x, 0)


def test_specialize_examples():
    m = T.monomial((1, 0, 1, 0), q(2))
    assert rf_equal(q_specialize(m), RF.var("B1") * RF.var("X1"))


def test_denominator_factors_must_commute():
    with pytest.raises(ValueError):
        QFraction(T.one(), ((1, T.x_vec(0)), (1, T.b_vec(0))))


def test_a2_images():
    imgs = q_mutate_generators(A2, 0)
    t = mutate_double(A2, 0).target
    assert imgs[t.x(0)].numerator == T.monomial(T.x_vec(0, -1)) and not imgs[t.x(0)].denominator
    assert rf_equal(q_specialize(imgs[t.b(1)]), RF.var("B2"))
    assert rf_equal(q_specialize(imgs[t.x(1)]), RF.var("X2") * (1 + RF.var("X1")))


def test_trivial_quiver_conjugation():
    s = DoubleSeed(Quiver.from_matrix([[0]]))
    assert q_conjugation_check(s, 0)
    assert check_q_equals_one(s, 0)


def test_conjugation_needs_depth():
    with pytest.raises(ValueError):
        q_conjugation_check(A2, 0, n=1)


def test_shifted_image_fails():
    imgs = q_mutate_generators(A2, 0)
    name = mutate_double(A2, 0).target.x(1)
    imgs[name] = shift_q_power(imgs[name])
    v = q_conjugation_check(A2, 0, images=imgs)
    assert not v and not v.details["generators"][name]


def test_inverse_order_is_not_classical():
    assert not q_conjugation_check(A2, 0, order="inverse", images=q_mutate_generators(A2, 0))


@given(seeds())
def test_images_specialize_to_classical(sk):
    s, k = sk
    assert check_q_equals_one(s, k)


@given(seeds())
def test_images_agree_with_conjugation(sk):
    s, k = sk
    assert q_conjugation_check(s, k, n=4)


@given(seeds())
def test_images_respect_relations_and_bar(sk):
    s, k = sk
    assert check_relations_preserved(s, k)
    assert check_bar_symmetry(s, k)
