import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_epsilon
from symplectic_double.double import DoubleSeed
from symplectic_double.quiver import Quiver
from symplectic_double.tropical import (
    TropPoint,
    check_involution,
    check_pentagon,
    on_wall,
    trop_limit_check,
    trop_mutate,
)

A2 = Quiver.from_matrix([[0, 1], [-1, 0]])
ZERO = Quiver.from_matrix([[0, 0], [0, 0]])


@st.composite
def cases(draw, max_rank=5, bound=3, coord=6):
    n = draw(st.integers(1, max_rank))
    q = Quiver.from_matrix(random_epsilon(random.Random(draw(st.integers(0, 10**6))), n, bound))
    coords = st.lists(st.integers(-coord, coord), min_size=n, max_size=n)
    return q, TropPoint(tuple(draw(coords)), tuple(draw(coords))), draw(st.integers(0, n - 1))


def test_parse_and_render():
    p = TropPoint.parse("1,0;0,0")
    assert p.x == (1, 0) and p.b == (0, 0)
    assert p.render() == "1,0;0,0"
    assert TropPoint.parse("1/2,-3;0,1").x[0] == TropPoint((0.5, 0), (0, 0)).x[0]
    for bad in ("1;0,0", "a,b"):
        with pytest.raises(ValueError):
            TropPoint.parse(bad)


def test_a2_example():
    out = trop_mutate(TropPoint.parse("1,0;0,0"), A2, 0)
    assert out.x == (-1, 1) and out.b == (0, 0)


def test_trivial_quiver():
    out = trop_mutate(TropPoint((3, -2), (5, 7)), ZERO, 0)
    assert out == TropPoint((-3, -2), (-5, 7))
    assert trop_mutate(TropPoint((0, 0), (0, 0)), A2, 1) == TropPoint((0, 0), (0, 0))


def test_rank_mismatch():
    with pytest.raises(ValueError):
        trop_mutate(TropPoint((1,), (0,)), A2, 0)
    with pytest.raises((ValueError, IndexError, KeyError)):
        trop_mutate(TropPoint((1, 0), (0, 0)), A2, 5)


def test_limit_examples():
    s = DoubleSeed(A2)
    p = TropPoint.parse("1,0;0,0")
    v = trop_limit_check(s, 0, p)
    assert v and v.details["wall"] is False
    assert trop_limit_check(DoubleSeed(ZERO), 0, TropPoint((2, 1), (1, -1)), bases=(2,))
    bad = TropPoint.parse("2,0;0,0")
    dropped = trop_limit_check(s, 0, bad, trop_map=lambda p, q, k: trop_mutate(p, q, k, drop_max=True))
    assert not dropped and dropped.witness


def test_limit_rejects_bad_input():
    with pytest.raises(ValueError):
        trop_limit_check(DoubleSeed(A2), 0, TropPoint((0.5, 0), (0, 0)))
    with pytest.raises(ValueError):
        trop_limit_check(DoubleSeed(A2), 0, TropPoint((1, 0), (0, 0)), bases=(1,))


def test_walls():
    assert on_wall(TropPoint((0, 1), (0, 0)), A2, 0)
    assert not on_wall(TropPoint((1, 0), (0, 0)), A2, 0)


@given(cases())
def test_involution(case):
    q, p, k = case
    assert check_involution(p, q, k)


@given(cases())
def test_integrality(case):
    q, p, k = case
    assert trop_mutate(p, q, k).is_integral()


@given(cases(max_rank=3, bound=2, coord=4))
def test_limit_agreement(case):
    q, p, k = case
    assert trop_limit_check(DoubleSeed(q), k, p)


@given(st.lists(st.fractions(-10, 10, max_denominator=5), min_size=4, max_size=4))
def test_pentagon(vals):
    assert check_pentagon(TropPoint(tuple(vals[:2]), tuple(vals[2:])))
