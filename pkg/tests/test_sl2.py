import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symplectic_double.linalg import rank
from symplectic_double.sl2 import (
    DegenerateError,
    DoubleConfig,
    PathLocalSystem,
    VectorConfig,
    b_alpha,
    casimir,
    cyclic_shift_check,
    delta,
    delta_table,
    double_coords,
    flip_oracle_check,
    glue_solve,
    mirror_monomial_check,
    mirror_x_check,
    plucker_check,
    random_double_config,
    random_vector_config,
)
from symplectic_double.surface import Triangulation, all_polygon_triangulations

STD = VectorConfig(((1, 0), (1, 1), (0, 1), (-1, 1)))
I2 = ((1, 0), (0, 1))


def nonzero_fractions():
    return st.fractions(min_value=-5, max_value=5, max_denominator=6).filter(bool)


def test_delta_examples():
    assert delta((1, 0), (0, 1)) == 1
    assert delta((1, 0), (2, 0)) == 0
    assert delta((1, 1), (-1, 1)) == 2


def test_standard_square():
    dc = DoubleConfig(STD, STD)
    coords = double_coords(dc, Triangulation.from_polygon(4, [(1, 3)]))
    assert coords == {"13": (1, 1)}
    rescaled = dc.rescaled({2: F(7)})
    assert double_coords(rescaled, Triangulation.from_polygon(4, [(1, 3)])) == coords


def test_degenerate_configuration():
    c = VectorConfig(((1, 0), (2, 0), (0, 1), (1, 1)))
    with pytest.raises(DegenerateError):
        double_coords(DoubleConfig(c, c), Triangulation.from_polygon(4, [(1, 3)]))
    with pytest.raises(ValueError):
        VectorConfig(((0, 0), (1, 0)))
    with pytest.raises(ValueError):
        DoubleConfig(STD, VectorConfig(((1, 0),)))


def test_plucker_examples():
    assert plucker_check(STD, (1, 2, 3, 4))
    table = delta_table(STD)
    table[(1, 3)] += 1
    assert not plucker_check(None, (1, 2, 3, 4), table)


@given(st.integers(0, 10**6))
def test_plucker_identity(seed):
    c = random_vector_config(4, random.Random(seed))
    assert plucker_check(c, (1, 2, 3, 4))


@given(st.integers(0, 10**6), st.lists(nonzero_fractions(), min_size=6, max_size=6))
def test_rescaling_invariance(seed, factors):
    dc = random_double_config(6, random.Random(seed))
    t = Triangulation.from_polygon(6, [(1, 3), (1, 4), (4, 6)])
    scaled = dc.rescaled({i + 1: f for i, f in enumerate(factors)})
    assert double_coords(scaled, t, include_boundary=True) == double_coords(dc, t, include_boundary=True)


def test_flip_oracle_pentagon():
    rng = random.Random(5)
    dc = random_double_config(5, rng)
    for t in all_polygon_triangulations(5):
        for e in t.internal_edges:
            assert flip_oracle_check(dc, t, e)
            assert not flip_oracle_check(dc, t, e, corrupt="drop_x_factor")


def test_flip_oracle_symmetric_data():
    c = random_vector_config(6, random.Random(2))
    dc = DoubleConfig(c, c)
    t = Triangulation.fan(6)
    assert all(b == 1 for b, _ in double_coords(dc, t).values())
    assert all(flip_oracle_check(dc, t, e) for e in t.internal_edges)


@given(st.integers(6, 8), st.integers(0, 10**6))
def test_flip_oracle_random(m, seed):
    rng = random.Random(seed)
    dc = random_double_config(m, rng)
    t = rng.choice(all_polygon_triangulations(m))
    assert flip_oracle_check(dc, t, rng.choice(t.internal_edges))


def test_mirror_examples():
    rng = random.Random(3)
    dc = random_double_config(4, rng)
    assert mirror_x_check(dc)
    assert mirror_monomial_check(dc, Triangulation.fan(4))
    c = random_vector_config(4, rng)
    assert mirror_x_check(DoubleConfig(c, c))
    back = list(dc.back.vectors)
    back[0] = (back[0][0] + 1, back[0][1])
    assert not mirror_x_check(dc, perturbed_back=VectorConfig(tuple(back)))


@given(st.integers(4, 8), st.integers(0, 10**6))
def test_mirror_monomial_random(m, seed):
    rng = random.Random(seed)
    dc = random_double_config(m, rng)
    assert mirror_monomial_check(dc, rng.choice(all_polygon_triangulations(m)))


def test_glue_examples():
    r = glue_solve([0, 0, 0])
    assert r.kind == "unique" and r.base == (0, 0, 0)
    r = glue_solve([1, 1, 1, 1])
    assert r.kind == "family"
    assert r.base == (F(1, 2),) * 4 and r.generator == (1, -1, 1, -1)
    r = glue_solve([1, -1, 1, -1])
    assert r.kind == "infeasible" and r.certificate == -4
    assert r.to_json()["certificate"] == "alternating sum = -4"
    with pytest.raises(ValueError):
        glue_solve([1, 1])


@given(st.integers(3, 10), st.lists(st.fractions(-5, 5, max_denominator=4), min_size=10, max_size=10))
def test_glue_trichotomy(m, values):
    d = values[:m]
    r = glue_solve(d)
    a = [[int(j in (i, (i + 1) % m)) for j in range(m)] for i in range(m)]
    assert m - rank(a) == (0 if m % 2 else 1)
    if m % 2:
        assert r.kind == "unique"
    elif casimir(d) == 0:
        assert r.kind == "family" and r.dimension == 1
        for c in (0, 1, F(-3, 2)):
            t = [b + c * g for b, g in zip(r.base, r.generator)]
            assert all(t[i] + t[(i + 1) % m] == d[i] for i in range(m))
    else:
        assert r.kind == "infeasible" and r.certificate == -casimir(d)
    if r.kind == "unique":
        assert all(r.base[i] + r.base[(i + 1) % m] == d[i] for i in range(m))


def test_casimir_examples():
    assert casimir([3, 3, 3, 3]) == 0
    assert casimir([1, 2, 3, 4]) == -2
    with pytest.raises(ValueError):
        casimir([1, 2, 3])


def test_casimir_matches_feasibility():
    front, back = [1, 2, 3, 4], [2, 3, 4, 5]
    assert casimir(front) == casimir(back)
    assert glue_solve([b - a for a, b in zip(front, back)]).kind == "family"


def test_b_alpha_examples():
    p = PathLocalSystem(((1, 0), (0, 1)), (I2, I2))
    assert b_alpha(p) == 1
    with pytest.raises(ValueError):
        b_alpha(PathLocalSystem(((1, 0), (0, 1), (1, 1)), (I2, I2, I2)))
    with pytest.raises(ValueError):
        PathLocalSystem(((1, 0), (0, 1)), (I2, ((2, 0), (0, 1))))


@st.composite
def path_systems(draw):
    k = 2 * draw(st.integers(1, 3))
    rng = random.Random(draw(st.integers(0, 10**6)))
    vs = random_vector_config(k, rng).vectors
    ts = []
    for _ in range(k):
        a, b, c = (F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(3))
        # unipotent times diagonal keeps determinant 1
        lam = F(rng.randint(1, 4), rng.randint(1, 4))
        ts.append(((lam, lam * a), (lam * b, (1 + lam * lam * a * b) / lam)))
    return PathLocalSystem(vs, tuple(ts))


@given(path_systems(), st.data())
def test_b_alpha_invariances(p, data):
    try:
        value = b_alpha(p)
    except DegenerateError:
        return
    i = data.draw(st.integers(0, p.k - 1))
    c = data.draw(nonzero_fractions())
    assert b_alpha(p.rescaled(i, c)) == value
    assert cyclic_shift_check(p)
