import json
import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symplectic_double.quiver import mutate_quiver
from symplectic_double.surface import (
    FlipError,
    Triangulation,
    all_polygon_triangulations,
    epsilon_of,
    flip,
    flip_consistency_check,
    mirror,
    polygon_flip_graph,
    reordered,
)
from symplectic_double.linalg import integer_kernel

CATALAN = {3: 1, 4: 2, 5: 5, 6: 14, 7: 42, 8: 132, 9: 429}


def test_square_flip():
    t = Triangulation.from_polygon(4, [(1, 3)])
    assert flip(t, "13").diagonals() == ((2, 4),)
    assert epsilon_of(t).epsilon == ((0,),)


def test_pentagon_flip_and_epsilon():
    t = Triangulation.from_polygon(5, [(1, 3), (1, 4)])
    assert flip(t, "13").diagonals() == ((1, 4), (2, 4))
    q = epsilon_of(t)
    assert q.epsilon[q.index("13")][q.index("14")] == 1
    assert mirror(t).epsilon == q.negated().epsilon


def test_hexagon_fan_is_a3():
    q = epsilon_of(Triangulation.fan(6))
    assert q.labels == ("13", "14", "15")
    assert q.epsilon == ((0, 1, 0), (-1, 0, 1), (0, -1, 0))


def test_flip_twice_returns():
    t = Triangulation.fan(7)
    for e in t.internal_edges:
        u = flip(t, e)
        (new,) = set(u.internal_edges) - set(t.internal_edges)
        assert flip(u, new).canonical() == t.canonical()


def test_flip_errors():
    t = Triangulation.fan(5)
    with pytest.raises(FlipError):
        flip(t, "12")
    with pytest.raises(FlipError):
        flip(t, "nope")
    folded = Triangulation((("a", "a", "b"), ("b", "c", "d")))
    with pytest.raises(FlipError):
        flip(folded, "a")


def test_invalid_triangulations():
    with pytest.raises(ValueError):
        Triangulation((("a", "b"),))
    with pytest.raises(ValueError):
        Triangulation((("a", "a", "a"),))
    with pytest.raises(ValueError):
        Triangulation.from_polygon(5, [(1, 3)])
    with pytest.raises(ValueError):
        Triangulation.from_polygon(5, [(1, 3), (2, 4)])


def test_json_roundtrip():
    t = Triangulation.from_polygon(6, [(1, 3), (3, 5), (1, 5)])
    assert Triangulation.from_json(json.loads(t.dumps())).canonical() == t.canonical()
    g = Triangulation((("a", "b", "c"), ("a", "e", "d")))
    assert Triangulation.from_json(json.loads(g.dumps())).triangles == g.triangles


@pytest.mark.parametrize("m", range(3, 10))
def test_flip_graph_counts(m):
    g = polygon_flip_graph(m)
    assert len(g.nodes) == CATALAN[m]
    assert all(g.degree(i) == m - 3 for i in range(len(g.nodes)))
    if len(g.nodes) > 1:
        assert nx.is_connected(g.to_networkx())


def test_small_flip_graphs():
    assert len(polygon_flip_graph(4).edges) == 1
    g = polygon_flip_graph(5).to_networkx()
    assert nx.is_isomorphic(g, nx.cycle_graph(5))
    with pytest.raises(ValueError):
        polygon_flip_graph(2)


def test_graphml_parses():
    text = polygon_flip_graph(6).graphml()
    g = nx.parse_graphml(text)
    assert g.number_of_nodes() == 14 and g.number_of_edges() == 14 * 3 // 2


@pytest.mark.parametrize("m", range(4, 9))
def test_flip_consistency_exhaustive(m):
    for t in all_polygon_triangulations(m):
        for e in t.internal_edges:
            assert flip_consistency_check(t, e)


def test_flip_consistency_negative_control():
    t = Triangulation.fan(5)
    assert not flip_consistency_check(t, "13", corrupt=True)
    assert not flip_consistency_check(Triangulation.fan(4), "13", corrupt=True)


def test_kernel_parity():
    for m in range(4, 10):
        q = epsilon_of(Triangulation.fan(m))
        assert len(integer_kernel(q.epsilon)) == (m - 3) % 2


@given(st.integers(4, 9), st.integers(0, 10**6))
def test_random_flip_walk_matches_mutation(m, seed):
    rng = random.Random(seed)
    t = Triangulation.fan(m)
    q = epsilon_of(t)
    for _ in range(6):
        e = rng.choice(t.internal_edges)
        t = flip(t, e, new_label=e)
        q = mutate_quiver(q, e)
        assert reordered(epsilon_of(t), q.labels) == q
