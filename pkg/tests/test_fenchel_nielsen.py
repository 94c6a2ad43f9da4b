import json
import random
from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symplectic_double.fenchel_nielsen import (
    GluedRep,
    TrivalentGraph,
    b_coordinate,
    center_act,
    conj,
    coboundary,
    coordinates,
    cycle_traces,
    dumbbell_graph,
    eigenvalue_on,
    invariance_checks,
    is_coboundary,
    lagrangian_lattice,
    mat,
    monodromy_eigenvalue,
    random_glued_rep,
    random_trivalent_graph,
    rescale_framing,
    rescale_gluing,
    reverse_edge,
    same_up_to_framing_scale,
    theta_graph,
    vertex_gauge,
)

DIAG = mat([[3, 0], [0, F(1, 3)]])


@st.composite
def reps(draw, genera=(2, 3)):
    rng = random.Random(draw(st.integers(0, 10**6)))
    g = draw(st.sampled_from(genera))
    return random_glued_rep(random_trivalent_graph(g, rng), rng), rng


def test_lattice_examples():
    assert lagrangian_lattice(theta_graph())[0] == 2
    assert lagrangian_lattice(dumbbell_graph())[0] == 2


@pytest.mark.parametrize("g", range(2, 6))
def test_lattice_rank_is_genus(g):
    rng = random.Random(g)
    for _ in range(10):
        graph = random_trivalent_graph(g, rng)
        assert graph.genus == g == len(graph.edges) - graph.n_vertices + 1
        assert lagrangian_lattice(graph)[0] == g


def test_invalid_graphs():
    with pytest.raises(ValueError):
        TrivalentGraph(2, ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        TrivalentGraph(4, ((0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (2, 3)))
    with pytest.raises(ValueError):
        TrivalentGraph(2, ((0, 1), (0, 1), (0, 1)), genus=3)


def test_graph_json_roundtrip():
    g = theta_graph()
    assert TrivalentGraph.from_json(json.loads(json.dumps(g.to_json()))) == g


def test_eigenvalue_examples():
    assert eigenvalue_on(DIAG, (1, 0)) == 3
    assert eigenvalue_on(DIAG, (0, 1)) == F(1, 3)
    with pytest.raises(ValueError):
        eigenvalue_on(DIAG, (1, 1))


def test_reversal_inverts():
    rng = random.Random(7)
    r = random_glued_rep(theta_graph(), rng)
    before = coordinates(r)
    after = coordinates(reverse_edge(r, 0))
    assert after[0] == (1 / before[0][0], 1 / before[0][1])
    assert after[1:] == before[1:]
    assert coordinates(reverse_edge(reverse_edge(r, 0), 0)) == before


def test_rep_json_roundtrip_and_validation():
    rng = random.Random(1)
    r = random_glued_rep(dumbbell_graph(), rng)
    back = GluedRep.from_json(json.loads(r.dumps()))
    assert coordinates(back) == coordinates(r)
    data = json.loads(r.dumps())
    data["framings"][0] = ["1", "1"] if data["framings"][0] != ["1", "1"] else ["1", "0"]
    with pytest.raises(ValueError):
        GluedRep.from_json(data)
    data = json.loads(r.dumps())
    data["eigenvalues"][0] = "99"
    with pytest.raises(ValueError):
        GluedRep.from_json(data)


def test_b_coordinate_of_equal_half_loops():
    rng = random.Random(3)
    r = random_glued_rep(theta_graph(), rng)
    tp, _ = r.transports(0)
    # make T^- equal T^+ by replacing the matrix it is built from
    gl = r.gluings[0]
    h = r.graph.next_half_edge((0, -1))
    mats = dict(r.matrices)
    mats[h] = conj(gl, tp)
    assert b_coordinate(replace(r, matrices=mats), 0) == 1


def test_center_action_examples():
    rng = random.Random(11)
    r = random_glued_rep(random_trivalent_graph(3, rng), rng)
    n = len(r.graph.edges)
    assert center_act(r, (1,) * n) == r
    c = tuple(rng.choice((1, -1)) for _ in range(n))
    assert coordinates(center_act(r, c)) == coordinates(r)
    with pytest.raises(ValueError):
        center_act(r, (2,) * n)


def test_coboundary_is_vertex_gauge():
    rng = random.Random(13)
    r = random_glued_rep(random_trivalent_graph(3, rng), rng)
    s = [1, -1, -1, 1]
    gauged = r
    for v, sv in enumerate(s):
        if sv == -1:
            gauged = vertex_gauge(gauged, v, mat([[-1, 0], [0, -1]]))
    c = coboundary(r.graph, s)
    assert is_coboundary(r.graph, c)
    assert same_up_to_framing_scale(center_act(r, c), gauged)


def test_non_coboundary_acts_effectively():
    rng = random.Random(17)
    r = random_glued_rep(theta_graph(), rng)
    c = (-1, 1, 1)
    assert not is_coboundary(r.graph, c)
    assert cycle_traces(center_act(r, c)) != cycle_traces(r)


def test_gluing_twist_separates():
    rng = random.Random(19)
    r = random_glued_rep(theta_graph(), rng)
    other = rescale_gluing(r, 1, F(2))
    assert coordinates(other)[1][1] == 4 * coordinates(r)[1][1]
    assert coordinates(other) != coordinates(r)
    with pytest.raises(ValueError):
        rescale_gluing(r, 0, 0)


@given(reps())
def test_invariances(case):
    r, rng = case
    for v in invariance_checks(r, rng):
        assert v, v.witness


@given(reps(), st.fractions(-5, 5, max_denominator=5).filter(bool))
def test_b_is_scale_free(case, c):
    r, rng = case
    e = rng.randrange(len(r.graph.edges))
    assert b_coordinate(rescale_framing(r, e, c), e) == b_coordinate(r, e)
