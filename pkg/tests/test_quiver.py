import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symplectic_double.quiver import (
    Quiver,
    epsilon_kernel,
    mutate_matrix_closed_form,
    mutate_quiver,
)


@st.composite
def quivers(draw, max_rank=5, bound=3):
    n = draw(st.integers(1, max_rank))
    eps = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(st.integers(-bound, bound))
            eps[i][j], eps[j][i] = v, -v
    return Quiver.from_matrix(eps)


def test_a2_mutation():
    q = Quiver.from_matrix([[0, 1], [-1, 0]])
    assert mutate_quiver(q, 0).epsilon == ((0, -1), (1, 0))


def test_a3_mutation_at_middle():
    q = Quiver.from_matrix([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    assert mutate_quiver(q, 1).epsilon == ((0, -1, 1), (1, 0, -1), (-1, 1, 0))


@given(quivers(), st.data())
def test_gram_matrix_matches_closed_form(q, data):
    k = data.draw(st.integers(0, q.rank - 1))
    assert [list(r) for r in mutate_quiver(q, k).epsilon] == mutate_matrix_closed_form(q.epsilon, k)


@given(quivers(), st.data())
def test_mutation_is_an_involution(q, data):
    k = data.draw(st.integers(0, q.rank - 1))
    assert mutate_quiver(mutate_quiver(q, k), k) == q


@given(quivers(), st.data())
def test_mutation_preserves_kernel_rank(q, data):
    k = data.draw(st.integers(0, q.rank - 1))
    assert len(epsilon_kernel(mutate_quiver(q, k))) == len(epsilon_kernel(q))


def test_rejects_non_skew_matrix():
    with pytest.raises(ValueError):
        Quiver.from_matrix([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        Quiver.from_matrix([[1, 0], [0, 0]])


def test_labels_and_json_roundtrip():
    q = Quiver.from_matrix([[0, 2], [-2, 0]], labels=["a", "b"])
    assert q.index("b") == 1 and q.index(0) == 0
    assert Quiver.from_json(json.loads(q.dumps())) == q
    with pytest.raises((KeyError, ValueError, IndexError)):
        q.index("c")


def test_kernel():
    assert epsilon_kernel(Quiver.from_matrix([[0, 1], [-1, 0]])) == []
    ker = epsilon_kernel(Quiver.from_matrix([[0, 1, 0], [-1, 0, 1], [0, -1, 0]]))
    assert len(ker) == 1 and ker[0][1] == 0 and ker[0][0] == ker[0][2] != 0
