from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from symplectic_double.linalg import integer_kernel, matmul, rank, smith_normal_form, solve_affine

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-5, 5), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_smith_form_factorizes(a):
    u, d, v = smith_normal_form(a)
    assert matmul(matmul(u, a), v) == d
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    assert all(d[i][j] == 0 for i in range(len(d)) for j in range(len(d[0])) if i != j)
    nonzero = [x for x in diag if x]
    assert all(x > 0 for x in nonzero)
    assert all(nonzero[i + 1] % nonzero[i] == 0 for i in range(len(nonzero) - 1))
    assert abs(sympy.Matrix(u).det()) == 1 and abs(sympy.Matrix(v).det()) == 1


@given(matrices)
def test_rank_and_kernel_match_sympy(a):
    m = sympy.Matrix(a)
    assert rank(a) == m.rank()
    ker = integer_kernel(a)
    assert len(ker) == len(a[0]) - m.rank()
    for v in ker:
        assert all(sum(r[j] * v[j] for j in range(len(v))) == 0 for r in a)


def test_smith_example():
    _, d, _ = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert [d[i][i] for i in range(3)] == [2, 6, 12]


def test_solve_affine():
    x, null = solve_affine([[1, 1], [1, -1]], [2, 0])
    assert x == [1, 1] and null == []
    x, null = solve_affine([[1, 1]], [1])
    assert len(null) == 1 and x[0] + x[1] == 1
    x, _ = solve_affine([[1, 1], [1, 1]], [0, 1])
    assert x is None
    x, _ = solve_affine([[Fraction(1, 2)]], [Fraction(1, 3)])
    assert x == [Fraction(2, 3)]
