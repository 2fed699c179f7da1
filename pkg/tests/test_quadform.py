import pytest
from hypothesis import given, strategies as st

from dserkit.errors import InvalidRank, NotInvertible
from dserkit.linalg import Matrix
from dserkit.quadform import (QuadraticSpace, adjoint, diagonal_space, eval_bilinear, eval_quadratic,
                              hyperbolic_space, is_orthogonal, orthogonal_sum)
from dserkit.ring import Modular, Rationals, poly_ring

P = 10007
vals = st.integers(-50, 50)


@given(st.lists(vals, min_size=3, max_size=3), st.lists(st.integers(1, 9), min_size=3, max_size=3))
def test_diagonal_quadratic_form(u, q):
    R = Rationals()
    s = diagonal_space(R, q)
    assert eval_quadratic(s, u) == sum(qj * uj * uj for qj, uj in zip(q, u))


@given(st.lists(vals, min_size=4, max_size=4))
def test_hyperbolic_form_is_evaluation(v):
    R = Modular(P)
    h = hyperbolic_space(R, 2)
    x, f = v[:2], v[2:]
    assert eval_quadratic(h, v) == sum(a * b for a, b in zip(x, f))


def test_hyperbolic_rank_must_be_positive():
    with pytest.raises(InvalidRank):
        hyperbolic_space(Rationals(), 0)


def test_polarization_identity():
    R = Rationals()
    s = orthogonal_sum(diagonal_space(R, [3, 5]), hyperbolic_space(R, 1))
    u, v = [1, 2, 3, 4], [-2, 7, 0, 1]
    uv = [a + b for a, b in zip(u, v)]
    assert eval_bilinear(s, u, v) == eval_quadratic(s, uv) - eval_quadratic(s, u) - eval_quadratic(s, v)


def test_singular_gram_rejected():
    R = Rationals()
    with pytest.raises(NotInvertible):
        QuadraticSpace(Matrix.from_values(R, [[1, 1], [1, 1]]))
    with pytest.raises(ValueError):
        QuadraticSpace(Matrix.from_values(R, [[1, 2], [0, 1]]))


def test_adjoint_characterization():
    R = Modular(P)
    s = orthogonal_sum(diagonal_space(R, [3, 7]), hyperbolic_space(R, 2))
    a = Matrix.from_values(R, [[(3 * i + 5 * j) % 11 for j in range(6)] for i in range(6)])
    b = adjoint(s, a)
    for u in ([1, 0, 2, 0, 1, 3], [0, 4, 0, 1, 0, 2]):
        for v in ([2, 1, 0, 0, 5, 1], [0, 0, 1, 1, 1, 1]):
            au = (a @ Matrix.column(R, u)).col(0)
            bv = (b @ Matrix.column(R, v)).col(0)
            assert eval_bilinear(s, au, v) == eval_bilinear(s, u, bv)


def test_is_orthogonal():
    L = poly_ring(("d1",), ("d1",))
    s = orthogonal_sum(diagonal_space(L, [L.var("d1")]), hyperbolic_space(L, 1))
    assert is_orthogonal(s, Matrix.identity(L, 3))
    swap = Matrix.from_values(L, [[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    assert is_orthogonal(s, swap)
    assert not is_orthogonal(s, Matrix.diag(L, [1, 2, 1]))
