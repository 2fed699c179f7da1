import pytest

from dserkit.dser import (ALPHA, BETA, HomMap, ambient_endo, ambient_space, component_map, elementary,
                          elementary_from_vector, hom_from_vectors, lift, star, zero_map)
from dserkit.errors import DimensionMismatch, IndexOutOfRange, UnsupportedVector
from dserkit.linalg import Matrix
from dserkit.quadform import diagonal_space, eval_bilinear, is_orthogonal
from dserkit.ring import poly_ring

from conftest import coordinate_matrix, random_ambient


def random_map(kind, amb, rng):
    R = amb.ring
    return HomMap(kind, Matrix.from_values(R, [[R.random(rng) for _ in range(amb.n)] for _ in range(amb.m)]))


def test_worked_example_rank_one():
    L = poly_ring(("c",))
    c = L.var("c")
    amb = ambient_space(diagonal_space(L, [1]), 1)
    g = elementary_from_vector(ALPHA, 1, 1, [c], amb)
    assert g.matrix == Matrix.from_values(L, [[1, 0, -c], [2 * c, 1, -c * c], [0, 0, 1]])
    assert g.theta.mat == Matrix.from_values(L, [[2 * c]])


def test_star_of_scalar_map():
    L = poly_ring(("a",))
    amb = ambient_space(diagonal_space(L, [1]), 1)
    theta = HomMap(ALPHA, Matrix.from_values(L, [[L.var("a")]]))
    assert star(theta, amb) == Matrix.from_values(L, [[L.var("a") / 2]])
    assert star(zero_map(BETA, amb), amb).is_zero()


def test_components_sum_to_map(zp, rng):
    amb = random_ambient(zp, 3, 2, rng)
    theta = random_map(ALPHA, amb, rng)
    total = zero_map(ALPHA, amb)
    for i in range(1, 4):
        for j in range(1, 3):
            c = component_map(theta, i, j)
            assert component_map(c, i, j) == c
            total = total + c
    assert total == theta
    assert component_map(zero_map(BETA, amb), 2, 1).is_zero()
    with pytest.raises(IndexOutOfRange):
        component_map(theta, 4, 1)


@pytest.mark.parametrize("kind", [ALPHA, BETA])
def test_star_characterization(kind, zp, rng):
    # <star(theta)(phi), z>_Q = phi(theta(z)) for coordinate functionals phi
    amb = random_ambient(zp, 3, 3, rng)
    theta = random_map(kind, amb, rng)
    s = star(theta, amb)
    for i in range(amb.m):
        for j in range(amb.n):
            ej = [zp.value(1 if t == j else 0) for t in range(amb.n)]
            assert eval_bilinear(amb.q_space, s.col(i), ej) == theta.mat[i, j]


def test_star_is_linear(zp, rng):
    amb = random_ambient(zp, 2, 3, rng)
    a, b = random_map(BETA, amb, rng), random_map(BETA, amb, rng)
    c = zp.value(17)
    assert star(a + b, amb) == star(a, amb) + star(b, amb)
    assert star(a.scale(c), amb) == star(a, amb).scale(c)


@pytest.mark.parametrize("kind", [ALPHA, BETA])
def test_generator_matches_coordinate_formulas(kind, zp, rng):
    amb = random_ambient(zp, 3, 2, rng)
    for i, j in [(1, 1), (2, 2), (3, 1)]:
        w = [zp.value(0)] * amb.n
        w[j - 1] = zp.value(zp.random(rng))
        g = elementary_from_vector(kind, i, j, w, amb)
        assert star(g.theta, amb).col(i - 1) == w  # recovers w_ij
        assert g.matrix == coordinate_matrix(kind, i, w, amb)
        assert g.inverse == coordinate_matrix(kind, i, w, amb, inverse=True)
        assert g.matrix @ g.inverse == amb.identity()
        assert is_orthogonal(amb.total, g.matrix)


def test_symbolic_generator_matches_coordinate_formula():
    L = poly_ring(("d1", "d2", "c"), ("d1", "d2"))
    amb = ambient_space(diagonal_space(L, [L.var("d1"), L.var("d2")]), 2)
    w = [L.value(0), L.var("c")]
    for kind in (ALPHA, BETA):
        g = elementary_from_vector(kind, 2, 2, w, amb)
        assert g.matrix == coordinate_matrix(kind, 2, w, amb)
        assert g.inverse == coordinate_matrix(kind, 2, w, amb, inverse=True)


def test_generator_sparsity(zp, rng):
    amb = random_ambient(zp, 3, 2, rng)
    n, m = amb.n, amb.m
    w = [zp.value(5), zp.value(0)]
    diff = (elementary_from_vector(ALPHA, 2, 1, w, amb).matrix - amb.identity()).support()
    # alpha: only the f-columns feeding z and x, and the z-columns feeding x
    assert all((c >= n + m and r < n + m) or (c < n and n <= r < n + m) for r, c in diff)
    diff = (elementary_from_vector(BETA, 2, 1, w, amb).matrix - amb.identity()).support()
    assert all((n <= c < n + m and (r < n or r >= n + m)) or (c < n and r >= n + m) for r, c in diff)


def test_from_vector_validation(zp, rng):
    amb = random_ambient(zp, 2, 2, rng)
    with pytest.raises(UnsupportedVector):
        elementary_from_vector(ALPHA, 1, 1, [1, 1], amb)
    with pytest.raises(DimensionMismatch):
        elementary_from_vector(ALPHA, 1, 1, [1], amb)
    with pytest.raises(IndexOutOfRange):
        elementary_from_vector(BETA, 3, 1, [1, 0], amb)
    assert elementary_from_vector(ALPHA, 1, 2, [0, 0], amb).matrix.is_identity()


def test_zero_map_gives_identity(zp, rng):
    amb = random_ambient(zp, 2, 3, rng)
    assert elementary(zero_map(BETA, amb), amb).matrix.is_identity()


def test_inverse_is_negated_map(zp, rng):
    amb = random_ambient(zp, 4, 3, rng)
    for kind in (ALPHA, BETA):
        theta = random_map(kind, amb, rng)
        g, h = elementary(theta, amb), elementary(-theta, amb)
        assert g.inverse == h.matrix
        assert g.matrix @ h.matrix == amb.identity()


def test_ambient_endo_blocks_compose_and_nilpotent(zp, rng):
    amb = random_ambient(zp, 3, 2, rng)
    a = random_map(ALPHA, amb, rng)
    la = lift(a, amb)
    assert la == ambient_endo(amb, "x", "z", a.mat)
    assert (la @ la @ la).is_zero()
    assert ambient_endo(amb, "f", "x", Matrix.zeros(zp, 3)).is_zero()
    blk1, blk2 = Matrix.from_values(zp, [[1, 2, 3]] * 2), Matrix.from_values(zp, [[4, 0]] * 3)
    prod = ambient_endo(amb, "z", "x", blk1) @ ambient_endo(amb, "x", "z", blk2)
    assert prod == ambient_endo(amb, "z", "z", blk1 @ blk2)
    with pytest.raises(DimensionMismatch):
        ambient_endo(amb, "z", "x", blk2)


def test_hom_from_vectors_roundtrip(zp, rng):
    amb = random_ambient(zp, 3, 2, rng)
    vecs = [[zp.value(zp.random(rng)) for _ in range(2)] for _ in range(3)]
    theta = hom_from_vectors(BETA, vecs, amb)
    s = star(theta, amb)
    assert [s.col(i) for i in range(3)] == vecs


def test_generator_dump(zp, rng):
    amb = random_ambient(zp, 2, 1, rng)
    d = elementary_from_vector(BETA, 2, 1, [3], amb).dump()
    assert d["kind"] == "beta" and (d["i"], d["j"]) == (2, 1)
    assert d["w"].count(";") == 0 and d["matrix"].count(";") == amb.dim - 1
