"""Quadratic spaces stored through the Gram matrix of their bilinear form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import DescriptorMismatch, DimensionMismatch, InvalidRank, NotInvertible
from .linalg import Matrix, block_diag, mat_inv, transpose
from .ring import Ring, RingValue


@dataclass(frozen=True)
class QuadraticSpace:
    """A free module with a non-singular symmetric bilinear form.

    ``gram[i][j]`` is B(e_i, e_j); the quadratic form is q(u) = B(u, u) / 2.
    The inverse Gram matrix is computed once at construction, which also
    enforces non-singularity.
    """

    gram: Matrix
    gram_inv: Matrix = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        g = self.gram
        if g.rows != g.cols:
            raise DimensionMismatch("Gram matrix must be square")
        if transpose(g) != g:
            raise ValueError("Gram matrix must be symmetric")
        inv = self.gram_inv if self.gram_inv is not None else mat_inv(g)
        if g @ inv != Matrix.identity(g.ring, g.rows):
            raise NotInvertible("supplied inverse Gram matrix is wrong")
        object.__setattr__(self, "gram_inv", inv)

    @property
    def dim(self) -> int:
        return self.gram.rows

    @property
    def ring(self) -> Ring:
        return self.gram.ring

    def dump(self) -> dict:
        return {"dim": self.dim, "gram": self.gram.dump()}


def diagonal_space(ring: Ring, q_values: Sequence[Any]) -> QuadraticSpace:
    """Space with q(sum c_j z_j) = sum q_j c_j^2, i.e. Gram diag(2 q_j)."""
    two = ring.from_int(2)
    entries = [ring.mul(two, ring.coerce(x)) for x in q_values]
    gram = Matrix.diag(ring, [RingValue(ring, e) for e in entries])
    inv = Matrix.diag(ring, [RingValue(ring, ring.invert(e)) for e in entries])
    return QuadraticSpace(gram, inv)


def hyperbolic_space(ring: Ring, m: int) -> QuadraticSpace:
    """H(A^m) in the basis (x_1..x_m, f_1..f_m), Gram [[0, I], [I, 0]]."""
    if m < 1:
        raise InvalidRank(f"hyperbolic rank must be >= 1, got {m}")
    z, o = ring.zero, ring.one
    g = [[o if (j == i + m or i == j + m) else z for j in range(2 * m)] for i in range(2 * m)]
    gram = Matrix(ring, g)
    return QuadraticSpace(gram, gram)


def orthogonal_sum(a: QuadraticSpace, b: QuadraticSpace) -> QuadraticSpace:
    if a.ring != b.ring:
        raise DescriptorMismatch(f"{a.ring} vs {b.ring}")
    return QuadraticSpace(block_diag(a.gram, b.gram), block_diag(a.gram_inv, b.gram_inv))


def _as_column(s: QuadraticSpace, u) -> Matrix:
    if isinstance(u, Matrix):
        if u.shape != (s.dim, 1):
            raise DimensionMismatch(f"vector shape {u.shape}, space dim {s.dim}")
        return u
    if len(u) != s.dim:
        raise DimensionMismatch(f"vector length {len(u)}, space dim {s.dim}")
    return Matrix.column(s.ring, u)


def eval_bilinear(s: QuadraticSpace, u, v) -> RingValue:
    cu, cv = _as_column(s, u), _as_column(s, v)
    return (transpose(cu) @ s.gram @ cv)[0, 0]


def eval_quadratic(s: QuadraticSpace, u) -> RingValue:
    b = eval_bilinear(s, u, u)
    return RingValue(s.ring, s.ring.half(b.payload))


def is_orthogonal(s: QuadraticSpace, sigma: Matrix) -> bool:
    """True iff sigma^T G sigma == G.

    With G invertible this forces det(sigma)^2 = 1, so sigma is automatically
    invertible; no separate inversion is attempted.
    """
    if sigma.shape != (s.dim, s.dim):
        raise DimensionMismatch(f"map shape {sigma.shape}, space dim {s.dim}")
    return transpose(sigma) @ s.gram @ sigma == s.gram


def adjoint(s: QuadraticSpace, a: Matrix) -> Matrix:
    """Form adjoint G^-1 a^T G, so that B(a u, v) = B(u, adjoint(a) v)."""
    return s.gram_inv @ transpose(a) @ s.gram
