"""Roy's elementary orthogonal transformations on Q + H(P).

Coordinates on the ambient space are ordered (z_1..z_n, x_1..x_m, f_1..f_m):
``z`` spans Q, ``x`` spans P and ``f`` spans the dual P*.  An alpha-type map
sends Q to P and a beta-type map sends Q to P*; both are stored as an m x n
matrix.  The natural identification P -> P** is the identity in these bases.

Row and column indices taken by the public functions are 1-based, matching the
usual (i, j) labelling of components with 1 <= i <= m and 1 <= j <= n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import (DescriptorMismatch, DimensionMismatch, IndexOutOfRange, NonComponentComposite,
                     UnsupportedVector)
from .linalg import Matrix, embed_block, transpose
from .quadform import QuadraticSpace, adjoint, hyperbolic_space, orthogonal_sum
from .ring import Ring, RingValue

ALPHA = "alpha"
BETA = "beta"
KINDS = (ALPHA, BETA)


@dataclass(frozen=True)
class AmbientSpace:
    q_space: QuadraticSpace
    m: int
    total: QuadraticSpace = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "total", orthogonal_sum(self.q_space, hyperbolic_space(self.ring, self.m)))

    @property
    def n(self) -> int:
        return self.q_space.dim

    @property
    def ring(self) -> Ring:
        return self.q_space.ring

    @property
    def dim(self) -> int:
        return self.n + 2 * self.m

    def offset(self, part: str) -> int:
        return {"z": 0, "x": self.n, "f": self.n + self.m}[part]

    def size(self, part: str) -> int:
        return self.n if part == "z" else self.m

    def identity(self) -> Matrix:
        return Matrix.identity(self.ring, self.dim)

    def zero(self) -> Matrix:
        return Matrix.zeros(self.ring, self.dim)


def ambient_space(q_space: QuadraticSpace, m: int) -> AmbientSpace:
    return AmbientSpace(q_space, m)


@dataclass(frozen=True)
class HomMap:
    """A map Q -> P (alpha) or Q -> P* (beta) as an m x n matrix."""

    kind: str
    mat: Matrix

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def m(self) -> int:
        return self.mat.rows

    @property
    def n(self) -> int:
        return self.mat.cols

    def __add__(self, other: "HomMap") -> "HomMap":
        if other.kind != self.kind:
            raise ValueError("cannot add maps of different kinds")
        return HomMap(self.kind, self.mat + other.mat)

    def __neg__(self) -> "HomMap":
        return HomMap(self.kind, -self.mat)

    def scale(self, c: Any) -> "HomMap":
        return HomMap(self.kind, self.mat.scale(c))

    def is_zero(self) -> bool:
        return self.mat.is_zero()


def zero_map(kind: str, amb: AmbientSpace) -> HomMap:
    return HomMap(kind, Matrix.zeros(amb.ring, amb.m, amb.n))


def component_map(theta: HomMap, i: int, j: int) -> HomMap:
    """The (i, j) component: every entry of theta zeroed except row i, column j."""
    if not (1 <= i <= theta.m and 1 <= j <= theta.n):
        raise IndexOutOfRange(f"component ({i},{j}) outside {theta.m}x{theta.n}")
    ring = theta.mat.ring
    z = ring.zero
    data = [[theta.mat.data[r][c] if (r, c) == (i - 1, j - 1) else z for c in range(theta.n)]
            for r in range(theta.m)]
    return HomMap(theta.kind, Matrix(ring, data, cols=theta.n))


def _check(theta: HomMap, amb: AmbientSpace):
    if theta.mat.ring != amb.ring:
        raise DescriptorMismatch(f"{theta.mat.ring} vs {amb.ring}")
    if (theta.m, theta.n) != (amb.m, amb.n):
        raise DimensionMismatch(f"map is {theta.m}x{theta.n}, ambient wants {amb.m}x{amb.n}")


def star(theta: HomMap, amb: AmbientSpace) -> Matrix:
    """The adjoint map back into Q, as an n x m matrix G_Q^-1 theta^T.

    For alpha-type theta it is read on the f-coordinates, for beta-type on the
    x-coordinates.  Column i is the vector w_i (resp. v_i) of theta.
    """
    _check(theta, amb)
    return amb.q_space.gram_inv @ transpose(theta.mat)


def hom_from_vectors(kind: str, vectors: Sequence[Sequence[Any]], amb: AmbientSpace) -> HomMap:
    """The map whose adjoint sends the i-th basis element of P* (or P) to ``vectors[i]``.

    theta(z) has i-th coordinate B_q(w_i, z), so theta = W^T G_Q with W the
    n x m matrix of columns w_i.
    """
    if len(vectors) != amb.m:
        raise DimensionMismatch(f"need {amb.m} vectors, got {len(vectors)}")
    ring = amb.ring
    w = Matrix.from_values(ring, [list(col) for col in zip(*vectors)]) if amb.m else Matrix.zeros(ring, amb.n, 0)
    if w.rows != amb.n:
        raise DimensionMismatch(f"vectors must have length {amb.n}")
    return HomMap(kind, transpose(w) @ amb.q_space.gram)


def lift(theta: HomMap, amb: AmbientSpace) -> Matrix:
    """theta as an endomorphism of the ambient space."""
    _check(theta, amb)
    row = "x" if theta.kind == ALPHA else "f"
    return embed_block(amb.dim, amb.offset(row), amb.offset("z"), theta.mat)


def lift_star(theta: HomMap, amb: AmbientSpace) -> Matrix:
    """theta* as an endomorphism of the ambient space."""
    col = "f" if theta.kind == ALPHA else "x"
    return embed_block(amb.dim, amb.offset("z"), amb.offset(col), star(theta, amb))


def ambient_endo(amb: AmbientSpace, row_part: str, col_part: str, block: Matrix) -> Matrix:
    """Place a Hom block between two of the summands Q, P, P*."""
    if block.shape != (amb.size(row_part), amb.size(col_part)):
        raise DimensionMismatch(f"block {block.shape} does not fit {row_part}<-{col_part}")
    return embed_block(amb.dim, amb.offset(row_part), amb.offset(col_part), block)


def extract_hom(endo: Matrix, kind: str, amb: AmbientSpace) -> HomMap:
    """Read back a Q -> P (alpha) or Q -> P* (beta) block from an ambient endomorphism."""
    row = "x" if kind == ALPHA else "f"
    r0 = amb.offset(row)
    blk = endo.block(r0, r0 + amb.m, 0, amb.n)
    if embed_block(amb.dim, r0, 0, blk) != endo:
        raise NonComponentComposite(f"endomorphism is not a pure {kind} block")
    return HomMap(kind, blk)


def _eichler(t: Matrix, ts: Matrix, amb: AmbientSpace, sign: int) -> Matrix:
    ring = amb.ring
    prod = (t @ ts).scale(RingValue(ring, ring.half(ring.one)))
    if sign > 0:
        return amb.identity() + t - ts - prod
    return amb.identity() - t + ts - prod


@dataclass(frozen=True)
class DserGenerator:
    """E_theta = I + theta - theta* - theta theta* / 2 with its cached inverse E_{-theta}."""

    theta: HomMap
    amb: AmbientSpace = field(repr=False)
    matrix: Matrix = field(repr=False)
    inverse: Matrix = field(repr=False)
    tag: tuple[int, int] | None = None

    def dump(self) -> dict:
        w = star(self.theta, self.amb)
        out = {"kind": self.theta.kind, "theta": self.theta.mat.dump(), "w": w.dump(),
               "matrix": self.matrix.dump()}
        if self.tag is not None:
            out["i"], out["j"] = self.tag
        return out


def elementary(theta: HomMap, amb: AmbientSpace, tag: tuple[int, int] | None = None) -> DserGenerator:
    t, ts = lift(theta, amb), lift_star(theta, amb)
    return DserGenerator(theta, amb, _eichler(t, ts, amb, +1), _eichler(t, ts, amb, -1), tag)


def elementary_from_vector(kind: str, i: int, j: int, w: Sequence[Any], amb: AmbientSpace) -> DserGenerator:
    """The generator fixed by (i, j, w_ij) where w_ij is supported on coordinate j of Q."""
    if not (1 <= i <= amb.m and 1 <= j <= amb.n):
        raise IndexOutOfRange(f"({i},{j}) outside {amb.m}x{amb.n}")
    if len(w) != amb.n:
        raise DimensionMismatch(f"w has length {len(w)}, Q has rank {amb.n}")
    ring = amb.ring
    wv = [ring.coerce(x) for x in w]
    if any(not ring.is_zero(x) for c, x in enumerate(wv) if c != j - 1):
        raise UnsupportedVector(f"w must be supported on coordinate {j} only")
    zero = [ring.zero] * amb.n
    vectors = [[RingValue(ring, x) for x in (wv if r == i - 1 else zero)] for r in range(amb.m)]
    return elementary(hom_from_vectors(kind, vectors, amb), amb, tag=(i, j))


def eichler_endo(endo: Matrix, amb: AmbientSpace) -> tuple[Matrix, Matrix]:
    """I + Z - Z^+ - Z Z^+ / 2 and its counterpart for -Z, for a general ambient endomorphism Z.

    Z^+ is the adjoint for the ambient form.  For Z the lift of some theta this
    is exactly E_theta; it is used for the generators attached to composites such
    as delta alpha* that are not maps out of Q.
    """
    dual = adjoint(amb.total, endo)
    return _eichler(endo, dual, amb, +1), _eichler(endo, dual, amb, -1)
