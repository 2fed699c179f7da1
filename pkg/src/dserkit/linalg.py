"""Dense matrices over a :mod:`dserkit.ring` backend.

Entries are stored as raw ring payloads in a tuple of row tuples; all entries
share the matrix's ring.  Matrices are immutable and every operation returns a
fresh matrix.
"""

from __future__ import annotations

from typing import Any, Iterable, Sequence

from .errors import DescriptorMismatch, DimensionMismatch, NotAUnit, NotInvertible, OutOfBounds, ParseError
from .ring import LocalizedPoly, Ring, RingValue


class Matrix:
    __slots__ = ("ring", "rows", "cols", "data", "_hash")

    def __init__(self, ring: Ring, data: Sequence[Sequence[Any]], cols: int | None = None):
        rows = tuple(tuple(r) for r in data)
        ncols = len(rows[0]) if rows else (cols or 0)
        if cols is not None and rows and ncols != cols:
            raise DimensionMismatch("column count disagrees with data")
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "data", rows)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- construction ------------------------------------------------------
    @classmethod
    def from_values(cls, ring: Ring, values: Iterable[Iterable[Any]]) -> "Matrix":
        """Build from ints, Fractions or RingValues."""
        return cls(ring, [[ring.coerce(x) for x in row] for row in values])

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        z = ring.zero
        return cls(ring, [[z] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, ring: Ring, entries: Sequence[Any]) -> "Matrix":
        n = len(entries)
        z = ring.zero
        payloads = [ring.coerce(x) for x in entries]
        return cls(ring, [[payloads[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, ring: Ring, values: Sequence[Any]) -> "Matrix":
        return cls.from_values(ring, [[x] for x in values])

    # -- access ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> RingValue:
        i, j = ij
        return RingValue(self.ring, self.data[i][j])

    def payload(self, i: int, j: int):
        return self.data[i][j]

    def row(self, i: int) -> list[RingValue]:
        return [RingValue(self.ring, x) for x in self.data[i]]

    def col(self, j: int) -> list[RingValue]:
        return [RingValue(self.ring, r[j]) for r in self.data]

    def support(self) -> set[tuple[int, int]]:
        isz = self.ring.is_zero
        return {(i, j) for i, r in enumerate(self.data) for j, x in enumerate(r) if not isz(x)}

    def is_zero(self) -> bool:
        return not self.support()

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.ring, self.rows)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        if not (0 <= r0 <= r1 <= self.rows and 0 <= c0 <= c1 <= self.cols):
            raise OutOfBounds(f"block [{r0}:{r1}, {c0}:{c1}] outside {self.shape}")
        return Matrix(self.ring, [r[c0:c1] for r in self.data[r0:r1]], cols=c1 - c0)

    # -- algebra -----------------------------------------------------------
    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.ring != self.ring:
            raise DescriptorMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        add = self.ring.add
        return Matrix(self.ring, [[add(x, y) for x, y in zip(r, s)] for r, s in zip(self.data, other.data)],
                      cols=self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        sub = self.ring.sub
        return Matrix(self.ring, [[sub(x, y) for x, y in zip(r, s)] for r, s in zip(self.data, other.data)],
                      cols=self.cols)

    def __neg__(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix(self.ring, [[neg(x) for x in r] for r in self.data], cols=self.cols)

    def scale(self, c: Any) -> "Matrix":
        c = self.ring.coerce(c)
        mul = self.ring.mul
        return Matrix(self.ring, [[mul(c, x) for x in r] for r in self.data], cols=self.cols)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def transpose(self) -> "Matrix":
        return transpose(self)

    @property
    def T(self) -> "Matrix":
        return transpose(self)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and self.data == other.data

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.ring, self.shape, self.data)))
        return self._hash

    # -- text --------------------------------------------------------------
    def dump(self) -> str:
        """Rows separated by ``;`` and entries by ``,`` in the ring's string form."""
        render = self.ring.render
        return ";".join(",".join(render(x) for x in r) for r in self.data)

    def __str__(self):
        render = self.ring.render
        width = max((len(render(x)) for r in self.data for x in r), default=1)
        return "\n".join("[" + "  ".join(render(x).rjust(width) for x in r) + "]" for r in self.data)

    def __repr__(self):
        return f"Matrix({self.ring}, {self.rows}x{self.cols})"


def parse_dump(ring: Ring, text: str) -> Matrix:
    text = text.strip()
    if not text:
        raise ParseError("empty matrix dump")
    try:
        return Matrix(ring, [[ring.parse(e) for e in row.split(",")] for row in text.split(";")])
    except DimensionMismatch as exc:
        raise ParseError(str(exc)) from exc


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.shape} @ {b.shape}")
    ring = a.ring
    isz, dot, zero = ring.is_zero, ring.dot, ring.zero
    bcols = list(zip(*b.data)) if b.rows else [()] * b.cols
    out = []
    for r in a.data:
        nz = [(k, x) for k, x in enumerate(r) if not isz(x)]
        if not nz:
            out.append([zero] * b.cols)
            continue
        ks = [k for k, _ in nz]
        xs = [x for _, x in nz]
        out.append([dot(xs, [c[k] for k in ks]) for c in bcols])
    return Matrix(ring, out, cols=b.cols)


def transpose(a: Matrix) -> Matrix:
    if a.rows == 0:
        return Matrix(a.ring, [], cols=0)
    return Matrix(a.ring, list(zip(*a.data)), cols=a.rows)


def _invert_monomial_matrix(a: Matrix) -> Matrix:
    """Invert a matrix with exactly one nonzero unit entry per row and column."""
    ring = a.ring
    n = a.rows
    out = [[ring.zero] * n for _ in range(n)]
    seen_cols = set()
    for i, r in enumerate(a.data):
        nz = [(j, x) for j, x in enumerate(r) if not ring.is_zero(x)]
        if len(nz) != 1 or nz[0][0] in seen_cols:
            raise NotInvertible("only monomial (generalized permutation) matrices are invertible here")
        j, x = nz[0]
        seen_cols.add(j)
        try:
            out[j][i] = ring.invert(x)
        except NotAUnit as exc:
            raise NotInvertible(str(exc)) from exc
    return Matrix(ring, out, cols=n)


def _gauss_jordan(a: Matrix) -> Matrix:
    ring = a.ring
    n = a.rows
    isz = ring.is_zero
    m = [list(r) + [ring.one if i == j else ring.zero for j in range(n)] for i, r in enumerate(a.data)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if not isz(m[r][c])), None)
        if pivot is None:
            raise NotInvertible("matrix is singular")
        m[c], m[pivot] = m[pivot], m[c]
        inv = ring.invert(m[c][c])
        m[c] = [ring.mul(inv, x) for x in m[c]]
        for r in range(n):
            if r != c and not isz(m[r][c]):
                f = m[r][c]
                m[r] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(m[r], m[c])]
    return Matrix(ring, [row[n:] for row in m], cols=n)


def mat_inv(a: Matrix) -> Matrix:
    """Exact two-sided inverse.

    Field backends use Gauss-Jordan elimination.  Over a localized polynomial
    ring only generalized permutation matrices with unit entries are inverted
    (diagonal Gram matrices, hyperbolic blocks and their orthogonal sums).
    """
    if a.rows != a.cols:
        raise DimensionMismatch(f"cannot invert non-square {a.shape}")
    if isinstance(a.ring, LocalizedPoly):
        return _invert_monomial_matrix(a)
    return _gauss_jordan(a)


def embed_block(target_dim: int, row_offset: int, col_offset: int, block: Matrix) -> Matrix:
    """Square ``target_dim`` matrix, zero except for ``block`` at the given offsets."""
    if (row_offset < 0 or col_offset < 0 or row_offset + block.rows > target_dim
            or col_offset + block.cols > target_dim):
        raise OutOfBounds(f"{block.shape} block at ({row_offset},{col_offset}) exceeds dim {target_dim}")
    z = block.ring.zero
    out = [[z] * target_dim for _ in range(target_dim)]
    for i, r in enumerate(block.data):
        out[row_offset + i][col_offset:col_offset + block.cols] = r
    return Matrix(block.ring, out, cols=target_dim)


def block_diag(*blocks: Matrix) -> Matrix:
    if not blocks:
        raise ValueError("need at least one block")
    ring = blocks[0].ring
    for b in blocks:
        if b.ring != ring:
            raise DescriptorMismatch(f"{b.ring} vs {ring}")
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    z = ring.zero
    out = [[z] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i, r in enumerate(b.data):
            out[r0 + i][c0:c0 + b.cols] = r
        r0 += b.rows
        c0 += b.cols
    return Matrix(ring, out, cols=m)
