"""Group elements with cached inverses and nested commutator expressions.

The commutator convention is [a, b] = a b a^-1 b^-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .dser import DserGenerator
from .errors import DimensionMismatch
from .linalg import Matrix, mat_inv


class GroupElement:
    """An invertible matrix paired with its inverse so inversion is free."""

    __slots__ = ("matrix", "_inverse")

    def __init__(self, matrix: Matrix, inverse: Matrix | None = None):
        if matrix.rows != matrix.cols:
            raise DimensionMismatch(f"group elements must be square, got {matrix.shape}")
        self.matrix = matrix
        self._inverse = inverse

    @classmethod
    def of(cls, gen: DserGenerator) -> "GroupElement":
        return cls(gen.matrix, gen.inverse)

    @classmethod
    def identity(cls, ring, n: int) -> "GroupElement":
        i = Matrix.identity(ring, n)
        return cls(i, i)

    @property
    def inverse(self) -> Matrix:
        if self._inverse is None:
            self._inverse = mat_inv(self.matrix)
        return self._inverse

    def inv(self) -> "GroupElement":
        return GroupElement(self.inverse, self.matrix)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix, other.inverse @ self.inverse)

    def __eq__(self, other):
        if isinstance(other, GroupElement):
            return self.matrix == other.matrix
        if isinstance(other, Matrix):
            return self.matrix == other
        return NotImplemented

    def __hash__(self):
        return hash(self.matrix)

    def is_identity(self) -> bool:
        return self.matrix.is_identity()

    def __repr__(self):
        return f"GroupElement({self.matrix.rows}x{self.matrix.cols})"


def group_inverse(g: GroupElement) -> GroupElement:
    return g.inv()


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b * a.inv() * b.inv()


# -- expression trees --------------------------------------------------------

@dataclass(frozen=True)
class Gen:
    label: str
    element: GroupElement

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Inv:
    arg: "Expr"

    def __str__(self):
        return f"({self.arg})^-1"


@dataclass(frozen=True)
class Prod:
    left: "Expr"
    right: "Expr"

    def __str__(self):
        return f"{self.left}{self.right}"


@dataclass(frozen=True)
class Comm:
    left: "Expr"
    right: "Expr"

    def __str__(self):
        return f"[{self.left}, {self.right}]"


Expr = Union[Gen, Inv, Prod, Comm]


def eval_expr(e: Expr) -> GroupElement:
    """Bottom-up evaluation; inverses are propagated rather than recomputed."""
    if isinstance(e, Gen):
        return e.element
    if isinstance(e, Inv):
        return eval_expr(e.arg).inv()
    if isinstance(e, Prod):
        return eval_expr(e.left) * eval_expr(e.right)
    if isinstance(e, Comm):
        return commutator(eval_expr(e.left), eval_expr(e.right))
    raise TypeError(f"not an expression: {e!r}")


def expand_word(e: Expr, sign: int = 1) -> list[tuple[Gen, int]]:
    """The expression as a flat word of (generator, +-1) letters."""
    if isinstance(e, Gen):
        return [(e, sign)]
    if isinstance(e, Inv):
        return expand_word(e.arg, -sign)
    if isinstance(e, Prod):
        w = expand_word(e.left) + expand_word(e.right)
    elif isinstance(e, Comm):
        a, b = expand_word(e.left), expand_word(e.right)
        w = a + b + _invert_word(a) + _invert_word(b)
    else:
        raise TypeError(f"not an expression: {e!r}")
    return w if sign > 0 else _invert_word(w)


def _invert_word(w):
    return [(g, -s) for g, s in reversed(w)]


def word_length(e: Expr) -> int:
    if isinstance(e, Gen):
        return 1
    if isinstance(e, Inv):
        return word_length(e.arg)
    if isinstance(e, Prod):
        return word_length(e.left) + word_length(e.right)
    return 2 * (word_length(e.left) + word_length(e.right))


def eval_word(word: list[tuple[Gen, int]]) -> Matrix:
    """Left-to-right product of a flat word; the slow reference evaluator."""
    if not word:
        raise ValueError("empty word")
    g, s = word[0]
    acc = g.element.matrix if s > 0 else g.element.inverse
    for g, s in word[1:]:
        acc = acc @ (g.element.matrix if s > 0 else g.element.inverse)
    return acc
