"""Exact commutative-ring backends in which 2 is a unit.

Three backends are provided:

* :class:`Rationals` -- payloads are :class:`fractions.Fraction`.
* :class:`Modular` -- payloads are ``int`` residues in ``[0, p)`` for an odd prime ``p``.
* :class:`LocalizedPoly` -- polynomials over Q in a fixed list of variables, with a
  designated subset of the variables made invertible.  An element is a numerator
  polynomial divided by a monomial in the inverted variables.  Internally the
  payload is the equivalent Laurent polynomial, stored as a tuple of
  ``(packed_exponent, coefficient)`` pairs sorted in descending graded-lex order,
  so two equal values always have identical payloads.

Ring objects double as ring descriptors: they are immutable, hashable and compare
by their defining data.  Arithmetic on raw payloads goes through the ring object;
:class:`RingValue` wraps a payload with its ring for convenient operator use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, Mapping, Sequence

from .errors import DescriptorMismatch, NonMonomialDenominator, NotAUnit, ParseError

# Bit width of one exponent field in a packed monomial key.
_FIELD_BITS = 16
_BIAS = 1 << (_FIELD_BITS - 1)
_FIELD_MASK = (1 << _FIELD_BITS) - 1


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, trial division below 1000."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    if n < 1681:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Ring:
    """Payload-level arithmetic shared by the concrete backends."""

    kind = "abstract"

    # -- constructors ----------------------------------------------------
    @property
    def zero(self) -> Any:
        raise NotImplementedError

    @property
    def one(self) -> Any:
        raise NotImplementedError

    def from_int(self, n: int) -> Any:
        raise NotImplementedError

    def from_fraction(self, q: Fraction) -> Any:
        return self.mul(self.from_int(q.numerator), self.invert(self.from_int(q.denominator)))

    def coerce(self, x: Any) -> Any:
        """Turn an int, Fraction or RingValue into a payload of this ring."""
        if isinstance(x, RingValue):
            if x.ring != self:
                raise DescriptorMismatch(f"{x.ring} vs {self}")
            return x.payload
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Rational):
            return self.from_fraction(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    # -- arithmetic ------------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def invert(self, a):
        raise NotImplementedError

    def half(self, a):
        return self.mul(a, self._half)

    def dot(self, xs: Sequence, ys: Sequence):
        acc = self.zero
        for x, y in zip(xs, ys):
            acc = self.add(acc, self.mul(x, y))
        return acc

    # -- text ------------------------------------------------------------
    def render(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    # -- helpers ---------------------------------------------------------
    def value(self, x: Any) -> "RingValue":
        return RingValue(self, self.coerce(x))

    def canonicalize(self, raw: Any):
        raise NotImplementedError


@dataclass(frozen=True)
class Rationals(Ring):
    kind = "rationals"

    def __str__(self) -> str:
        return "QQ"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    @property
    def _half(self):
        return Fraction(1, 2)

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def canonicalize(self, raw):
        if isinstance(raw, tuple):
            return Fraction(*raw)
        return Fraction(raw)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def invert(self, a):
        if a == 0:
            raise NotAUnit("0 is not a unit in QQ")
        return 1 / a

    def dot(self, xs, ys):
        return sum((x * y for x, y in zip(xs, ys) if x and y), Fraction(0))

    def render(self, a):
        return str(a)

    def parse(self, text):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {text!r}") from exc

    def random(self, rng, bound: int = 9):
        return Fraction(rng.randint(-bound, bound))

    def random_unit(self, rng, bound: int = 9):
        x = 0
        while x == 0:
            x = rng.randint(-bound, bound)
        return Fraction(x)


@dataclass(frozen=True)
class Modular(Ring):
    """Residues modulo an odd prime."""

    modulus: int
    kind = "modular"

    def __post_init__(self):
        p = self.modulus
        if not isinstance(p, int) or p < 3 or p % 2 == 0:
            raise ValueError(f"modulus must be an odd integer >= 3, got {p!r}")
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")

    def __str__(self) -> str:
        return f"Z/{self.modulus}"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    @property
    def _half(self):
        return (self.modulus + 1) // 2

    def from_int(self, n):
        return n % self.modulus

    def canonicalize(self, raw):
        return int(raw) % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def invert(self, a):
        if a % self.modulus == 0:
            raise NotAUnit(f"0 is not a unit mod {self.modulus}")
        return pow(a, -1, self.modulus)

    def dot(self, xs, ys):
        return sum(x * y for x, y in zip(xs, ys)) % self.modulus

    def render(self, a):
        return f"{a} mod {self.modulus}"

    def parse(self, text):
        m = re.fullmatch(r"\s*(-?\d+)\s*(?:mod\s*(\d+))?\s*", text)
        if not m:
            raise ParseError(f"bad residue {text!r}")
        if m.group(2) is not None and int(m.group(2)) != self.modulus:
            raise DescriptorMismatch(f"residue {text!r} is not mod {self.modulus}")
        return int(m.group(1)) % self.modulus

    def random(self, rng):
        return rng.randrange(self.modulus)

    def random_unit(self, rng):
        return rng.randrange(1, self.modulus)


_TERM_SPLIT = re.compile(r"(?<![\^*/])\s*([+-])\s*")
_NUMBER = re.compile(r"-?\d+(?:/\d+)?")
_FACTOR = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?")


@dataclass(frozen=True)
class LocalizedPoly(Ring):
    """Q[variables] localized at the monomials in ``inverted``.

    Exponent vectors are packed into one int: the top field holds the total
    degree and the remaining fields hold per-variable exponents with the first
    variable most significant, each offset by a bias so that Laurent exponents
    stay non-negative.  Integer order on keys is then graded-lex order, and
    exponent addition is key addition minus a constant.
    """

    variables: tuple[str, ...]
    inverted: frozenset[str] = frozenset()
    kind = "localized-poly"
    _offset: int = field(init=False, repr=False, compare=False, hash=False)
    _shifts: tuple[int, ...] = field(init=False, repr=False, compare=False, hash=False)
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "inverted", frozenset(self.inverted))
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        if not self.inverted <= set(variables):
            raise ValueError("inverted variables must be a subset of the variables")
        nv = len(variables)
        shifts = tuple(_FIELD_BITS * (nv - 1 - v) for v in range(nv))
        offset = sum(_BIAS << s for s in shifts) + (_BIAS << (_FIELD_BITS * nv))
        object.__setattr__(self, "_shifts", shifts)
        object.__setattr__(self, "_offset", offset)
        object.__setattr__(self, "_index", {name: v for v, name in enumerate(variables)})

    def __str__(self) -> str:
        inv = ",".join(v for v in self.variables if v in self.inverted)
        return f"QQ[{','.join(self.variables)}][1/({inv})]"

    # -- monomial keys ---------------------------------------------------
    def pack(self, exponents: Sequence[int]) -> int:
        if len(exponents) != len(self.variables):
            raise ValueError("exponent vector has wrong length")
        key = (sum(exponents) + _BIAS) << (_FIELD_BITS * len(self.variables))
        for e, s in zip(exponents, self._shifts):
            if not -_BIAS < e < _BIAS:
                raise OverflowError("exponent out of packed range")
            key += (e + _BIAS) << s
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple(((key >> s) & _FIELD_MASK) - _BIAS for s in self._shifts)

    # -- constructors ----------------------------------------------------
    @property
    def zero(self):
        return ()

    @property
    def one(self):
        return ((self._offset, Fraction(1)),)

    @property
    def _half(self):
        return ((self._offset, Fraction(1, 2)),)

    def from_int(self, n):
        return self.from_fraction(Fraction(n))

    def from_fraction(self, q):
        q = Fraction(q)
        return ((self._offset, q),) if q else ()

    def gen(self, name: str):
        """Payload of the variable ``name``."""
        e = [0] * len(self.variables)
        e[self._index[name]] = 1
        return ((self.pack(e), Fraction(1)),)

    def var(self, name: str) -> "RingValue":
        return RingValue(self, self.gen(name))

    def monomial(self, coeff, powers: Mapping[str, int]):
        e = [0] * len(self.variables)
        for name, k in powers.items():
            e[self._index[name]] += k
        self._check_laurent(e)
        coeff = Fraction(coeff)
        return ((self.pack(e), coeff),) if coeff else ()

    def _check_laurent(self, e):
        for v, k in enumerate(e):
            if k < 0 and self.variables[v] not in self.inverted:
                raise NotAUnit(f"{self.variables[v]} is not inverted in {self}")

    @staticmethod
    def _freeze(d: dict) -> tuple:
        return tuple(sorted(((k, c) for k, c in d.items() if c), reverse=True))

    def canonicalize(self, raw):
        """Accept ``{exponent_tuple: coeff}`` or ``(numerator_dict, denominator_exponents)``."""
        if isinstance(raw, tuple) and len(raw) == 2 and isinstance(raw[0], Mapping):
            terms, den = raw
        else:
            terms, den = raw, None
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict[int, Fraction] = {}
        for exps, c in items:
            e = list(exps)
            if den is not None:
                e = [a - b for a, b in zip(e, den)]
            self._check_laurent(e)
            k = self.pack(e)
            acc[k] = acc.get(k, 0) + Fraction(c)
        return self._freeze(acc)

    def numerator_denominator(self, a) -> tuple[dict, tuple[int, ...]]:
        """The reduced ``numerator / monomial`` view of a payload."""
        nv = len(self.variables)
        exps = [self.unpack(k) for k, _ in a]
        den = tuple(max([0] + [-e[v] for e in exps]) for v in range(nv))
        num = {tuple(x + y for x, y in zip(e, den)): c for e, (_, c) in zip(exps, a)}
        return num, den

    # -- arithmetic ------------------------------------------------------
    def add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        d = dict(a)
        for k, c in b:
            d[k] = d.get(k, 0) + c
        return self._freeze(d)

    def neg(self, a):
        return tuple((k, -c) for k, c in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        off = self._offset
        d: dict[int, Fraction] = {}
        for k1, c1 in a:
            for k2, c2 in b:
                k = k1 + k2 - off
                d[k] = d.get(k, 0) + c1 * c2
        return self._freeze(d)

    def dot(self, xs, ys):
        off = self._offset
        d: dict[int, Fraction] = {}
        for a, b in zip(xs, ys):
            if not a or not b:
                continue
            for k1, c1 in a:
                for k2, c2 in b:
                    k = k1 + k2 - off
                    d[k] = d.get(k, 0) + c1 * c2
        return self._freeze(d)

    def is_zero(self, a):
        return not a

    def invert(self, a):
        if not a:
            raise NotAUnit("0 is not a unit")
        if len(a) != 1:
            raise NonMonomialDenominator(f"cannot invert non-monomial {self.render(a)}")
        (k, c), = a
        e = self.unpack(k)
        for v, x in enumerate(e):
            if x and self.variables[v] not in self.inverted:
                raise NotAUnit(f"{self.render(a)} involves non-inverted {self.variables[v]}")
        return ((self.pack([-x for x in e]), 1 / c),)

    # -- text ------------------------------------------------------------
    def _render_monomial(self, e) -> str:
        parts = []
        for name, x in zip(self.variables, e):
            if x == 1:
                parts.append(name)
            elif x:
                parts.append(f"{name}^{x}")
        return "*".join(parts)

    def render(self, a):
        if not a:
            return "0"
        out = []
        for i, (k, c) in enumerate(a):
            mono = self._render_monomial(self.unpack(k))
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                out.append(f"-{body}" if c < 0 else body)
            else:
                out.append(f"{'-' if c < 0 else '+'} {body}")
        return " ".join(out)

    def parse(self, text):
        s = text.strip()
        if not s:
            raise ParseError("empty polynomial")
        pieces = _TERM_SPLIT.split(s)
        signs_terms = []
        if pieces[0] == "":
            pieces = pieces[1:]
        else:
            pieces = ["+"] + pieces
        for sign, term in zip(pieces[0::2], pieces[1::2]):
            signs_terms.append((sign, term.strip()))
        acc: dict[int, Fraction] = {}
        for sign, term in signs_terms:
            if not term:
                raise ParseError(f"bad polynomial {text!r}")
            coeff = Fraction(1)
            e = [0] * len(self.variables)
            for factor in term.split("*"):
                factor = factor.strip()
                if _NUMBER.fullmatch(factor):
                    coeff *= Fraction(factor)
                    continue
                m = _FACTOR.fullmatch(factor)
                if not m or m.group(1) not in self._index:
                    raise ParseError(f"bad factor {factor!r} in {text!r}")
                e[self._index[m.group(1)]] += int(m.group(2) or 1)
            self._check_laurent(e)
            if sign == "-":
                coeff = -coeff
            k = self.pack(e)
            acc[k] = acc.get(k, 0) + coeff
        return self._freeze(acc)


class RingValue:
    """An immutable ring element: a canonical payload tagged with its ring."""

    __slots__ = ("ring", "payload")

    def __init__(self, ring: Ring, payload: Any):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "payload", payload)

    def __setattr__(self, name, value):
        raise AttributeError("RingValue is immutable")

    def _other(self, other) -> Any:
        try:
            return self.ring.coerce(other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.add(self.payload, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.sub(self.payload, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.sub(o, self.payload))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.mul(self.payload, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingValue(self.ring, self.ring.mul(self.payload, self.ring.invert(o)))

    def __neg__(self):
        return RingValue(self.ring, self.ring.neg(self.payload))

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** -k
        acc = self.ring.one
        for _ in range(k):
            acc = self.ring.mul(acc, self.payload)
        return RingValue(self.ring, acc)

    def __eq__(self, other):
        if isinstance(other, RingValue):
            return self.ring == other.ring and self.payload == other.payload
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.payload == o

    def __hash__(self):
        return hash((self.ring, self.payload))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.payload)

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        return self.ring.render(self.payload)

    def __repr__(self):
        return f"RingValue({self.ring}, {self})"


def half(a: RingValue) -> RingValue:
    """The unique b with b + b == a."""
    return RingValue(a.ring, a.ring.half(a.payload))


def invert(a: RingValue) -> RingValue:
    return RingValue(a.ring, a.ring.invert(a.payload))


def canonicalize(ring: Ring, raw: Any) -> RingValue:
    return RingValue(ring, ring.canonicalize(raw))


def parse_value(ring: Ring, text: str) -> RingValue:
    return RingValue(ring, ring.parse(text))


def poly_ring(variables: Iterable[str], inverted: Iterable[str] = ()) -> LocalizedPoly:
    return LocalizedPoly(tuple(variables), frozenset(inverted))
