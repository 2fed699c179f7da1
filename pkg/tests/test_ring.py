from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dserkit.errors import DescriptorMismatch, NonMonomialDenominator, NotAUnit, ParseError
from dserkit.ring import (LocalizedPoly, Modular, Rationals, RingValue, canonicalize, half, invert, is_prime,
                          parse_value, poly_ring)

P = 10007


def trial_division(n):
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def test_is_prime_matches_trial_division():
    assert [n for n in range(2000) if is_prime(n)] == [n for n in range(2000) if trial_division(n)]
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


@pytest.mark.parametrize("bad", [9, 2, 1, 0, -7, 10005])
def test_modular_rejects_non_odd_primes(bad):
    with pytest.raises(ValueError):
        Modular(bad)


ints = st.integers(-10 ** 6, 10 ** 6)


@given(ints, ints, ints)
def test_modular_ring_axioms(a, b, c):
    R = Modular(P)
    x, y, z = R.value(a), R.value(b), R.value(c)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == R.value(0)
    assert x == a  # coercion of plain ints
    if a % P:
        assert x * invert(x) == 1


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_rationals_agree_with_fraction(a, b):
    R = Rationals()
    assert (R.value(a) * R.value(b)).payload == a * b
    assert (R.value(a) - R.value(b)).payload == a - b
    assert half(R.value(a)).payload == a / 2


def test_half_is_unique_solution():
    for R in (Modular(P), Rationals()):
        for k in range(-5, 6):
            h = half(R.value(k))
            assert h + h == k


def test_zero_is_not_a_unit():
    for R in (Modular(P), Rationals()):
        with pytest.raises(NotAUnit):
            invert(R.value(0))
    with pytest.raises(NotAUnit):
        invert(Modular(P).value(P))


def test_mixing_rings_is_rejected():
    with pytest.raises(DescriptorMismatch):
        Modular(P).value(1) + Modular(7).value(1)
    with pytest.raises(DescriptorMismatch):
        Rationals().coerce(Modular(P).value(3))


def test_modular_render_parse_roundtrip():
    R = Modular(P)
    x = R.value(-1)
    assert str(x) == "10006 mod 10007"
    assert parse_value(R, str(x)) == x
    with pytest.raises(DescriptorMismatch):
        R.parse("3 mod 11")
    with pytest.raises(ParseError):
        R.parse("three")


# -- localized polynomials -----------------------------------------------------

@pytest.fixture
def L():
    return poly_ring(("x", "y", "d"), ("d",))


def test_polynomial_canonical_form_is_unique(L):
    x, y = L.var("x"), L.var("y")
    a = (x + y) * (x - y)
    b = x * x - y * y
    assert a == b and hash(a) == hash(b)
    assert (x + y) - (y + x) == 0
    assert canonicalize(L, {(2, 0, 0): 1, (0, 2, 0): -1}) == a


def test_numerator_over_monomial_form(L):
    x, d = L.var("x"), L.var("d")
    v = x / d ** 2 + 3
    assert v == canonicalize(L, ({(1, 0, 0): 1, (0, 0, 2): 3}, (0, 0, 2)))
    num, den = L.numerator_denominator(v.payload)
    assert den == (0, 0, 2)
    assert num == {(1, 0, 0): Fraction(1), (0, 0, 2): Fraction(3)}


def test_only_inverted_monomials_are_units(L):
    x, d = L.var("x"), L.var("d")
    assert d * invert(d) == 1
    assert invert(L.value(Fraction(2, 3)) * d ** 3) == L.value(Fraction(3, 2)) / d ** 3
    with pytest.raises(NotAUnit):
        invert(x)
    with pytest.raises(NonMonomialDenominator):
        invert(d + 1)
    with pytest.raises(NotAUnit):
        canonicalize(L, {(-1, 0, 0): 1})


def test_half_in_polynomial_ring(L):
    x = L.var("x")
    assert half(x) + half(x) == x


def test_render_parse_roundtrip(L):
    x, y, d = L.var("x"), L.var("y"), L.var("d")
    v = Fraction(1, 2) * x ** 2 * y / d - 3 * y + 7
    text = str(v)
    assert "d^-1" in text
    assert parse_value(L, text) == v
    assert str(L.value(0)) == "0"


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3), st.integers(-5, 5)),
                max_size=6),
       st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3), st.integers(-5, 5)),
                max_size=6))
def test_polynomial_multiplication_matches_dict_oracle(ta, tb):
    L = LocalizedPoly(("x", "y", "d"), frozenset({"d"}))

    def build(terms):
        acc = {}
        for a, b, c, k in terms:
            acc[(a, b, c)] = acc.get((a, b, c), 0) + k
        return acc

    da, db = build(ta), build(tb)
    prod = {}
    for ea, ca in da.items():
        for eb, cb in db.items():
            e = tuple(u + v for u, v in zip(ea, eb))
            prod[e] = prod.get(e, 0) + ca * cb
    assert canonicalize(L, da) * canonicalize(L, db) == canonicalize(L, prod)
    assert canonicalize(L, da) + canonicalize(L, db) == canonicalize(
        L, {e: da.get(e, 0) + db.get(e, 0) for e in set(da) | set(db)})


def test_ring_value_is_immutable(L):
    x = L.var("x")
    with pytest.raises(AttributeError):
        x.payload = ()
    assert isinstance(x, RingValue)
