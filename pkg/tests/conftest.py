import random

import pytest
from hypothesis import settings

from dserkit.dser import ALPHA, ambient_space
from dserkit.linalg import Matrix
from dserkit.quadform import diagonal_space, eval_bilinear, eval_quadratic
from dserkit.ring import Modular, Rationals

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

P = 10007
_ACCEPTANCE: dict = {}


@pytest.fixture
def zp():
    return Modular(P)


@pytest.fixture
def qq():
    return Rationals()


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_ambient(ring, m, n, rng):
    q = diagonal_space(ring, [ring.value(ring.random_unit(rng)) for _ in range(n)])
    return ambient_space(q, m)


def coordinate_image(kind, i, w, amb, vec, inverse=False):
    """Apply the coordinate description of E (or its inverse) for a component at row i with vector w."""
    R, n, m = amb.ring, amb.n, amb.m
    z, x, f = vec[:n], vec[n:n + m], vec[n + m:]
    pairing = f[i - 1] if kind == ALPHA else x[i - 1]
    bz = eval_bilinear(amb.q_space, w, z)
    qw = eval_quadratic(amb.q_space, w)
    sgn = -1 if inverse else 1
    z2 = [zc - sgn * pairing * wc for zc, wc in zip(z, w)]
    bump = sgn * bz - pairing * qw
    if kind == ALPHA:
        x = [xc + (bump if r == i - 1 else 0) for r, xc in enumerate(x)]
    else:
        f = [fc + (bump if r == i - 1 else 0) for r, fc in enumerate(f)]
    return z2 + list(x) + list(f)


def coordinate_matrix(kind, i, w, amb, inverse=False):
    R = amb.ring
    cols = []
    for c in range(amb.dim):
        e = [R.value(1 if r == c else 0) for r in range(amb.dim)]
        cols.append(coordinate_image(kind, i, w, amb, e, inverse))
    return Matrix.from_values(R, [list(r) for r in zip(*cols)])


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    def record(number, title, passed, detail=""):
        _ACCEPTANCE[number] = (title, passed, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}"
                                    + (f" -- {detail}" if detail else ""))
