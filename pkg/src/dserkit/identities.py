"""Catalog of commutator identities among elementary transformations.

Every identity has a bracket (the left-hand side, always evaluated by brute
force through :func:`dserkit.group.eval_expr`), a list of index branches, and
for each branch a *statement* right-hand side and a *proof* right-hand side.
The two are kept apart because they do not always agree; a :class:`Verdict`
records which of them the brute-force value matches.

Closed forms are written in a small text notation, e.g. ``"I + D As - A Ds"``:
an upper-case letter is the lift of a component map to the ambient space, a
trailing ``s`` denotes its adjoint, adjacent factors compose right to left as
matrices, and leading numbers or scalar names (``1/2``, ``a^2``) are
coefficients.
"""

from __future__ import annotations

import enum
import itertools
import random
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .dser import (ALPHA, BETA, AmbientSpace, DserGenerator, HomMap, ambient_space, component_map,
                   eichler_endo, elementary, extract_hom, hom_from_vectors, lift, lift_star)
from .errors import ConfigError, ConstraintViolated, NonComponentComposite, RankTooSmall
from .group import Comm, Gen, GroupElement, Inv, eval_expr
from .linalg import Matrix
from .quadform import diagonal_space
from .ring import Ring, RingValue, poly_ring


class LemmaId(str, enum.Enum):
    L01 = "L01"
    C01 = "C01"
    L02 = "L02"
    C02 = "C02"
    R01 = "R01"
    L03 = "L03"
    C03 = "C03"
    L04 = "L04"
    C04 = "C04"
    L05 = "L05"
    C05 = "C05"
    L06 = "L06"
    C06 = "C06"
    L07 = "L07"
    C07 = "C07"
    L08 = "L08"
    L09 = "L09"
    L10 = "L10"
    L11 = "L11"
    L12 = "L12"
    L13 = "L13"

    def __str__(self):
        return self.value


class Status(str, enum.Enum):
    BOTH = "MatchesBoth"
    PROOF_ONLY = "MatchesProofOnly"
    STATEMENT_ONLY = "MatchesStatementOnly"
    NEITHER = "MatchesNeither"
    STATEMENT_ABSENT = "StatementAbsent"

    def __str__(self):
        return self.value


# Canonical order of index letters for enumeration.
INDEX_ORDER = ("i", "j", "k", "l", "p", "q", "r", "s")

# Matrix letter and indeterminate prefix for each named map.
_SYMBOL = {"alpha": "A", "delta": "D", "xi": "X", "mu": "M", "beta": "B", "gamma": "C", "eta": "H", "nu": "N"}
_VAR = {"alpha": "w", "delta": "t", "xi": "y", "mu": "u", "beta": "v", "gamma": "c", "eta": "h", "nu": "g"}


@dataclass(frozen=True)
class Slot:
    """A named map entering a bracket at component (row, col)."""

    name: str
    kind: str
    row: str
    col: str

    @property
    def symbol(self) -> str:
        return _SYMBOL[self.name]


# -- closed-form notation ------------------------------------------------------

_COEF = re.compile(r"^(\d+)(?:/(\d+))?$")
_SCALAR = re.compile(r"^([a-f])(?:\^(\d+))?$")
_FACTOR = re.compile(r"^([A-Z])(s?)$")


@lru_cache(maxsize=None)
def parse_form(text: str) -> tuple:
    """Parse closed-form notation into ``(coeff, scalar_powers, factors)`` terms."""
    terms = []
    sign, coeff, scal, factors, started = 1, Fraction(1), {}, [], False

    def flush():
        if started:
            terms.append((sign * coeff, tuple(sorted(scal.items())), tuple(factors)))

    for tok in text.split():
        if tok in "+-":
            flush()
            sign, coeff, scal, factors, started = (1 if tok == "+" else -1), Fraction(1), {}, [], False
            continue
        started = True
        if tok == "I":
            continue
        if m := _COEF.match(tok):
            coeff *= Fraction(int(m[1]), int(m[2] or 1))
        elif m := _SCALAR.match(tok):
            scal[m[1]] = scal.get(m[1], 0) + int(m[2] or 1)
        elif m := _FACTOR.match(tok):
            factors.append((m[1], bool(m[2])))
        else:
            raise ValueError(f"bad token {tok!r} in form {text!r}")
    flush()
    return tuple(terms)


# -- instances -----------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """Concrete data for one case: ambient space, full maps and scalars."""

    amb: AmbientSpace
    maps: dict
    scalars: dict = field(default_factory=dict)
    mode: str = "random"


@dataclass(frozen=True)
class IdentityCase:
    lemma: LemmaId
    indices: tuple
    branch: str
    instance: Instance | None = None

    @property
    def idx(self) -> dict:
        return dict(self.indices)

    @property
    def key(self) -> tuple:
        d = self.idx
        return tuple(d.get(x, 0) for x in INDEX_ORDER)

    def with_instance(self, inst: Instance) -> "IdentityCase":
        return IdentityCase(self.lemma, self.indices, self.branch, inst)

    def label(self) -> str:
        return ",".join(f"{k}={v}" for k, v in self.indices)

    @property
    def generators(self) -> dict:
        """The component generators of the bracket, keyed by map name."""
        ctx = Ctx(self)
        return {s.name: ctx.generator(s.name) for s in CATALOG[self.lemma].slots}


class Ctx:
    """Evaluation context for one instantiated case."""

    def __init__(self, case: IdentityCase):
        if case.instance is None:
            raise ValueError("case has no instance")
        self.case = case
        self.spec = CATALOG[case.lemma]
        self.inst = case.instance
        self.amb = case.instance.amb
        self.ring = self.amb.ring
        self.idx = case.idx
        self._slots = {s.name: s for s in self.spec.slots}
        self._by_symbol = {s.symbol: s for s in self.spec.slots}
        self._lift: dict = {}
        self._gen: dict = {}

    # components and their lifts
    def component(self, name: str, row: int | None = None, col: int | None = None) -> HomMap:
        s = self._slots[name]
        row = self.idx[s.row] if row is None else row
        col = self.idx[s.col] if col is None else col
        return component_map(self.inst.maps[name], row, col)

    def mat(self, symbol: str, starred: bool) -> Matrix:
        key = (symbol, starred)
        if key not in self._lift:
            theta = self.component(self._by_symbol[symbol].name)
            self._lift[key] = lift_star(theta, self.amb) if starred else lift(theta, self.amb)
        return self._lift[key]

    def scalar(self, name: str) -> RingValue:
        return self.inst.scalars[name]

    def generator(self, name: str, scalar: str | None = None) -> DserGenerator:
        key = (name, scalar)
        if key not in self._gen:
            s = self._slots[name]
            theta = self.component(name)
            if scalar is not None:
                theta = theta.scale(self.scalar(scalar))
            self._gen[key] = elementary(theta, self.amb, tag=(self.idx[s.row], self.idx[s.col]))
        return self._gen[key]

    def gen(self, name: str, scalar: str | None = None) -> Gen:
        s = self._slots[name]
        label = f"E{'*' if s.kind == BETA else ''}_{s.name}{self.idx[s.row]}{self.idx[s.col]}"
        if scalar is not None:
            label = f"E{'*' if s.kind == BETA else ''}_{scalar}{s.name}{self.idx[s.row]}{self.idx[s.col]}"
        return Gen(label, GroupElement.of(self.generator(name, scalar)))

    # closed-form helpers
    def form(self, text: str) -> Matrix:
        ring = self.ring
        acc = None
        ident = self.amb.identity()
        for coeff, scal, factors in parse_form(text):
            c = RingValue(ring, ring.from_fraction(coeff))
            for name, k in scal:
                c = c * self.scalar(name) ** k
            if factors:
                m = self.mat(*factors[0])
                for f in factors[1:]:
                    m = m @ self.mat(*f)
            else:
                m = ident
            term = m.scale(c)
            acc = term if acc is None else acc + term
        return acc if acc is not None else self.amb.zero()

    def aux(self, text: str, kind: str, row: str, col: str) -> HomMap:
        """A composite that must be a single component of the given kind."""
        theta = extract_hom(self.form(text), kind, self.amb)
        want = (self.idx[row] - 1, self.idx[col] - 1)
        if not theta.mat.support() <= {want}:
            raise NonComponentComposite(f"{text} supported at {sorted(theta.mat.support())}, expected {want}")
        return theta

    def E(self, theta: HomMap) -> GroupElement:
        return GroupElement.of(elementary(theta, self.amb))

    def EZ(self, z: Matrix) -> GroupElement:
        """I + Z - Z^+ - Z Z^+/2 for a composite endomorphism Z."""
        return GroupElement(*eichler_endo(z, self.amb))

    def half(self) -> RingValue:
        return RingValue(self.ring, self.ring.half(self.ring.one))

    def literal(self, name: str, row: str, col: str, starred: bool = False) -> Matrix:
        theta = self.component(name, self.idx[row], self.idx[col])
        return lift_star(theta, self.amb) if starred else lift(theta, self.amb)


# -- catalog -------------------------------------------------------------------

RHS = Callable[[Ctx], "GroupElement | Matrix | None"]


@dataclass(frozen=True)
class Branch:
    label: str
    test: Callable[[dict], bool]
    statement: RHS
    proof: RHS


@dataclass(frozen=True)
class LemmaSpec:
    id: LemmaId
    family: str
    slots: tuple
    condition: Callable[[dict], bool]
    condition_text: str
    lhs: Callable[[Ctx, tuple], object]
    branches: tuple
    scalars: tuple = ()
    base: LemmaId | None = None
    extra_components: Callable[[dict], list] | None = None
    aux_checks: tuple = ()

    @property
    def letters(self) -> tuple:
        seen = []
        for s in self.slots:
            for x in (s.row, s.col):
                if x not in seen:
                    seen.append(x)
        return tuple(seen)

    @property
    def min_rank(self) -> int:
        return {"pair": 2, "triple": 3, "quad": 4}[self.family]

    def branch(self, label: str) -> Branch:
        for b in self.branches:
            if b.label == label:
                return b
        raise KeyError(label)


def _form(text: str) -> RHS:
    return lambda ctx: ctx.form(text)


def _ident(ctx: Ctx) -> Matrix:
    return ctx.amb.identity()


def _absent(ctx: Ctx):
    return None


def _always(d):
    return True


def _bracket(*names):
    """LHS builder: nests generators as Comm(a, b) or Comm(a, Comm(b, c)) etc."""
    def build(ctx: Ctx, sc: tuple):
        g = [ctx.gen(n, sc[t] if sc else None) for t, n in enumerate(names)]
        if len(g) == 2:
            return Comm(g[0], g[1])
        if len(g) == 3:
            return Comm(g[0], Comm(g[1], g[2]))
        return Comm(Comm(g[0], g[1]), Comm(g[2], g[3]))
    return build


def _eq(a, b):
    return lambda d: d[a] == d[b]


def _ne(a, b):
    return lambda d: d[a] != d[b]


A = lambda r, c: Slot("alpha", ALPHA, r, c)  # noqa: E731
Dl = lambda r, c: Slot("delta", ALPHA, r, c)  # noqa: E731
Xi = lambda r, c: Slot("xi", ALPHA, r, c)  # noqa: E731
B = lambda r, c: Slot("beta", BETA, r, c)  # noqa: E731
G = lambda r, c: Slot("gamma", BETA, r, c)  # noqa: E731


# pair identities
_L01_GENERAL = "I + D As - A Ds"
_L02_FORM = "I - A Bs + B As"
_R01_FORM = "I + A Bs - B As"
_L03_GENERAL = "I + C Bs - B Cs"


def _pairs():
    out = []
    out.append(LemmaSpec(
        LemmaId.L01, "pair", (A("i", "j"), Dl("k", "l")), _always, "none",
        _bracket("alpha", "delta"),
        (Branch("i=k", _eq("i", "k"), _ident, _form(_L01_GENERAL)),
         Branch("i!=k", _ne("i", "k"), _form(_L01_GENERAL), _form(_L01_GENERAL)))))
    out.append(LemmaSpec(
        LemmaId.L02, "pair", (A("i", "j"), B("k", "l")), _ne("i", "k"), "i!=k",
        _bracket("alpha", "beta"),
        (Branch("i!=k", _always, _form(_L02_FORM), _form(_L02_FORM)),)))

    def r01_lhs(ctx, sc):
        return Inv(Comm(ctx.gen("alpha"), ctx.gen("beta")))
    out.append(LemmaSpec(
        LemmaId.R01, "pair", (A("i", "j"), B("k", "l")), _ne("i", "k"), "i!=k", r01_lhs,
        (Branch("i!=k", _always, _form(_R01_FORM), _absent),)))
    out.append(LemmaSpec(
        LemmaId.L03, "pair", (B("i", "j"), G("k", "l")), _always, "none",
        _bracket("beta", "gamma"),
        (Branch("i=k", _eq("i", "k"), _ident, _form(_L03_GENERAL)),
         Branch("i!=k", _ne("i", "k"), _form(_L03_GENERAL), _form(_L03_GENERAL)))))
    return out


# triple identities

def _twisted(aux_text: str, kind: str, row: str, col: str, outer: str):
    """E_x [E_outer, E_{x/2}] for the auxiliary component x."""
    def rhs(ctx: Ctx):
        x = ctx.aux(aux_text, kind, row, col)
        g = GroupElement.of(ctx.generator(outer))
        e, e2 = ctx.E(x), ctx.E(x.scale(ctx.half()))
        return e * (g * e2 * g.inv() * e2.inv())
    return rhs


_L04_LAMBDA = "A Ds B"
_L04_XI = "- D As B"
_L04_PROOF_P = "I - Bs D As + A Ds B + 1/2 A Ds B Bs - 1/2 B Bs D As - 1/2 A Ds B Bs D As"
_L04_PROOF_K = "I + Bs A Ds + 1/2 B Bs A Ds - 1/2 D As B Bs - D As B - 1/2 D As B Bs A Ds"
_L05_MU = "D Bs A"
_L05_PROOF_P = ("I - As B Ds + D Bs A + 1/2 D Bs A As - 1/2 D Bs A As B Ds - 1/2 A As B Ds"
                " + As B Ds B Ds")
_L06_NU = "- C As B"
_L06_PROOF_K = "I + Bs A Cs - C As B - 1/2 C As B Bs + 1/2 B Bs A Cs - 1/2 C As B Bs A Cs"
_L07_ETA = "B Cs A"
_L07_THETA = "C Bs A"
_L07_PROOF_P = "I - As C Bs - 1/2 A As C Bs + B Cs A + 1/2 B Cs A As - 1/2 B Cs A As C Bs"
_L07_PROOF_K = "I - C Bs A + As B Cs + 1/2 A As B Cs - 1/2 C Bs A As - 1/2 C Bs A As B Cs"


def _not_pk(d):
    return d["i"] != d["p"] and d["i"] != d["k"]


def _triples():
    out = []
    kp = _ne("k", "p")
    out.append(LemmaSpec(
        LemmaId.L04, "triple", (B("i", "j"), A("k", "l"), Dl("p", "q")), kp, "k!=p",
        _bracket("beta", "alpha", "delta"),
        (Branch("i=p", _eq("i", "p"), _twisted(_L04_LAMBDA, ALPHA, "k", "j", "beta"),
                _form(_L04_PROOF_P)),
         Branch("i=k", _eq("i", "k"), _twisted(_L04_XI, ALPHA, "p", "j", "beta"),
                _form(_L04_PROOF_K)),
         Branch("otherwise", _not_pk, _ident, _ident)),
        aux_checks=(("lambda", _L04_LAMBDA, ALPHA, ("k", "j"), "Bs D As"),
                    ("xi", _L04_XI, ALPHA, ("p", "j"), "- Bs A Ds"))))
    out.append(LemmaSpec(
        LemmaId.L05, "triple", (A("i", "j"), Dl("k", "l"), B("p", "q")), kp, "k!=p",
        _bracket("alpha", "delta", "beta"),
        (Branch("i=p", _eq("i", "p"), _twisted(_L05_MU, ALPHA, "k", "j", "alpha"),
                _form(_L05_PROOF_P)),
         Branch("i!=p", _ne("i", "p"), _ident, _ident)),
        aux_checks=(("mu", _L05_MU, ALPHA, ("k", "j"), "As B Ds"),)))
    out.append(LemmaSpec(
        LemmaId.L06, "triple", (B("i", "j"), A("k", "l"), G("p", "q")), kp, "k!=p",
        _bracket("beta", "alpha", "gamma"),
        (Branch("i=p", _eq("i", "p"), _twisted(_L06_NU, BETA, "p", "j", "beta"), _ident),
         Branch("i=k", _eq("i", "k"), _ident, _form(_L06_PROOF_K)),
         Branch("otherwise", _not_pk, _ident, _ident)),
        aux_checks=(("nu", _L06_NU, BETA, ("p", "j"), "- Bs A Cs"),)))
    out.append(LemmaSpec(
        LemmaId.L07, "triple", (A("i", "j"), B("k", "l"), G("p", "q")), kp, "k!=p",
        _bracket("alpha", "beta", "gamma"),
        (Branch("i=p", _eq("i", "p"), _twisted(_L07_ETA, BETA, "k", "j", "alpha"),
                _form(_L07_PROOF_P)),
         Branch("i=k", _eq("i", "k"), _twisted(_L07_THETA, BETA, "p", "j", "alpha"),
                _form(_L07_PROOF_K)),
         Branch("otherwise", _not_pk, _ident, _ident)),
        aux_checks=(("eta", _L07_ETA, BETA, ("k", "j"), "As C Bs"),
                    ("theta", _L07_THETA, BETA, ("p", "j"), "As B Cs"))))
    return out


# four-fold identities

def _comm_z(first: str, second: str, inverse: bool = False):
    """[E_Z1, E_Z2] for composite endomorphisms given in closed-form notation."""
    def rhs(ctx: Ctx):
        a, b = ctx.EZ(ctx.form(first)), ctx.EZ(ctx.form(second))
        c = a * b * a.inv() * b.inv()
        return c.inv() if inverse else c
    return rhs


_EQ1 = "I - C Bs A Ms - M As C Bs + B Cs A Ms + M As B Cs"
_EQ2 = ("I + D As B Xs - A Ds B Xs + X Bs D As - X Bs A Ds - X Bs D As B Xs"
        " + X Bs A Ds B Xs")
_EQ3 = ("I + B As C Ds + A Bs D Cs - C Ds B As + A Bs D Cs A Bs + A Bs D Cs A Bs D Cs"
        " - D Cs A Bs D Cs - B As C Ds B As - D Cs A Bs + C Ds B As C Ds"
        " + B As C Ds B As C Ds")
_EQ5 = ("I + D As C Bs + A Ds B Cs - C Bs D As - B Cs A Ds - B Cs A Ds B Cs"
        " + C Bs D As C Bs - D As C Bs D As + A Ds B Cs A Ds + A Ds B Cs A Ds B Cs"
        " + D As C Bs D As C Bs + A Ds B Cs D As C Bs")
_EQ6 = ("I - D As B Cs - A Ds C Bs + C Bs A Ds + B Cs D As - C Bs A Ds C Bs"
        " + B Cs D As B Cs + D As B Cs D As - A Ds C Bs A Ds + D As B Cs A Ds C Bs"
        " + D As B Cs D As B Cs + A Ds C Bs A Ds C Bs")
_RED1 = "I + D As C Bs - B Cs A Ds"
_RED2 = "I + A Ds B Cs - C Bs D As"
_RED3 = "I - D As B Cs + C Bs A Ds"
_RED4 = "I - A Ds C Bs + B Cs D As"


def _l13_proof(ctx: Ctx) -> Matrix:
    d = ctx.idx
    i, k, r, p = d["i"], d["k"], d["r"], d["p"]
    if i == p and k == r:
        return ctx.form(_EQ5)
    if i == r and k == p:
        return ctx.form(_EQ6)
    if i == p:
        return ctx.form(_RED1)
    if k == r:
        return ctx.form(_RED2)
    if i == r:
        return ctx.form(_RED3)
    if k == p:
        return ctx.form(_RED4)
    return ctx.amb.identity()


def _l13_literal(inverse_branch: bool):
    """The bracket exactly as printed, with the indices it names."""
    def rhs(ctx: Ctx):
        lit = ctx.literal
        if inverse_branch:
            z1 = lit("alpha", "i", "j") @ lit("beta", "k", "l", True)
            z2 = lit("gamma", "p", "q") @ lit("delta", "r", "s", True)
        else:
            z1 = lit("delta", "r", "s") @ lit("gamma", "p", "q", True)
            z2 = lit("beta", "k", "l") @ lit("alpha", "i", "j", True)
        a, b = ctx.EZ(z1), ctx.EZ(z2)
        c = a * b * a.inv() * b.inv()
        return c.inv() if inverse_branch else c
    return rhs


def _quads():
    out = []
    cond = lambda d: d["i"] != d["k"] and d["r"] != d["p"]  # noqa: E731
    mu_b = Slot("mu", BETA, "p", "q")
    out.append(LemmaSpec(
        LemmaId.L08, "quad", (B("i", "j"), G("k", "l"), A("r", "s"), mu_b), cond, "i!=k, r!=p",
        _bracket("beta", "gamma", "alpha", "mu"),
        (Branch("k=r", _eq("k", "r"), _comm_z("M As", "B Cs"), _form(_EQ1)),
         Branch("i=r", _eq("i", "r"), _comm_z("C Bs", "M As"), _form(_EQ1)),
         Branch("otherwise", lambda d: d["k"] != d["r"] and d["i"] != d["r"], _ident, _form(_EQ1)))))
    out.append(LemmaSpec(
        LemmaId.L09, "quad", (A("i", "j"), Dl("k", "l"), Xi("r", "s"), B("p", "q")), cond, "i!=k, r!=p",
        _bracket("alpha", "delta", "xi", "beta"),
        (Branch("i=p", _eq("i", "p"), _comm_z("D As", "X Bs"), _form(_EQ2)),
         Branch("k=p", _eq("k", "p"), _comm_z("A Ds", "X Bs"), _form(_EQ2)),
         Branch("otherwise", lambda d: d["i"] != d["p"] and d["k"] != d["p"], _ident, _form(_EQ2)))))
    l10_branches = lambda stmt1, stmt2, proof: (  # noqa: E731
        Branch("k=r and i!=p", lambda d: d["k"] == d["r"] and d["i"] != d["p"], stmt1, proof),
        Branch("i=p and k!=r", lambda d: d["i"] == d["p"] and d["k"] != d["r"], stmt2, proof),
        Branch("k!=r and i!=p", lambda d: d["k"] != d["r"] and d["i"] != d["p"], _ident, proof),
        Branch("k=r and i=p", lambda d: d["k"] == d["r"] and d["i"] == d["p"], _absent, proof))
    out.append(LemmaSpec(
        LemmaId.L10, "quad", (A("i", "j"), B("k", "l"), Dl("r", "s"), G("p", "q")), cond, "i!=k, r!=p",
        _bracket("alpha", "beta", "delta", "gamma"),
        l10_branches(_comm_z("A Bs", "C Ds", inverse=True), _comm_z("D Cs", "B As"), _form(_EQ3))))
    out.append(LemmaSpec(
        LemmaId.L11, "quad", (A("i", "j"), Dl("k", "l"), Xi("r", "s"), Slot("mu", ALPHA, "p", "q")), cond,
        "i!=k, r!=p", _bracket("alpha", "delta", "xi", "mu"),
        (Branch("all", _always, _ident, _ident),)))
    out.append(LemmaSpec(
        LemmaId.L12, "quad", (B("i", "j"), G("k", "l"), Slot("eta", BETA, "r", "s"), Slot("nu", BETA, "p", "q")),
        cond, "i!=k, r!=p", _bracket("beta", "gamma", "eta", "nu"),
        (Branch("all", _always, _ident, _ident),)))
    out.append(LemmaSpec(
        LemmaId.L13, "quad", (A("i", "j"), Dl("k", "l"), B("r", "s"), G("p", "q")), cond, "i!=k, r!=p",
        _bracket("alpha", "delta", "beta", "gamma"),
        l10_branches(_l13_literal(True), _l13_literal(False), _l13_proof),
        extra_components=lambda d: [("beta", d["k"], d["l"]), ("delta", d["r"], d["s"])]))
    return out


# scaled corollaries: the statement side is the same bracket with other scalars

def _scaled_statement(names):
    def rhs(ctx: Ctx):
        sc = ("d", "e", "f") if len(names) == 3 else ("c", "d")
        return eval_expr(_bracket(*names)(ctx, sc))
    return rhs


def _corollaries(lemmas: dict):
    out = []

    def cor(cid, base, cond, cond_text, names, branch_specs):
        spec = lemmas[base]
        sc = ("a", "b", "c") if spec.family == "triple" else ("a", "b")
        stmt = _scaled_statement(names)
        branches = tuple(Branch(label, test, stmt, proof if proof is not None else _absent)
                         for label, test, proof in branch_specs)
        out.append(LemmaSpec(cid, spec.family, spec.slots, cond, cond_text, _bracket(*names), branches,
                             scalars=sc, base=base))

    c01_proof = _form("I - a b A Ds + a b D As")
    cor(LemmaId.C01, LemmaId.L01, _always, "none", ("alpha", "delta"),
        [("i=k", _eq("i", "k"), c01_proof), ("i!=k", _ne("i", "k"), c01_proof)])
    cor(LemmaId.C02, LemmaId.L02, _ne("i", "k"), "i!=k", ("alpha", "beta"),
        [("i!=k", _always, None)])
    cor(LemmaId.C03, LemmaId.L03, _always, "none", ("beta", "gamma"),
        [("i=k", _eq("i", "k"), None), ("i!=k", _ne("i", "k"), None)])
    ik_kp = lambda d: d["i"] != d["k"] and d["k"] != d["p"]  # noqa: E731
    c04_proof = _form("I - a^2 b c Bs D As + a b c A Ds B + 1/2 a^2 b c A Ds B Bs"
                      " - 1/2 a^2 b c B Bs D As - 1/2 a^2 b^2 c^2 A Ds B Bs D As")
    cor(LemmaId.C04, LemmaId.L04, ik_kp, "i!=k, k!=p", ("beta", "alpha", "delta"),
        [("i=p", _eq("i", "p"), c04_proof), ("otherwise", _ne("i", "p"), c04_proof)])
    cor(LemmaId.C05, LemmaId.L05, lambda d: d["i"] != d["p"] and d["k"] != d["p"], "i!=p, k!=p",
        ("alpha", "delta", "beta"), [("i!=p", _always, None)])
    cor(LemmaId.C06, LemmaId.L06, ik_kp, "i!=k, k!=p", ("beta", "alpha", "gamma"),
        [("i=p", _eq("i", "p"), None), ("otherwise", _ne("i", "p"), None)])
    cor(LemmaId.C07, LemmaId.L07, ik_kp, "i!=k, k!=p", ("alpha", "beta", "gamma"),
        [("i=p", _eq("i", "p"), None), ("otherwise", _ne("i", "p"), None)])
    return out


def _build_catalog() -> dict:
    lemmas = {s.id: s for s in _pairs() + _triples() + _quads()}
    for s in _corollaries(lemmas):
        lemmas[s.id] = s
    return {lid: lemmas[lid] for lid in LemmaId}


CATALOG: dict = _build_catalog()


def parse_lemma(text: str) -> LemmaId:
    return LemmaId(text.strip().upper())


# -- enumeration ---------------------------------------------------------------

def _all_cases(spec: LemmaSpec, m: int, n: int) -> list:
    letters = spec.letters
    ranges = [range(1, (n if x in "jlqs" else m) + 1) for x in letters]
    out = []
    for values in itertools.product(*ranges):
        d = dict(zip(letters, values))
        if not spec.condition(d):
            continue
        hits = [b.label for b in spec.branches if b.test(d)]
        if len(hits) != 1:
            raise AssertionError(f"{spec.id}: indices {d} match branches {hits}")
        out.append(IdentityCase(spec.id, tuple(sorted(d.items(), key=lambda kv: INDEX_ORDER.index(kv[0]))),
                                hits[0]))
    out.sort(key=lambda c: c.key)
    return out


def enumerate_cases(m: int, n: int, lemma: LemmaId | str, strict: bool = True) -> list:
    """All admissible index tuples in lexicographic (i,j,k,l,p,q,r,s) order, with branch labels.

    With ``strict`` a rank below the lemma's minimum raises RankTooSmall naming
    the branches that have no case; otherwise the (partial) list is returned.
    """
    spec = CATALOG[LemmaId(lemma)]
    if n < 1:
        raise RankTooSmall(f"{spec.id}: n must be >= 1")
    cases = _all_cases(spec, m, n) if m >= 1 else []
    if strict and m < spec.min_rank:
        reached = {c.branch for c in cases}
        missing = [b.label for b in spec.branches if b.label not in reached]
        raise RankTooSmall(f"{spec.id} needs m >= {spec.min_rank} so that its {spec.min_rank} row indices can all "
                           f"differ; at m={m} unreachable branches: {', '.join(missing) if missing else 'none'}"
                           f" (index patterns with {spec.min_rank} distinct rows are never sampled)")
    return cases


# -- instantiation -------------------------------------------------------------

def _components(spec: LemmaSpec, d: dict) -> list:
    comps = [(s.name, d[s.row], d[s.col]) for s in spec.slots]
    if spec.extra_components:
        comps += spec.extra_components(d)
    seen = []
    for c in comps:
        if c not in seen:
            seen.append(c)
    return seen


def _var_name(prefix: str, row: int, col: int) -> str:
    return f"{prefix}{row}{col}" if row < 10 and col < 10 else f"{prefix}{row}_{col}"


def symbolic_instance(case: IdentityCase, m: int, n: int) -> IdentityCase:
    """Fresh indeterminates for every touched entry; Q-form diag(d_1..d_n) with d_j inverted."""
    spec = CATALOG[case.lemma]
    d = case.idx
    comps = _components(spec, d)
    dvars = [f"d{j}" for j in range(1, n + 1)]
    svars, inverted = [], list(dvars)
    if len(spec.scalars) == 2:
        svars, inverted = ["a", "b", "c"], inverted + ["c"]
    elif len(spec.scalars) == 3:
        svars, inverted = ["a", "b", "c", "e"], inverted + ["e"]
    cvars = [_var_name(_VAR[name], r, c) for name, r, c in comps]
    ring = poly_ring(dvars + svars + cvars, inverted)
    q = diagonal_space(ring, [ring.var(x) for x in dvars])
    amb = ambient_space(q, m)
    zero = RingValue(ring, ring.zero)
    vecs = {s.name: [[zero] * n for _ in range(m)] for s in spec.slots}
    for (name, r, c), var in zip(comps, cvars):
        vecs[name][r - 1][c - 1] = ring.var(var)
    kinds = {s.name: s.kind for s in spec.slots}
    maps = {name: hom_from_vectors(kinds[name], v, amb) for name, v in vecs.items()}
    scalars = {x: ring.var(x) for x in svars}
    if len(spec.scalars) == 2:
        scalars["d"] = scalars["a"] * scalars["b"] / scalars["c"]
    elif len(spec.scalars) == 3:
        scalars["d"] = scalars["a"]
        scalars["f"] = scalars["b"] * scalars["c"] / scalars["e"]
    return case.with_instance(Instance(amb, maps, scalars, "symbolic"))


def random_instance(case: IdentityCase, ring: Ring, m: int, n: int, rng) -> IdentityCase:
    """Random unit Q-form, random full maps, and scalars satisfying the constraints by construction."""
    spec = CATALOG[case.lemma]
    q = diagonal_space(ring, [RingValue(ring, ring.random_unit(rng)) for _ in range(n)])
    amb = ambient_space(q, m)
    maps = {}
    for s in spec.slots:
        vecs = [[RingValue(ring, ring.random(rng)) for _ in range(n)] for _ in range(m)]
        maps[s.name] = hom_from_vectors(s.kind, vecs, amb)
    rv = lambda: RingValue(ring, ring.random(rng))  # noqa: E731
    unit = lambda: RingValue(ring, ring.random_unit(rng))  # noqa: E731
    scalars = {}
    if len(spec.scalars) == 2:
        scalars = {"a": rv(), "b": rv(), "c": unit()}
        scalars["d"] = scalars["a"] * scalars["b"] / scalars["c"]
    elif len(spec.scalars) == 3:
        scalars = {"a": rv(), "b": rv(), "c": rv(), "e": unit()}
        scalars["d"] = scalars["a"]
        scalars["f"] = scalars["b"] * scalars["c"] / scalars["e"]
    return case.with_instance(Instance(amb, maps, scalars, "random"))


# -- verdicts ------------------------------------------------------------------

def _as_matrix(x) -> Matrix | None:
    if x is None:
        return None
    return x.matrix if isinstance(x, GroupElement) else x


def _as_element(x) -> GroupElement | None:
    if x is None:
        return None
    return x if isinstance(x, GroupElement) else GroupElement(x)


@dataclass(frozen=True)
class ClosedForm:
    statement: GroupElement | None
    proof: GroupElement | None


def _check_conditions(case: IdentityCase):
    spec = CATALOG[case.lemma]
    d = case.idx
    if not spec.condition(d):
        raise ConstraintViolated(f"{spec.id} requires {spec.condition_text}; got {case.label()}")
    if not spec.branch(case.branch).test(d):
        raise ConstraintViolated(f"{case.label()} is not in branch {case.branch}")


def closed_form(case: IdentityCase) -> ClosedForm:
    _check_conditions(case)
    ctx = Ctx(case)
    b = CATALOG[case.lemma].branch(case.branch)
    return ClosedForm(_as_element(b.statement(ctx)), _as_element(b.proof(ctx)))


def _closed_form_family(family: str):
    def fn(case: IdentityCase) -> ClosedForm:
        spec = CATALOG[case.lemma]
        if spec.family != family or spec.scalars:
            raise ConstraintViolated(f"{case.lemma} is not a {family} lemma")
        return closed_form(case)
    fn.__name__ = f"closed_form_{family}"
    fn.__doc__ = f"Statement and proof right-hand sides for a {family} lemma."
    return fn


closed_form_pair = _closed_form_family("pair")
closed_form_triple = _closed_form_family("triple")
closed_form_quad = _closed_form_family("quad")


@dataclass(frozen=True)
class Verdict:
    case: IdentityCase
    lhs: GroupElement
    rhs_statement: GroupElement | None
    rhs_proof: GroupElement | None
    status: Status

    def dump(self) -> dict:
        inst = self.case.instance
        ctx = Ctx(self.case)
        out = {
            "lemma": str(self.case.lemma),
            "branch": self.case.branch,
            "indices": dict(self.case.indices),
            "mode": inst.mode,
            "status": str(self.status),
            "ring": str(inst.amb.ring),
            "q_gram": inst.amb.q_space.gram.dump(),
            "generators": {s.name: ctx.generator(s.name).dump() for s in CATALOG[self.case.lemma].slots},
            "scalars": {k: str(v) for k, v in sorted(inst.scalars.items())},
            "lhs": self.lhs.matrix.dump(),
            "rhs_statement": None if self.rhs_statement is None else self.rhs_statement.matrix.dump(),
            "rhs_proof": None if self.rhs_proof is None else self.rhs_proof.matrix.dump(),
        }
        return out


def classify(lhs: Matrix, statement: Matrix | None, proof: Matrix | None) -> Status:
    s = None if statement is None else statement == lhs
    p = None if proof is None else proof == lhs
    if s is None:
        return Status.STATEMENT_ABSENT if p else Status.NEITHER
    if p is None:
        p = s
    if s and p:
        return Status.BOTH
    if p:
        return Status.PROOF_ONLY
    if s:
        return Status.STATEMENT_ONLY
    return Status.NEITHER


# Closed forms can be replaced for negative controls; keyed by (lemma, branch).
_OVERRIDES: dict = {}


def override_rhs(lemma: LemmaId, branch: str, statement: RHS | None = None, proof: RHS | None = None):
    """Swap in alternative right-hand sides; calling with neither restores the catalog."""
    if statement is None and proof is None:
        _OVERRIDES.pop((lemma, branch), None)
    else:
        _OVERRIDES[(lemma, branch)] = (statement, proof)


def check_case(case: IdentityCase) -> Verdict:
    """Evaluate the bracket by brute force and compare with both closed forms."""
    _check_conditions(case)
    spec = CATALOG[case.lemma]
    ctx = Ctx(case)
    lhs = eval_expr(spec.lhs(ctx, spec.scalars))
    b = spec.branch(case.branch)
    stmt_fn, proof_fn = _OVERRIDES.get((case.lemma, case.branch), (None, None))
    stmt = _as_element((stmt_fn or b.statement)(ctx))
    proof = _as_element((proof_fn or b.proof)(ctx))
    status = classify(lhs.matrix, _as_matrix(stmt), _as_matrix(proof))
    return Verdict(case, lhs, stmt, proof, status)


def scaling_equiv(case: IdentityCase) -> Verdict:
    """Check a scaled corollary after confirming its scalar constraints hold exactly."""
    spec = CATALOG[case.lemma]
    if not spec.scalars:
        raise ConstraintViolated(f"{case.lemma} carries no scalars")
    s = case.instance.scalars
    if len(spec.scalars) == 2:
        ok = s["a"] * s["b"] == s["c"] * s["d"]
    else:
        ok = (s["a"] * s["b"] * s["c"] == s["d"] * s["e"] * s["f"]
              and s["a"] ** 2 * s["b"] * s["c"] == s["d"] ** 2 * s["e"] * s["f"])
    if not ok:
        raise ConstraintViolated("scalar constraints do not hold")
    return check_case(case)


def composite_star_checks(case: IdentityCase) -> dict:
    """For triple lemmas: adjoint of each auxiliary map equals its displayed dual product."""
    spec = CATALOG[case.lemma]
    ctx = Ctx(case)
    out = {}
    for name, text, kind, (row, col), dual in spec.aux_checks:
        theta = ctx.aux(text, kind, row, col)
        out[name] = lift_star(theta, ctx.amb) == ctx.form(dual)
    return out


def symbolic_check(case: IdentityCase, m: int, n: int) -> Verdict:
    return check_case(symbolic_instance(case, m, n))


def cases_by_branch(cases: Iterable[IdentityCase]) -> dict:
    out: dict = {}
    for c in cases:
        out.setdefault(c.branch, []).append(c)
    return out


# -- suite ---------------------------------------------------------------------

MODES = ("symbolic", "random", "both")
COUNT_FIELDS = {Status.BOTH: "matches_both", Status.PROOF_ONLY: "proof_only",
                Status.STATEMENT_ONLY: "statement_only", Status.NEITHER: "neither",
                Status.STATEMENT_ABSENT: "statement_absent"}
FAULTS = ("l01",)


@dataclass(frozen=True)
class SuiteConfig:
    ring: Ring
    m: int
    n: int
    seed: int = 1
    trials: int = 50
    lemmas: tuple = tuple(LemmaId)
    mode: str = "random"
    threads: int = 1
    fault: str | None = None

    def echo(self) -> dict:
        return {"ring": str(self.ring), "m": self.m, "n": self.n, "seed": self.seed, "trials": self.trials,
                "lemmas": [str(x) for x in self.lemmas], "mode": self.mode,
                "fault": self.fault}


def install_fault(name: str | None):
    """Negative control: flip the sign of the delta alpha* term in L01's closed forms."""
    for b in CATALOG[LemmaId.L01].branches:
        override_rhs(LemmaId.L01, b.label)
    if name is None:
        return
    if name != "l01":
        raise ValueError(f"unknown fault {name!r}")
    bad = _form("I - D As - A Ds")
    for b in CATALOG[LemmaId.L01].branches:
        override_rhs(LemmaId.L01, b.label, statement=bad if b.label == "i!=k" else None, proof=bad)


def branch_rng(seed: int, lemma: LemmaId, branch: str):
    """Mersenne Twister seeded from the string "seed:lemma:branch" (SHA-512 based, stable)."""
    return random.Random(f"{seed}:{lemma}:{branch}")


def pick_cases(cases: list, trials: int, rng) -> list:
    """``trials`` cases from a branch: every case in turn if there are few, else a sample."""
    if not cases or trials <= 0:
        return []
    if len(cases) <= trials:
        return [cases[t % len(cases)] for t in range(trials)]
    return rng.sample(cases, trials)


def _record(v: Verdict, mode: str, trial: int) -> dict:
    rec = {"key": list(v.case.key), "mode": mode, "trial": trial, "status": str(v.status)}
    if v.status is Status.NEITHER:
        rec["dump"] = v.dump()
    elif v.status is not Status.BOTH:
        rec["indices"] = dict(v.case.indices)
    return rec


def run_unit(cfg: SuiteConfig, lemma: LemmaId, branch: str, mode: str) -> list:
    """Check one (lemma, branch, mode) slice; returns plain records safe to ship between processes."""
    install_fault(cfg.fault)
    cases = [c for c in _all_cases(CATALOG[lemma], cfg.m, cfg.n) if c.branch == branch]
    out = []
    if mode == "symbolic":
        for t, c in enumerate(cases):
            out.append(_record(check_case(symbolic_instance(c, cfg.m, cfg.n)), mode, t))
    else:
        rng = branch_rng(cfg.seed, lemma, branch)
        for t, c in enumerate(pick_cases(cases, cfg.trials, rng)):
            out.append(_record(check_case(random_instance(c, cfg.ring, cfg.m, cfg.n, rng)), mode, t))
    return out


def _unit_star(args):
    return run_unit(*args)


@dataclass
class Report:
    config: SuiteConfig
    lemmas: list
    failures: list
    discrepancies: list

    @property
    def neither(self) -> int:
        return sum(b["neither"] for lem in self.lemmas for b in lem["branches"])

    def branch(self, lemma, label: str) -> dict:
        for lem in self.lemmas:
            if lem["id"] == str(lemma):
                for b in lem["branches"]:
                    if b["predicate"] == label:
                        return b
        raise KeyError((lemma, label))


def verify_suite(cfg: SuiteConfig) -> Report:
    """Run every selected lemma and branch; deterministic for a fixed config."""
    if not cfg.lemmas:
        raise ConfigError("empty lemma filter")
    for lid in cfg.lemmas:
        enumerate_cases(cfg.m, cfg.n, lid)  # raises RankTooSmall early
    modes = ("symbolic", "random") if cfg.mode == "both" else (cfg.mode,)
    units = [(cfg, lid, b.label, mode) for lid in cfg.lemmas for b in CATALOG[lid].branches for mode in modes]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(_unit_star, units))
    else:
        results = [run_unit(*u) for u in units]
    install_fault(None)

    by_unit = {(u[1], u[2], u[3]): r for u, r in zip(units, results)}
    lemmas, failures, discrepancies = [], [], []
    for lid in cfg.lemmas:
        branches = []
        for b in CATALOG[lid].branches:
            counts = {"predicate": b.label, "cases": 0, **{f: 0 for f in COUNT_FIELDS.values()}}
            seen = set()
            for mode in modes:
                for rec in by_unit[(lid, b.label, mode)]:
                    counts["cases"] += 1
                    counts[COUNT_FIELDS[Status(rec["status"])]] += 1
                    if "dump" in rec:
                        failures.append(rec["dump"] | {"trial": rec["trial"]})
                    if rec["status"] != Status.BOTH.value and rec["status"] not in seen:
                        seen.add(rec["status"])
                        ex = rec.get("indices") or rec["dump"]["indices"]
                        discrepancies.append({"lemma": str(lid), "branch": b.label, "status": rec["status"],
                                              "mode": rec["mode"], "trial": rec["trial"], "indices": ex})
            branches.append(counts)
        lemmas.append({"id": str(lid), "condition": CATALOG[lid].condition_text, "branches": branches})
    return Report(cfg, lemmas, failures, discrepancies)
