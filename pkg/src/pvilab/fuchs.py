"""Second-order Fuchsian equations a0 x'' + a1 x' + a2 x = 0 in the variable s.

Coefficients are polynomials in s over Q(a) (stored as polynomials in
both).  Local analysis works over Q(a) exactly: Taylor shifts to a root of
a0, leading local data, indicial equations and the Frobenius recursion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Poly, RatExpr, format_rational, gcd, lift, parse_expr, var
from .algebra.poly import ONE
from .algebra.univariate import (
    NotSplit,
    coefficients,
    linear_factor_roots,
    partial_fractions,
    poly_sqrt,
    residue_at,
    taylor_shift,
    trim,
)
from .hamiltonian import Theta, accessory_parameter, k_constant

S = "s"


class Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __str__(self) -> str:
        return "oo"

    __repr__ = __str__


INFINITY = Infinity()


def is_infinity(point) -> bool:
    return point is INFINITY or (isinstance(point, str) and point.strip() in ("oo", "inf", "∞"))


class IrregularSingularity(ValueError):
    pass


class NotApplicable(ValueError):
    """apparent_test called at a point whose exponents are not {0, n}, n ≥ 1."""


class StructureMismatch(ValueError):
    pass


class CoincidentSingularities(ValueError):
    pass


@dataclass(frozen=True)
class LinearODE2:
    """a0(s) x'' + a1(s) x' + a2(s) x = 0."""

    a0: Poly
    a1: Poly
    a2: Poly

    def __post_init__(self):
        if not self.a0.terms:
            raise ValueError("leading coefficient a0 must be nonzero")

    @classmethod
    def from_rational(cls, c0, c1, c2) -> "LinearODE2":
        """Clear denominators of rational coefficients and normalize."""
        cs = [lift(c) for c in (c0, c1, c2)]
        L = ONE
        for c in cs:
            g = gcd(L, c.den)
            L = L * c.den.divexact(g)
        polys = [c.num * L.divexact(c.den) for c in cs]
        return cls(*polys).normalized()

    def coefficients(self) -> tuple[Poly, Poly, Poly]:
        return (self.a0, self.a1, self.a2)

    def normalized(self) -> "LinearODE2":
        """Divide out the common factor, make integral and primitive with
        positive lex-leading coefficient of a0."""
        ints = []
        for p in self.coefficients():
            ints.append(p)
        g = gcd(gcd(ints[0], ints[1]), ints[2])
        polys = [p.divexact(g) for p in ints]
        # joint rational content
        from math import gcd as igcd, lcm

        den = 1
        for p in polys:
            for c in p.terms.values():
                if isinstance(c, Fraction):
                    den = lcm(den, c.denominator)
        polys = [p.scale(den) for p in polys]
        cont = 0
        for p in polys:
            for c in p.terms.values():
                cont = igcd(cont, int(c))
        if polys[0].leading()[1] < 0:
            cont = -cont
        polys = [p.scale(Fraction(1, cont)) for p in polys]
        return LinearODE2(*polys)

    def p1(self) -> RatExpr:
        return RatExpr(self.a1, self.a0)

    def p2(self) -> RatExpr:
        return RatExpr(self.a2, self.a0)

    def specialize(self, **values) -> "LinearODE2":
        return LinearODE2(*(p.partial_evaluate(values) for p in self.coefficients()))

    def to_dict(self) -> dict:
        return {"a0": str(self.a0), "a1": str(self.a1), "a2": str(self.a2)}

    @classmethod
    def from_dict(cls, d: dict) -> "LinearODE2":
        return cls(*(parse_expr(d[k]).as_poly() for k in ("a0", "a1", "a2")))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def is_proportional(self, other: "LinearODE2") -> bool:
        return self.normalized() == other.normalized()


# -- singular points ---------------------------------------------------------

def singular_points(ode: LinearODE2) -> list:
    """Distinct finite roots of a0 over Q(a), followed by INFINITY."""
    roots = linear_factor_roots(ode.a0, S)
    return [r for r, _ in roots] + [INFINITY]


def _local_data(ode: LinearODE2, point) -> tuple[list, list, list, int]:
    """Taylor coefficients of a0, a1, a2 at ``point`` and the order of a0."""
    p = lift(point)
    A = [taylor_shift(coefficients(c, S), p) for c in ode.coefficients()]
    m0 = 0
    while A[0][m0].is_zero():
        m0 += 1
    return A[0], A[1], A[2], m0


def _order(cs: Sequence[RatExpr]) -> int:
    for i, c in enumerate(cs):
        if not c.is_zero():
            return i
    return 10 ** 9


def _local_PQ(ode: LinearODE2, point, n: int) -> tuple[list[RatExpr], list[RatExpr]]:
    """Series of z·a1/a0 and z²·a2/a0 at ``point`` up to z^n."""
    A0, A1, A2, m0 = _local_data(ode, point)
    if _order(A1) < m0 - 1 or _order(A2) < m0 - 2:
        raise IrregularSingularity(f"s = {point} is an irregular singular point")
    den = A0[m0:]
    pnum = A1[m0 - 1:] if m0 >= 1 else [RatExpr(0)] * (1 - m0) + A1
    qnum = A2[m0 - 2:] if m0 >= 2 else [RatExpr(0)] * (2 - m0) + A2
    return _series_div(pnum, den, n), _series_div(qnum, den, n)


def _series_div(num: Sequence[RatExpr], den: Sequence[RatExpr], n: int) -> list[RatExpr]:
    zero = RatExpr(0)
    num = list(num) + [zero] * (n + 1)
    den = list(den) + [zero] * (n + 1)
    out: list[RatExpr] = []
    inv = den[0].inverse()
    for j in range(n + 1):
        acc = num[j]
        for i in range(j):
            if not out[i].is_zero() and not den[j - i].is_zero():
                acc = acc - out[i] * den[j - i]
        out.append(acc * inv)
    return out


def _quadratic_roots(b: RatExpr, c: RatExpr) -> tuple[RatExpr, RatExpr]:
    """Roots of ρ² + bρ + c = 0 over Q(a) (must be rational there)."""
    disc = b * b - c * 4
    if disc.is_zero():
        r = -b / 2
        return r, r
    sn = poly_sqrt(disc.num)
    sd = poly_sqrt(disc.den)
    if sn is None or sd is None:
        raise NotSplit(disc, "indicial discriminant is not a square in Q(a)")
    sq = RatExpr(sn, sd)
    r1, r2 = (-b - sq) / 2, (-b + sq) / 2
    return _ordered(r1, r2)


def _ordered(r1: RatExpr, r2: RatExpr) -> tuple[RatExpr, RatExpr]:
    if r1.is_constant() and r2.is_constant() and r1.as_fraction() > r2.as_fraction():
        return r2, r1
    return r1, r2


def indicial_exponents(ode: LinearODE2, point) -> tuple[RatExpr, RatExpr]:
    """Local exponents, ascending when rational.

    At ∞ the convention is x ~ s^(-ρ).
    """
    if is_infinity(point):
        cs = [coefficients(c, S) for c in ode.coefficients()]
        cs = [trim(c) for c in cs]
        d0 = len(cs[0]) - 1
        if len(cs[1]) - 1 > d0 - 1 or len(cs[2]) - 1 > d0 - 2:
            raise IrregularSingularity("s = oo is an irregular singular point")
        lc = cs[0][d0]
        r = cs[1][d0 - 1] / lc if len(cs[1]) >= d0 else RatExpr(0)
        q = cs[2][d0 - 2] / lc if len(cs[2]) >= d0 - 1 else RatExpr(0)
        return _quadratic_roots(1 - r, q)
    P, Q = _local_PQ(ode, point, 0)
    return _quadratic_roots(P[0] - 1, Q[0])


@dataclass(frozen=True)
class ApparentResult:
    point: RatExpr
    apparent: bool
    obstruction: RatExpr
    n: int

    @property
    def verdict(self) -> str:
        return "apparent" if self.apparent else "logarithmic"


def apparent_test(ode: LinearODE2, point) -> ApparentResult:
    """Frobenius test at a point with exponents {0, n}, n a positive integer.

    Runs the recursion from exponent 0 exactly; the point is apparent iff
    the obstruction at level n is identically zero.
    """
    if is_infinity(point):
        raise NotApplicable("apparent_test is only implemented at finite points")
    e1, e2 = indicial_exponents(ode, point)
    if not (e1.is_constant() and e2.is_constant()):
        raise NotApplicable(f"exponents {e1}, {e2} at {point} are not rational constants")
    lo, hi = e1.as_fraction(), e2.as_fraction()
    n = hi - lo
    if lo != 0 or n.denominator != 1 or n <= 0:
        raise NotApplicable(f"exponents ({lo}, {hi}) at {point}: need {{0, n}} with n a positive integer")
    n = int(n)
    P, Q = _local_PQ(ode, point, n)
    c = [RatExpr(1)]
    obstruction = RatExpr(0)
    for j in range(1, n + 1):
        rhs = RatExpr(0)
        for i in range(j):
            term = P[j - i] * i + Q[j - i]
            if not term.is_zero() and not c[i].is_zero():
                rhs = rhs - c[i] * term
        if j < n:
            c.append(rhs / (j * (j - n)))
        else:
            obstruction = rhs
    return ApparentResult(lift(point), obstruction.is_zero(), obstruction, n)


# -- Riemann scheme ------------------------------------------------------------

@dataclass(frozen=True)
class SchemeEntry:
    location: object  # RatExpr or INFINITY
    exponents: tuple[RatExpr, RatExpr]
    apparent: bool | None = None

    def exponent_set(self) -> tuple[Fraction, ...]:
        return tuple(sorted(e.as_fraction() for e in self.exponents))


@dataclass(frozen=True)
class RiemannScheme:
    entries: tuple[SchemeEntry, ...]

    @property
    def apparent_flags(self) -> tuple:
        return tuple(e.location for e in self.entries if e.apparent)

    def fuchs_sum(self) -> RatExpr:
        total = RatExpr(0)
        for e in self.entries:
            total = total + e.exponents[0] + e.exponents[1]
        return total

    def fuchs_relation_holds(self) -> bool:
        return self.fuchs_sum() == len(self.entries) - 2

    def at(self, location) -> SchemeEntry:
        for e in self.entries:
            if e.location is location or (location is not INFINITY and e.location == lift(location)):
                return e
        raise KeyError(location)

    def to_dict(self) -> dict:
        return {
            "entries": [
                {
                    "location": str(e.location),
                    "exponents": [str(x) for x in e.exponents],
                    "apparent": e.apparent,
                }
                for e in self.entries
            ],
            "fuchs_sum": str(self.fuchs_sum()),
        }

    def table(self) -> str:
        """Three-row table: locations, first exponents, second exponents."""
        cols = [
            [str(e.location), str(e.exponents[0]), str(e.exponents[1])]
            for e in self.entries
        ]
        widths = [max(len(x) for x in c) for c in cols]
        rows = []
        for r in range(3):
            rows.append(" | ".join(c[r].rjust(w) for c, w in zip(cols, widths)))
        return "\n".join(rows)


def riemann_scheme(ode: LinearODE2) -> RiemannScheme:
    entries = []
    for p in singular_points(ode):
        ex = indicial_exponents(ode, p)
        flag = None
        if p is not INFINITY:
            try:
                flag = apparent_test(ode, p).apparent
            except NotApplicable:
                flag = False
        entries.append(SchemeEntry(p, ex, flag))
    return RiemannScheme(tuple(entries))


# -- the normal form E_θ(λ, μ, t) ----------------------------------------------

def e_theta_coefficients(theta: Theta, lam, mu, t) -> tuple[RatExpr, RatExpr]:
    """p1, p2 of x'' + p1 x' + p2 x = 0 with apparent point λ."""
    lam, mu, t = lift(lam), lift(mu), lift(t)
    s = var(S)
    k = k_constant(theta)
    K = accessory_parameter(theta, lam, mu, t)
    p1 = (1 - theta.th0) / s + (1 - theta.th1) / (s - 1) + (1 - theta.tht) / (s - t) - 1 / (s - lam)
    p2 = (
        k / (s * (s - 1))
        - t * (t - 1) * K / (s * (s - 1) * (s - t))
        + lam * (lam - 1) * mu / (s * (s - 1) * (s - lam))
    )
    return p1, p2


def build_e_theta(theta: Theta, lam, mu, t) -> LinearODE2:
    lam, mu, t = lift(lam), lift(mu), lift(t)
    for name, x, bad in (("t", t, (0, 1)), ("lam", lam, (0, 1))):
        for b in bad:
            if x == b:
                raise CoincidentSingularities(f"{name} = {b} collides with a fixed singular point")
    if lam == t:
        raise CoincidentSingularities("lam = t")
    p1, p2 = e_theta_coefficients(theta, lam, mu, t)
    return LinearODE2.from_rational(1, p1, p2)


@dataclass(frozen=True)
class EThetaParams:
    theta: Theta
    lam: RatExpr
    t: RatExpr
    mu: RatExpr
    k_consistent: bool
    accessory_consistent: bool
    alpha_inf: Fraction
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "theta": [format_rational(x) for x in self.theta.as_tuple()],
            "lam": str(self.lam),
            "t": str(self.t),
            "mu": str(self.mu),
            "k_consistent": self.k_consistent,
            "accessory_consistent": self.accessory_consistent,
            "alpha_inf": format_rational(self.alpha_inf),
        }


def _const(x: RatExpr, what: str) -> Fraction:
    if not x.is_constant():
        raise StructureMismatch(f"{what} = {x} is not a rational constant")
    return x.as_fraction()


def extract_e_theta_params(ode: LinearODE2) -> EThetaParams:
    """Read θ, λ, t, μ off an equation in E_θ normal form."""
    finite = [p for p in singular_points(ode) if p is not INFINITY]
    fixed = [lift(0), lift(1)]
    for f in fixed:
        if f not in finite:
            raise StructureMismatch(f"s = {f} is not a singular point")
    movable = [p for p in finite if p not in fixed]
    if len(movable) != 2:
        raise StructureMismatch(f"expected two movable singular points, found {len(movable)}")
    apparent = []
    for p in movable:
        try:
            res = apparent_test(ode, p)
        except NotApplicable:
            continue
        if res.apparent and res.n == 2:
            apparent.append(p)
    if len(apparent) != 1:
        raise StructureMismatch(f"expected one apparent point with exponents {{0, 2}}, found {len(apparent)}")
    lam = apparent[0]
    t = movable[0] if movable[1] == lam else movable[1]

    pf = partial_fractions(ode.p1(), [fixed[0], fixed[1], t, lam])
    if not pf.polynomial.is_zero():
        raise StructureMismatch(f"p1 has polynomial part {pf.polynomial}")
    r0, r1, rt, rl = (r for _, r in pf.terms)
    if rl != -1:
        raise StructureMismatch(f"residue of p1 at lam is {rl}, expected -1")
    th0 = 1 - _const(r0, "Res_0 p1")
    th1 = 1 - _const(r1, "Res_1 p1")
    tht = 1 - _const(rt, "Res_t p1")
    e_lo, e_hi = indicial_exponents(ode, INFINITY)
    alpha_inf = _const(e_lo, "exponent at oo")
    thinf = _const(e_hi, "exponent at oo") - alpha_inf
    theta = Theta(th0, th1, tht, thinf)

    p2 = ode.p2()
    mu = residue_at(p2, lam)
    k = k_constant(theta)
    # k is the limit of s^2 p2 at infinity
    cs2 = trim(coefficients(ode.a2, S))
    cs0 = trim(coefficients(ode.a0, S))
    lim = cs2[len(cs0) - 3] / cs0[-1] if len(cs2) == len(cs0) - 2 else RatExpr(0)
    k_ok = lim == k
    K = -residue_at(p2, t)
    s = var(S)
    rebuilt = (
        k / (s * (s - 1))
        - t * (t - 1) * K / (s * (s - 1) * (s - t))
        + lam * (lam - 1) * mu / (s * (s - 1) * (s - lam))
    )
    acc_ok = rebuilt == p2 and K == accessory_parameter(theta, lam, mu, t)
    return EThetaParams(theta, lam, t, mu, k_ok, acc_ok, alpha_inf)
