"""Polynomials in one distinguished variable over the field Q(inner variables).

A polynomial in ``s`` over Q(a) is held as a dense list of RatExpr
coefficients, lowest degree first.  This module provides division,
Taylor shifts, residues, partial fractions and splitting into factors
that are linear in the distinguished variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import monomial as mono
from .gcd import gcd
from .poly import ONE, Poly
from .ratexpr import ONE_R, ZERO_R, RatExpr, lift


class HigherOrderPole(ArithmeticError):
    def __init__(self, pole, multiplicity: int):
        super().__init__(f"pole at {pole} has multiplicity {multiplicity}, expected at most 1")
        self.pole = pole
        self.multiplicity = multiplicity


class NotSplit(ArithmeticError):
    """A factor does not split into linear factors over the coefficient field."""

    def __init__(self, factor, reason: str):
        super().__init__(f"factor {factor} does not split: {reason}")
        self.factor = factor


ULPoly = list  # list[RatExpr], lowest degree first


def coefficients(p, var: str = "s") -> ULPoly:
    """Dense coefficient list of ``p`` (Poly or RatExpr) in ``var``."""
    r = lift(p)
    if r.den.degree(var) > 0:
        raise ValueError(f"{r} is not polynomial in {var}")
    scale = RatExpr(ONE, r.den)
    return [RatExpr(c) * scale for c in r.num.coeff_list(var)]


def from_coefficients(cs: Sequence[RatExpr], var: str = "s") -> RatExpr:
    x = RatExpr.var(var)
    out = ZERO_R
    for c in reversed(cs):
        out = out * x + c
    return out


def trim(cs: ULPoly) -> ULPoly:
    cs = list(cs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def horner(cs: Sequence[RatExpr], x: RatExpr) -> RatExpr:
    out = ZERO_R
    for c in reversed(cs):
        out = out * x + c
    return out


def derivative(cs: Sequence[RatExpr]) -> ULPoly:
    return [c * k for k, c in enumerate(cs)][1:]


def divmod_u(num: Sequence[RatExpr], den: Sequence[RatExpr]) -> tuple[ULPoly, ULPoly]:
    num, den = trim(num), trim(den)
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(num) < len(den):
        return [], num
    rem = list(num)
    lc = den[-1]
    quot = [ZERO_R] * (len(num) - len(den) + 1)
    for j in range(len(num) - len(den), -1, -1):
        c = rem[j + len(den) - 1] / lc
        quot[j] = c
        if c.is_zero():
            continue
        for i, d in enumerate(den):
            rem[i + j] = rem[i + j] - c * d
    return trim(quot), trim(rem[: len(den) - 1])


def taylor_shift(cs: Sequence[RatExpr], p: RatExpr) -> ULPoly:
    """Coefficients of ``P(p + z)`` in ``z``."""
    c = list(cs)
    n = len(c)
    for k in range(n):
        for j in range(n - 2, k - 1, -1):
            c[j] = c[j] + p * c[j + 1]
    return c


def root_multiplicity(cs: Sequence[RatExpr], p: RatExpr) -> int:
    shifted = taylor_shift(trim(cs), p)
    m = 0
    while m < len(shifted) and shifted[m].is_zero():
        m += 1
    return m


def residue_at(f, pole, var: str = "s") -> RatExpr:
    """Residue of ``f`` at a simple pole ``var = pole``; 0 if regular there."""
    f, pole = lift(f), lift(pole)
    num = coefficients(f.num, var)
    den = coefficients(f.den, var)
    m = root_multiplicity(den, pole)
    if m == 0:
        return ZERO_R
    if m > 1:
        raise HigherOrderPole(pole, m)
    return horner(num, pole) / horner(derivative(den), pole)


@dataclass(frozen=True)
class PartialFractions:
    terms: tuple  # tuple[(pole RatExpr, residue RatExpr), ...]
    polynomial: RatExpr
    var: str = "s"

    def residue(self, pole) -> RatExpr:
        pole = lift(pole)
        for p, r in self.terms:
            if p == pole:
                return r
        raise KeyError(f"no pole at {pole}")

    def recombine(self) -> RatExpr:
        x = RatExpr.var(self.var)
        out = self.polynomial
        for p, r in self.terms:
            out = out + r / (x - p)
        return out


def partial_fractions(f, poles: Sequence, var: str = "s") -> PartialFractions:
    """Decompose ``f`` over simple poles; the result recombines to ``f`` exactly."""
    f = lift(f)
    poles = [lift(p) for p in poles]
    num = coefficients(f.num, var)
    den = coefficients(f.den, var)
    for p in poles:
        m = root_multiplicity(den, p)
        if m > 1:
            raise HigherOrderPole(p, m)
    quot, _ = divmod_u(num, den)
    terms = tuple((p, residue_at(f, p, var)) for p in poles)
    pf = PartialFractions(terms, from_coefficients(quot, var), var)
    if pf.recombine() != f:
        raise NotSplit(f.den, f"denominator has poles outside {[str(p) for p in poles]}")
    return pf


# -- splitting ------------------------------------------------------------

def poly_sqrt(p: Poly) -> Poly | None:
    """Exact square root of a polynomial in at most one variable, or None."""
    if not p.terms:
        return p
    x = p.main_var()
    if x < 0:
        r = _rational_sqrt(Fraction(p.constant_value()))
        return None if r is None else Poly.const(r)
    coeffs = p.coeff_list(x)
    if any(not c.is_constant() for c in coeffs):
        raise NotSplit(p, "square roots of multivariate polynomials are not supported")
    cs = [Fraction(c.constant_value()) if c.terms else Fraction(0) for c in coeffs]
    n = len(cs) - 1
    if n % 2:
        return None
    m = n // 2
    lead = _rational_sqrt(cs[-1])
    if lead is None:
        return None
    g = [Fraction(0)] * (m + 1)
    g[m] = lead
    for k in range(m - 1, -1, -1):
        acc = cs[m + k] - sum(g[i] * g[m + k - i] for i in range(k + 1, m))
        g[k] = acc / (2 * lead)
    root = Poly.from_univariate(mono.TOWER[x], [Poly.const(c) for c in g])
    return root if root * root == p else None


def _rational_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    n, d = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if n * n == c.numerator and d * d == c.denominator:
        return Fraction(n, d)
    return None


def _divisors(n: int, cap: int = 10 ** 12) -> list[int]:
    n = abs(n)
    if n > cap:
        raise NotSplit(n, "constant term too large for rational-root search")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_roots(cs: list[int]) -> list[Fraction]:
    """Rational roots of an integer polynomial (lowest degree first)."""
    roots = []
    while cs and cs[0] == 0:
        roots.append(Fraction(0))
        cs = cs[1:]
    if len(cs) <= 1:
        return roots
    found = set()
    for p in _divisors(cs[0]):
        for q in _divisors(cs[-1]):
            for r in (Fraction(p, q), Fraction(-p, q)):
                if r in found:
                    continue
                val = Fraction(0)
                for c in reversed(cs):
                    val = val * r + c
                if val == 0:
                    found.add(r)
    return roots + sorted(found)


def linear_factor_roots(p, var: str = "s") -> list[tuple[RatExpr, int]]:
    """Roots in Q(inner) of a polynomial in ``var``, with multiplicities.

    Handles constant roots of any degree and, after removing them, a
    residual factor of degree at most two (quadratic formula with an exact
    square root of the discriminant).  Anything else raises NotSplit.
    """
    r = lift(p)
    P = r.num
    if P.degree(var) <= 0:
        return []
    vi = mono.var_index(var)
    # constant roots: common roots of every inner-monomial slice
    slices: dict[int, dict[int, int]] = {}
    for m, c in P.terms.items():
        inner = mono.strip(m, vi)
        slices.setdefault(inner, {})[mono.degree_in(m, vi)] = c
    C = None
    for sl in slices.values():
        u = Poly({mono.unit(vi, e): c for e, c in sl.items()})
        C = u if C is None else gcd(C, u)
    roots: list[tuple[RatExpr, int]] = []
    x = Poly.var(var)
    rest = P
    if C is not None and C.degree(vi) > 0:
        ints = [int(c.constant_value()) if c.terms else 0 for c in C.coeff_list(vi)]
        for q in _rational_roots(ints):
            lin = x.scale(q.denominator) - Poly.const(q.numerator)
            k = 0
            while rest.degree(vi) > 0 and lin.divides(rest):
                rest = rest.divexact(lin)
                k += 1
            if k:
                roots.append((RatExpr.const(q), k))
    # remaining factor
    if rest.degree(vi) <= 0:
        return roots
    cs = rest.coeff_list(vi)
    d = len(cs) - 1
    if d == 1:
        roots.append((-RatExpr(cs[0]) / RatExpr(cs[1]), 1))
        return roots
    if d == 2:
        c0, c1, c2 = (RatExpr(c) for c in cs)
        disc = (c1 * c1 - c0 * c2 * 4)
        if disc.is_zero():
            roots.append((-c1 / (c2 * 2), 2))
            return roots
        sq = poly_sqrt(disc.as_poly())
        if sq is None:
            raise NotSplit(rest, "discriminant is not a square")
        sq = RatExpr(sq)
        r1 = (-c1 + sq) / (c2 * 2)
        r2 = (-c1 - sq) / (c2 * 2)
        roots.extend([(r1, 1), (r2, 1)])
        return roots
    raise NotSplit(rest, f"degree {d} after removing constant roots")


def xgcd_u(f: Sequence[RatExpr], g: Sequence[RatExpr]) -> tuple[ULPoly, ULPoly, ULPoly]:
    """Monic d = gcd(f, g) with u f + v g = d."""
    r0, r1 = trim(f), trim(g)
    s0, s1 = [ONE_R], []
    t0, t1 = [], [ONE_R]
    while r1:
        q, r = divmod_u(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub_u(s0, mul_u(q, s1))
        t0, t1 = t1, sub_u(t0, mul_u(q, t1))
    if not r0:
        raise ZeroDivisionError("gcd of two zero polynomials")
    inv = r0[-1].inverse()
    return [c * inv for c in r0], [c * inv for c in s0], [c * inv for c in t0]


def mul_u(p: Sequence[RatExpr], q: Sequence[RatExpr]) -> ULPoly:
    if not p or not q:
        return []
    out = [ZERO_R] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x.is_zero():
            continue
        for j, y in enumerate(q):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return trim(out)


def add_u(p: Sequence[RatExpr], q: Sequence[RatExpr]) -> ULPoly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else ZERO_R) + (q[i] if i < len(q) else ZERO_R) for i in range(n)])


def sub_u(p: Sequence[RatExpr], q: Sequence[RatExpr]) -> ULPoly:
    return add_u(p, [-c for c in q])


