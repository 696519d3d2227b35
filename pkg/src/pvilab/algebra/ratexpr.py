"""Normalized rational expressions num/den over Q[tower].

Canonical form: ``num`` and ``den`` have integer coefficients, are coprime
as polynomials, share no integer content, and ``den`` has a positive
lex-leading coefficient.  Zero is ``0/1``.  Equal values therefore have
identical representations, and zero tests are data comparisons.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from . import monomial as mono
from .gcd import gcd, int_content
from .poly import ONE, ZERO, Poly, as_coeff


class DegenerateSubstitution(ZeroDivisionError):
    """A denominator vanished identically after substitution."""


def _fix_content(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if not num.terms:
        return ZERO, ONE
    c = math.gcd(int_content(num), int_content(den))
    _, lead = den.leading()
    if lead < 0:
        c = -c
    if c != 1:
        num = Poly({m: v // c for m, v in num.terms.items()})
        den = Poly({m: v // c for m, v in den.terms.items()})
    return num, den


def _integral_pair(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    # scale a rational-coefficient pair to integer coefficients
    if num.is_integral() and den.is_integral():
        return num, den
    n, cn = num.to_integral()
    d, cd = den.to_integral()
    r = cn / cd
    return n.scale(r.numerator), d.scale(r.denominator)


class RatExpr:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None, *, _canonical: bool = False):
        if _canonical:
            self.num, self.den = num, den
            self._hash = None
            return
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = ONE if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if not den.terms:
            raise ZeroDivisionError(f"rational expression with zero denominator: {num}/0")
        num, den = _integral_pair(num, den)
        if num.terms and not den.is_constant():
            g = gcd(num, den)
            if not g.is_constant():
                num, den = num.divexact(g), den.divexact(g)
        self.num, self.den = _fix_content(num, den)
        self._hash = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def var(cls, name: str) -> "RatExpr":
        return cls(Poly.var(name), ONE, _canonical=True)

    @classmethod
    def const(cls, c) -> "RatExpr":
        c = Fraction(as_coeff(c))
        return cls(Poly.const(c.numerator), Poly.const(c.denominator), _canonical=True)

    @classmethod
    def parse(cls, text: str) -> "RatExpr":
        from .text import parse_expr

        return parse_expr(text)

    # -- predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.terms

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return Fraction(self.num.constant_value(), self.den.constant_value())

    def as_poly(self) -> Poly:
        if not self.den.is_constant():
            raise ValueError(f"{self} is not a polynomial")
        return self.num.scale(Fraction(1, self.den.constant_value()))

    @property
    def variables(self) -> tuple[str, ...]:
        names = set(self.num.variables) | set(self.den.variables)
        return tuple(v for v in mono.TOWER if v in names)

    def degree(self, var: str) -> tuple[int, int]:
        return self.num.degree(var), self.den.degree(var)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatExpr):
            if isinstance(other, str):
                return NotImplemented
            try:
                other = lift(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            # constants hash like the equal Fraction
            self._hash = hash(self.as_fraction()) if self.is_constant() else hash((self.num, self.den))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    # -- arithmetic --------------------------------------------------------
    def __neg__(self) -> "RatExpr":
        return RatExpr(-self.num, self.den, _canonical=True)

    def __add__(self, other) -> "RatExpr":
        y = _lift_or_none(other)
        if y is None:
            return NotImplemented
        x = self
        if not x.num.terms:
            return y
        if not y.num.terms:
            return x
        n1, d1, n2, d2 = x.num, x.den, y.num, y.den
        if d1 == d2:
            num = n1 + n2
            if d1.is_constant():
                return RatExpr(*_fix_content(num, d1), _canonical=True)
            g = gcd(num, d1)
            if not g.is_constant():
                num, d1 = num.divexact(g), d1.divexact(g)
            return RatExpr(*_fix_content(num, d1), _canonical=True)
        if d1.is_constant() and d2.is_constant():
            c1, c2 = d1.constant_value(), d2.constant_value()
            return RatExpr(*_fix_content(n1.scale(c2) + n2.scale(c1), Poly.const(c1 * c2)), _canonical=True)
        g = gcd(d1, d2)
        if g.is_constant():
            num = n1 * d2 + n2 * d1
            den = d1 * d2
            return RatExpr(*_fix_content(num, den), _canonical=True)
        d1g, d2g = d1.divexact(g), d2.divexact(g)
        num = n1 * d2g + n2 * d1g
        den = d1 * d2g
        if not num.terms:
            return ZERO_R
        g2 = gcd(num, g)
        if not g2.is_constant():
            num, den = num.divexact(g2), den.divexact(g2)
        return RatExpr(*_fix_content(num, den), _canonical=True)

    __radd__ = __add__

    def __sub__(self, other) -> "RatExpr":
        y = _lift_or_none(other)
        if y is None:
            return NotImplemented
        return self + (-y)

    def __rsub__(self, other) -> "RatExpr":
        y = _lift_or_none(other)
        if y is None:
            return NotImplemented
        return y + (-self)

    def __mul__(self, other) -> "RatExpr":
        y = _lift_or_none(other)
        if y is None:
            return NotImplemented
        x = self
        if not x.num.terms or not y.num.terms:
            return ZERO_R
        n1, d1, n2, d2 = x.num, x.den, y.num, y.den
        if not d2.is_constant():
            g1 = gcd(n1, d2)
            if not g1.is_constant():
                n1, d2 = n1.divexact(g1), d2.divexact(g1)
        if not d1.is_constant():
            g2 = gcd(n2, d1)
            if not g2.is_constant():
                n2, d1 = n2.divexact(g2), d1.divexact(g2)
        return RatExpr(*_fix_content(n1 * n2, d1 * d2), _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatExpr":
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero rational expression")
        return RatExpr(*_fix_content(self.den, self.num), _canonical=True)

    def __truediv__(self, other) -> "RatExpr":
        y = _lift_or_none(other)
        if y is None:
            return NotImplemented
        if not y.num.terms:
            raise ZeroDivisionError(f"division by zero: ({self}) / ({other})")
        return self * y.inverse()

    def __rtruediv__(self, other) -> "RatExpr":
        y = _lift_or_none(other)
        if y is None:
            return NotImplemented
        return y * self.inverse()

    def __pow__(self, n: int) -> "RatExpr":
        if not isinstance(n, int):
            raise TypeError("integer exponents only")
        if n < 0:
            return self.inverse() ** (-n)
        return RatExpr(*_fix_content(self.num ** n, self.den ** n), _canonical=True) if n else ONE_R

    # -- calculus, substitution, evaluation ---------------------------------
    def diff(self, var: str) -> "RatExpr":
        mono.var_index(var)
        n, d = self.num, self.den
        dn = n.diff(var)
        dd = d.diff(var)
        if not dd.terms:
            return RatExpr(dn, d)
        return RatExpr(dn * d - n * dd, d * d)

    def substitute(self, bindings: Mapping[str, object]) -> "RatExpr":
        if not bindings:
            return self
        binds = {mono.canonical_name(k): lift(v) for k, v in bindings.items()}
        nn, nd = _subst_poly(self.num, binds)
        dn, dd = _subst_poly(self.den, binds)
        if not dn.terms:
            raise DegenerateSubstitution(
                f"denominator {self.den} vanishes identically under "
                + ", ".join(f"{k} -> {v}" for k, v in binds.items())
            )
        return RatExpr(nn * dd, nd * dn)

    def evaluate(self, values: Mapping[str, object]):
        """Numeric value at a point; exact when the values are rational."""
        d = self.den.evaluate(values)
        if d == 0:
            raise ZeroDivisionError(f"denominator {self.den} vanishes at {dict(values)}")
        n = self.num.evaluate(values)
        if isinstance(n, (int, Fraction)) and isinstance(d, (int, Fraction)):
            r = Fraction(n) / d
            return r.numerator if r.denominator == 1 else r
        return n / d

    def __repr__(self) -> str:
        return f"RatExpr({self})"

    def __str__(self) -> str:
        from .text import format_ratexpr

        return format_ratexpr(self)


def _subst_poly(p: Poly, binds: Mapping[str, RatExpr]) -> tuple[Poly, Poly]:
    """Substitute into a polynomial; returns (numerator, denominator) polys."""
    idx = {mono.var_index(k): v for k, v in binds.items()}
    degs = {i: p.degree(i) for i in idx}
    degs = {i: d for i, d in degs.items() if d > 0}
    if not degs:
        return p, ONE
    cache: dict[tuple[int, int, str], Poly] = {}

    def pw(i: int, e: int, which: str) -> Poly:
        key = (i, e, which)
        if key not in cache:
            r = idx[i]
            cache[key] = (r.num if which == "n" else r.den) ** e
        return cache[key]

    groups: dict[tuple[int, ...], dict[int, object]] = {}
    order = sorted(degs)
    for m, c in p.terms.items():
        key = tuple(mono.degree_in(m, i) for i in order)
        base = m
        for i in order:
            base = mono.strip(base, i)
        groups.setdefault(key, {})[base] = c
    out = ZERO
    for key, rest in groups.items():
        factor = Poly(rest)
        for i, e in zip(order, key):
            factor = factor * pw(i, e, "n") * pw(i, degs[i] - e, "d")
        out = out + factor
    den = ONE
    for i in order:
        den = den * pw(i, degs[i], "d")
    return out, den


def lift(x) -> RatExpr:
    if isinstance(x, RatExpr):
        return x
    if isinstance(x, Poly):
        return RatExpr(x)
    if isinstance(x, str):
        return RatExpr.parse(x)
    return RatExpr.const(x)


def _lift_or_none(x) -> RatExpr | None:
    if isinstance(x, RatExpr):
        return x
    if isinstance(x, Poly):
        return RatExpr(x)
    try:
        return RatExpr.const(x)
    except TypeError:
        return None


def var(name: str) -> RatExpr:
    return RatExpr.var(name)


def const(c) -> RatExpr:
    return RatExpr.const(c)


ZERO_R = RatExpr(ZERO, ONE, _canonical=True)
ONE_R = RatExpr(ONE, ONE, _canonical=True)
