"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import heapq
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Union

from . import monomial as mono
from .monomial import TOWER, var_index

Coeff = Union[int, Fraction]


class NotDivisible(ArithmeticError):
    pass


def _nc(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _cdiv(a: Coeff, b: Coeff) -> Coeff:
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        if not r:
            return q
    return _nc(Fraction(a) / b)


def as_coeff(c) -> Coeff:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return _nc(c)
    if isinstance(c, _RationalABC):
        return _nc(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational coefficient: {c!r}")


class Poly:
    """Polynomial over Q in the indeterminates of ``TOWER``.

    ``terms`` maps packed monomials to nonzero coefficients (``int`` when
    integral, otherwise ``Fraction``).  Instances are treated as immutable.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[int, Coeff] | None = None):
        self.terms: dict[int, Coeff] = dict(terms) if terms else {}
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        c = as_coeff(c)
        return cls({0: c} if c else None)

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({mono.unit(var_index(name)): 1})

    @classmethod
    def from_exponents(cls, data: Mapping[tuple, object], variables: Iterable[str]) -> "Poly":
        idx = [var_index(v) for v in variables]
        out: dict[int, Coeff] = {}
        for exps, c in data.items():
            c = as_coeff(c)
            if not c:
                continue
            full = [0] * mono.NVARS
            for i, e in zip(idx, exps):
                full[i] += e
            m = mono.pack(full)
            v = out.get(m, 0) + c
            if v:
                out[m] = _nc(v)
            else:
                out.pop(m, None)
        return cls(out)

    @classmethod
    def from_univariate(cls, var: str, coeffs: Mapping[int, "Poly"] | list) -> "Poly":
        i = var_index(var)
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        out: dict[int, Coeff] = {}
        for e, c in items:
            c = _lift(c)
            shift = mono.unit(i, e)
            for m, v in c.terms.items():
                out[m + shift] = v
        return cls(out)

    # -- inspection ----------------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        seen = 0
        for m in self.terms:
            seen |= m
        return tuple(TOWER[i] for i in mono.support(seen))

    def exponent_map(self) -> dict[tuple[int, ...], Coeff]:
        return {mono.unpack(m): c for m, c in self.terms.items()}

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(0, 0)

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self.terms.values())

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self, var: str | int) -> int:
        i = var if isinstance(var, int) else var_index(var)
        if not self.terms:
            return -1
        return max(mono.degree_in(m, i) for m in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(mono.total_degree(m) for m in self.terms)

    def leading(self) -> tuple[int, Coeff]:
        """Leading (monomial, coefficient) in lex order, outermost variable first."""
        m = max(self.terms)
        return m, self.terms[m]

    def main_var(self) -> int:
        """Index of the outermost variable occurring, -1 for constants."""
        seen = 0
        for m in self.terms:
            seen |= m
        return mono.highest_var(seen)

    def coeffs_in(self, var: str | int) -> dict[int, "Poly"]:
        i = var if isinstance(var, int) else var_index(var)
        out: dict[int, dict[int, Coeff]] = {}
        for m, c in self.terms.items():
            e = mono.degree_in(m, i)
            out.setdefault(e, {})[mono.strip(m, i)] = c
        return {e: Poly(t) for e, t in out.items()}

    def coeff_list(self, var: str | int) -> list["Poly"]:
        """Dense coefficient list in ``var``, lowest degree first."""
        cs = self.coeffs_in(var)
        if not cs:
            return []
        return [cs.get(e, ZERO) for e in range(max(cs) + 1)]

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = _lift_or_none(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = _nc(v)
            else:
                del out[m]
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = _lift_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        other = _lift_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "Poly":
        c = as_coeff(c)
        if not c:
            return ZERO
        if c == 1:
            return self
        return Poly({m: _nc(v * c) for m, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return ZERO
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (m2, c2), = b.items()
            return Poly({m1 + m2: _nc(c1 * c2) for m1, c1 in a.items()})
        out: dict[int, Coeff] = {}
        get = out.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                k = m1 + m2
                out[k] = get(k, 0) + c1 * c2
        return Poly({k: _nc(v) for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        try:
            return self.terms == Poly.const(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def divexact(self, other: "Poly") -> "Poly":
        """Exact quotient; raises :class:`NotDivisible` on a nonzero remainder."""
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return ZERO
        qm, qc = other.leading()
        if len(other.terms) == 1:
            out = {}
            for m, c in self.terms.items():
                t = mono.divides(qm, m)
                if t is None:
                    raise NotDivisible(f"{other} does not divide {self}")
                out[t] = _cdiv(c, qc)
            return Poly(out)
        rest = [(m, c) for m, c in other.terms.items() if m != qm]
        r = dict(self.terms)
        heap = [-m for m in r]
        heapq.heapify(heap)
        quot: dict[int, Coeff] = {}
        while r:
            m = -heapq.heappop(heap)
            c = r.pop(m, None)
            if c is None:
                continue
            t = mono.divides(qm, m)
            if t is None:
                raise NotDivisible(f"{other} does not divide {self}")
            k = _cdiv(c, qc)
            quot[t] = k
            for m2, c2 in rest:
                key = t + m2
                old = r.get(key)
                if old is None:
                    r[key] = -k * c2
                    heapq.heappush(heap, -key)
                else:
                    v = old - k * c2
                    if v:
                        r[key] = v
                    else:
                        del r[key]
        return Poly({m: _nc(c) for m, c in quot.items()})

    def divides(self, other: "Poly") -> bool:
        try:
            other.divexact(self)
        except NotDivisible:
            return False
        return True

    # -- calculus and substitution --------------------------------------
    def diff(self, var: str) -> "Poly":
        i = var_index(var)
        u = mono.unit(i)
        out = {}
        for m, c in self.terms.items():
            e = mono.degree_in(m, i)
            if e:
                out[m - u] = _nc(c * e)
        return Poly(out)

    def compose(self, bindings: Mapping[str, "Poly"]) -> "Poly":
        """Simultaneous substitution of polynomials for variables."""
        idx = {var_index(k): _lift(v) for k, v in bindings.items()}
        if not idx:
            return self
        cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in cache:
                cache[key] = idx[i] ** e
            return cache[key]

        out = ZERO
        acc: dict[int, Coeff] = {}
        for m, c in self.terms.items():
            base = m
            factor = None
            for i in idx:
                e = mono.degree_in(m, i)
                if e:
                    base = mono.strip(base, i)
                    factor = power(i, e) if factor is None else factor * power(i, e)
            if factor is None:
                acc[base] = _nc(acc.get(base, 0) + c)
                continue
            out = out + Poly({base: c}) * factor
        return out + Poly({m: c for m, c in acc.items() if c})

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at numeric values (exact for int/Fraction inputs).

        Variables not bound in ``values`` must not occur.
        """
        idx = {var_index(k): v for k, v in values.items()}
        cache: dict[tuple[int, int], object] = {}
        total = 0
        for m, c in self.terms.items():
            term = c
            for i in mono.support(m):
                if i not in idx:
                    raise KeyError(f"no value for {TOWER[i]}")
                e = mono.degree_in(m, i)
                key = (i, e)
                p = cache.get(key)
                if p is None:
                    p = cache[key] = idx[i] ** e
                term = term * p
            total = total + term
        return _nc(total) if isinstance(total, Fraction) else total

    def partial_evaluate(self, values: Mapping[str, object]) -> "Poly":
        """Bind some variables to exact rationals, keep the rest symbolic."""
        idx = {var_index(k): as_coeff(v) for k, v in values.items()}
        out: dict[int, Coeff] = {}
        for m, c in self.terms.items():
            base = m
            for i, val in idx.items():
                e = mono.degree_in(m, i)
                if e:
                    base = mono.strip(base, i)
                    c = c * val ** e
            v = out.get(base, 0) + c
            if v:
                out[base] = _nc(v)
            else:
                out.pop(base, None)
        return Poly(out)

    # -- content -------------------------------------------------------
    def to_integral(self) -> tuple["Poly", Fraction]:
        """Return ``(P, c)`` with ``self == c * P``, ``P`` primitive over Z
        and its lex-leading coefficient positive."""
        if not self.terms:
            return ZERO, Fraction(1)
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            if type(c) is Fraction:
                den = lcm(den, c.denominator)
        ints = {m: int(c * den) for m, c in self.terms.items()}
        g = 0
        for c in ints.values():
            g = gcd(g, c)
            if g == 1:
                break
        if ints[max(ints)] < 0:
            g = -g
        return Poly({m: c // g for m, c in ints.items()}), Fraction(g, den)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        from .text import format_poly

        return format_poly(self)


def _lift(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly.const(x)


def _lift_or_none(x) -> Poly | None:
    if isinstance(x, Poly):
        return x
    try:
        return Poly.const(x)
    except TypeError:
        return None


ZERO = Poly()
ONE = Poly({0: 1})
