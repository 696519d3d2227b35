"""Periods of the quartic family η² = s − Q(ξ; a) and their Picard-Fuchs equations.

Forms P(ξ) dξ / η^(2m+1) are reduced modulo exact forms to the basis
dξ/η, ξ dξ/η, ξ² dξ/η over Q(a, s).  Every reduction keeps a certificate:
a list of exact forms d(G η^(1−2m)) whose sum accounts for the difference
between the input and its reduced class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .algebra import RatExpr, lift, parse_expr, var
from .algebra.univariate import (
    NotSplit,
    add_u,
    coefficients,
    derivative,
    divmod_u,
    from_coefficients,
    horner,
    linear_factor_roots,
    mul_u,
    partial_fractions,
    sub_u,
    trim,
    xgcd_u,
)
from .fuchs import INFINITY, LinearODE2, singular_points
from .garnier_pvi import AlgebraicSolution

XI = "xi"


class DegenerateFamily(ValueError):
    pass


class ThirdOrderOnly(ArithmeticError):
    """The three reduced vectors are independent: the period satisfies an
    order-three equation but no second-order one."""


class LemmaMismatch(ValueError):
    pass


class AmbiguousRoots(ValueError):
    pass


def _scale(p: Sequence[RatExpr], c) -> list[RatExpr]:
    return trim([x * c for x in p])


@dataclass(frozen=True)
class QuarticFamily:
    """Q(ξ; a) = (3ξ⁴ − 4(a+1)ξ³ + 6aξ²)/(2a − 1); fibre η² = s − Q."""

    a: RatExpr

    @classmethod
    def generic(cls) -> "QuarticFamily":
        return cls(var("a"))

    @classmethod
    def at(cls, a) -> "QuarticFamily":
        return cls(lift(a))

    def __post_init__(self):
        object.__setattr__(self, "a", lift(self.a))
        if (2 * self.a - 1).is_zero():
            raise DegenerateFamily("2a - 1 = 0")

    @cached_property
    def Q(self) -> list[RatExpr]:
        a = self.a
        d = 2 * a - 1
        return [RatExpr(0), RatExpr(0), 6 * a / d, -4 * (a + 1) / d, 3 / d]

    @cached_property
    def dQ(self) -> list[RatExpr]:
        return derivative(self.Q)

    @cached_property
    def F(self) -> list[RatExpr]:
        """s − Q as a polynomial in ξ."""
        F = [-c for c in self.Q]
        F[0] = F[0] + var("s")
        return F

    @cached_property
    def bezout(self) -> tuple[list[RatExpr], list[RatExpr]]:
        """U, V with U F + V Q' = 1 over Q(a, s)."""
        g, u, v = xgcd_u(self.F, self.dQ)
        if len(g) != 1:
            raise DegenerateFamily("s - Q is not squarefree")
        return u, v

    def Q_expr(self) -> RatExpr:
        return from_coefficients(self.Q, XI)


@dataclass(frozen=True)
class FormSpec:
    """P(ξ) dξ / η^(2m+1)."""

    P: tuple[RatExpr, ...]
    m: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("level m must be nonnegative")
        object.__setattr__(self, "P", tuple(trim([lift(c) for c in self.P])))

    @classmethod
    def of(cls, P, m: int = 0) -> "FormSpec":
        """P given as an expression in xi (RatExpr or text)."""
        return cls(tuple(coefficients(lift(P), XI)), m)

    def d_ds(self) -> "FormSpec":
        """∂/∂s of P/η^(2m+1) is −(2m+1)/2 · P/η^(2m+3)."""
        c = Fraction(-(2 * self.m + 1), 2)
        return FormSpec(tuple(x * c for x in self.P), self.m + 1)


def first_kind() -> FormSpec:
    return FormSpec.of(1)


def second_kind(printed: bool = False) -> FormSpec:
    """(3ξ − 2(a+1))ξ dξ/η; the ``printed`` variant is (3ξ² − 2(a+1))ξ dξ/η."""
    xi, a = var(XI), var("a")
    if printed:
        return FormSpec.of((3 * xi ** 2 - 2 * (a + 1)) * xi)
    return FormSpec.of((3 * xi - 2 * (a + 1)) * xi)


FORMS = {"first": first_kind, "second": second_kind}


@dataclass(frozen=True)
class ReducedVector:
    coords: tuple[RatExpr, RatExpr, RatExpr]
    certificate: tuple[tuple[tuple[RatExpr, ...], int], ...]  # (G, m): d(G η^(1−2m))

    def __add__(self, other: "ReducedVector") -> "ReducedVector":
        return ReducedVector(
            tuple(x + y for x, y in zip(self.coords, other.coords)),
            self.certificate + other.certificate,
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)


def exact_numerator(fam: QuarticFamily, G: Sequence[RatExpr], m: int) -> list[RatExpr]:
    """Numerator N of d(G η^(1−2m)) = N dξ / η^(2m+1)."""
    return add_u(mul_u(derivative(list(G)), fam.F), _scale(mul_u(list(G), fam.dQ), Fraction(2 * m - 1, 2)))


def reduce_form(fam: QuarticFamily, form: FormSpec, strategy: str = "remainder") -> ReducedVector:
    """Class of the form in the basis dξ/η, ξdξ/η, ξ²dξ/η.

    ``strategy`` selects how each level step splits P = A F + B Q':
    "remainder" keeps A reduced modulo Q', "direct" uses A = P U, B = P V.
    """
    if strategy not in ("remainder", "direct"):
        raise ValueError(f"unknown strategy {strategy!r}")
    P = list(form.P)
    m = form.m
    cert: list[tuple[tuple[RatExpr, ...], int]] = []
    if m > 0:
        U, V = fam.bezout
    while m > 0:
        if not P:
            break
        PU = mul_u(P, U)
        if strategy == "remainder":
            q, A = divmod_u(PU, fam.dQ)
            B = add_u(mul_u(q, fam.F), mul_u(P, V))
        else:
            A, B = PU, mul_u(P, V)
        c = Fraction(2, 2 * m - 1)
        G = _scale(B, c)
        cert.append((tuple(G), m))
        P = sub_u(A, _scale(derivative(B), c))
        m -= 1
    while len(P) > 3:
        d = len(P) - 1
        k = d - 3
        ex = exact_numerator(fam, [RatExpr(0)] * k + [RatExpr(1)], 0)
        c = P[-1] / ex[-1]
        cert.append((tuple([RatExpr(0)] * k + [c]), 0))
        P = sub_u(P, _scale(ex, c))
    P = list(P) + [RatExpr(0)] * (3 - len(P))
    return ReducedVector(tuple(P[:3]), tuple(cert))


def certificate_holds(fam: QuarticFamily, form: FormSpec, vec: ReducedVector) -> bool:
    """Check input = basis combination + Σ exact forms, at a common η-level."""
    M = max([form.m] + [m for _, m in vec.certificate])

    def lift_to(N: Sequence[RatExpr], m: int) -> list[RatExpr]:
        out = list(N)
        for _ in range(M - m):
            out = mul_u(out, fam.F)
        return trim(out)

    rhs = lift_to(list(vec.coords), 0)
    for G, m in vec.certificate:
        rhs = add_u(rhs, lift_to(exact_numerator(fam, G, m), m))
    return trim(lift_to(list(form.P), form.m)) == trim(rhs)


# -- linear algebra over Q(a, s) -----------------------------------------------

def _kernel_3x3(cols: Sequence[Sequence[RatExpr]]) -> tuple[int, list[RatExpr] | None]:
    """Rank of the 3×3 matrix with the given columns and, for rank 2, a kernel vector."""
    A = [[cols[j][i] for j in range(3)] for i in range(3)]
    pivots: list[int] = []
    row = 0
    for col in range(3):
        piv = next((r for r in range(row, 3) if not A[r][col].is_zero()), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        inv = A[row][col].inverse()
        A[row] = [x * inv for x in A[row]]
        for r in range(3):
            if r != row and not A[r][col].is_zero():
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[row])]
        pivots.append(col)
        row += 1
    rank = len(pivots)
    if rank != 2:
        return rank, None
    free = next(c for c in range(3) if c not in pivots)
    vec = [RatExpr(0)] * 3
    vec[free] = RatExpr(1)
    for r, pc in enumerate(pivots):
        vec[pc] = -A[r][free]
    return rank, vec


@dataclass(frozen=True)
class PFDerivation:
    ode: LinearODE2
    rank: int
    vectors: tuple[ReducedVector, ReducedVector, ReducedVector]


def derive_pf_full(fam: QuarticFamily, form: FormSpec, strategy: str = "remainder") -> PFDerivation:
    forms = [form, form.d_ds(), form.d_ds().d_ds()]
    vecs = [reduce_form(fam, f, strategy) for f in forms]
    rank, kernel = _kernel_3x3([v.coords for v in vecs])
    if rank == 3:
        raise ThirdOrderOnly(
            "the form and its first two s-derivatives are independent in cohomology; "
            "its periods satisfy an order-three equation only"
        )
    if kernel is None:
        raise ArithmeticError(f"unexpected rank {rank} of the reduced vectors")
    c0, c1, c2 = kernel
    ode = LinearODE2.from_rational(c2, c1, c0)
    return PFDerivation(ode, rank, tuple(vecs))


def derive_pf(fam: QuarticFamily, form: FormSpec, strategy: str = "remainder") -> LinearODE2:
    return derive_pf_full(fam, form, strategy).ode


# -- the reference equations ------------------------------------------------

LEMMA_TEXT = {
    "first": (
        "s*(s-1)*((2*a-1)*s+a^3*(a-2))*((a^2-a+1)*s+a^2*(a-2))",
        "2*(2*a-1)*(a^2-a+1)*s^3+(a^6-3*a^5+9*a^4-19*a^3+9*a^2-3*a+1)*s^2"
        "+2*a^2*(a-2)*(a^4-2*a^3-2*a+1)*s-a^5*(a-2)^2",
        "(2*a-1)*(27*(a^2-a+1)*s^2-(a-2)*(2*a^4-a^3-60*a^2-a+2)*s"
        "+a^2*(a-2)^2*(10*a^2+11*a+10))/144",
    ),
    "second": (
        "s*(s-1)*((2*a-1)*s+a^3*(a-2))*((a^2-7*a+1)*s-a*(a-2)*(2*a^2+a+2))",
        "(2*a-1)*s*((a^2-7*a+1)*s^2-2*a*(a-2)*(2*a^2+a+2)*s-a*(a-2)^2*(a^4+a^3+a^2+a+1))",
        "-(2*a-1)*(9*(a^2-7*a+1)*s^2-(a-2)*(10*a^4+31*a^3-12*a^2+31*a+10)*s"
        "-a*(a-2)^2*(2*a^2+a+2)^2)/144",
    ),
}


def lemma_coefficients(kind: str) -> LinearODE2:
    """The hard-coded reference equations for the first- and second-kind periods."""
    if kind not in LEMMA_TEXT:
        raise ValueError(f"kind must be 'first' or 'second', not {kind!r}")
    return LinearODE2(*(parse_expr(x).as_poly() for x in LEMMA_TEXT[kind]))


def match_lemma(derived: LinearODE2, reference: LinearODE2) -> RatExpr:
    """c(a) with derived = c · reference componentwise."""
    c = RatExpr(derived.a0) / RatExpr(reference.a0)
    if c.num.degree("s") > 0 or c.den.degree("s") > 0:
        raise LemmaMismatch(f"leading coefficients are not proportional over Q(a): ratio {c}")
    for i, (d, p) in enumerate(zip(derived.coefficients(), reference.coefficients())):
        if RatExpr(d) != c * RatExpr(p):
            raise LemmaMismatch(f"coefficient a{i} differs: {d} vs {c} * ({p})")
    return c


# -- roots, critical values, Wronskian ----------------------------------------------

def critical_values(fam: QuarticFamily) -> list[RatExpr]:
    """Values of Q at the roots of Q'; exactly three distinct ones for good a."""
    roots = linear_factor_roots(from_coefficients(fam.dQ, XI), XI)
    if len(roots) != 3 or any(m != 1 for _, m in roots):
        raise DegenerateFamily(f"critical points are not three distinct simple roots: {roots}")
    vals = [horner(fam.Q, r) for r, _ in roots]
    if len(set(vals)) != 3:
        raise DegenerateFamily("critical values collide")
    return vals


def critical_points(fam: QuarticFamily) -> list[RatExpr]:
    return [r for r, _ in linear_factor_roots(from_coefficients(fam.dQ, XI), XI)]


@dataclass(frozen=True)
class WronskianReport:
    residues: tuple[tuple[RatExpr, RatExpr], ...]  # (pole, residue) at 0, 1, t, λ
    polynomial_part: RatExpr
    apparent_root: RatExpr
    passed: bool
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "residues": [[str(p), str(r)] for p, r in self.residues],
            "polynomial_part": str(self.polynomial_part),
            "apparent_root": str(self.apparent_root),
            "pass": self.passed,
            "reason": self.reason,
        }


def _split_roots(ode: LinearODE2, fam: QuarticFamily) -> tuple[RatExpr, RatExpr]:
    finite = [p for p in singular_points(ode) if p is not INFINITY]
    rest = [p for p in finite if p not in (RatExpr(0), RatExpr(1))]
    if len(finite) != 4 or len(rest) != 2:
        raise AmbiguousRoots(f"expected roots 0, 1 and two more, found {[str(p) for p in finite]}")
    crit = set(critical_values(fam))
    hits = [p for p in rest if p in crit]
    if len(hits) != 1:
        raise AmbiguousRoots(f"{len(hits)} of the movable roots are critical values")
    t = hits[0]
    lam = rest[0] if rest[1] == t else rest[1]
    return t, lam


def wronskian_form_check(ode: LinearODE2, fam: QuarticFamily | None = None) -> WronskianReport:
    """Certify a1/a0 = Σ r_i/(s − p_i) − 1/(s − λ) with r_i ∈ {0, 1} at 0, 1, t.

    Then W = exp(−∫a1/a0) = (s − λ)/(s^r0 (s−1)^r1 (s−t)^rt): the Wronskian
    numerator has degree one in s with root the apparent point.
    """
    fam = fam or QuarticFamily.generic()
    t, lam = _split_roots(ode, fam)
    poles = [RatExpr(0), RatExpr(1), t, lam]
    pf = partial_fractions(ode.p1(), poles)
    res = tuple(pf.terms)
    ok = pf.polynomial.is_zero()
    reason = "" if ok else f"polynomial part {pf.polynomial}"
    for p, r in res[:3]:
        if r not in (RatExpr(0), RatExpr(1)):
            ok = False
            reason = reason or f"residue {r} at {p} is not 0 or 1"
    if res[3][1] != RatExpr(-1):
        ok = False
        reason = reason or f"residue {res[3][1]} at the apparent root is not -1"
    return WronskianReport(res, pf.polynomial, lam, ok, reason)


def solution_from_a0(ode: LinearODE2, fam: QuarticFamily | None = None, name: str = "from_a0") -> AlgebraicSolution:
    """t = the movable root of a0 that is a critical value, λ = the other one."""
    fam = fam or QuarticFamily.generic()
    t, lam = _split_roots(ode, fam)
    return AlgebraicSolution(name, lam, t)


__all__ = [
    "QuarticFamily",
    "FormSpec",
    "ReducedVector",
    "first_kind",
    "second_kind",
    "reduce_form",
    "certificate_holds",
    "derive_pf",
    "derive_pf_full",
    "lemma_coefficients",
    "match_lemma",
    "critical_values",
    "critical_points",
    "wronskian_form_check",
    "solution_from_a0",
    "ThirdOrderOnly",
    "LemmaMismatch",
    "DegenerateFamily",
    "AmbiguousRoots",
    "NotSplit",
]
