"""Painlevé VI on parameterized curves, the Garnier Hamiltonian flow and the α↔θ map."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Poly, RatExpr, format_rational, lift, var
from .algebra.univariate import _rational_roots
from .hamiltonian import Theta, hamiltonian_K, k_constant

__all__ = [
    "PVIParams",
    "AlgebraicSolution",
    "PVIVariant",
    "eq1",
    "eq2",
    "pvi_rhs",
    "pvi_residual_on_curve",
    "pencil_decompose",
    "bracket_identity",
    "bracket_identity_check",
    "bracket_terms_at",
    "alpha_from_theta",
    "hamiltonian_K",
    "k_constant",
    "garnier_second_derivative",
    "garnier_to_pvi_check",
    "verify_garnier_on_curve",
    "degenerate_factors",
    "is_degenerate",
]

SIGMA = "sigma"


class NotAffine(ValueError):
    pass


class MissingMomentum(ValueError):
    pass


class DegenerateCurve(ValueError):
    pass


class PVIVariant(enum.Enum):
    STANDARD = "standard"  # prefactor λ(λ−1)(λ−t)/(t²(t−1)²)
    PRINTED = "printed"  # prefactor λ(λ−1)(λ−t)/(t²(t²−1))

    def denominator(self, t: RatExpr) -> RatExpr:
        if self is PVIVariant.STANDARD:
            return t * t * (t - 1) * (t - 1)
        return t * t * (t * t - 1)


Affine = tuple[Fraction, Fraction]  # constant + σ·coefficient


def _affine(x) -> Affine:
    if isinstance(x, tuple):
        return (Fraction(x[0]), Fraction(x[1]))
    return (Fraction(x), Fraction(0))


@dataclass(frozen=True)
class PVIParams:
    """(α0, α1, α2, α3), each affine in the pencil parameter σ."""

    alphas: tuple[Affine, Affine, Affine, Affine]

    def __post_init__(self):
        if len(self.alphas) != 4:
            raise ValueError("four parameters required")
        object.__setattr__(self, "alphas", tuple(_affine(x) for x in self.alphas))

    @classmethod
    def of(cls, *values) -> "PVIParams":
        if len(values) == 1:
            values = tuple(values[0])
        return cls(tuple(values))

    @classmethod
    def pencil(cls) -> "PVIParams":
        e = Fraction(1, 8)
        return cls(((e, 0), (0, e), (0, e), (0, e)))

    @classmethod
    def from_classical(cls, alpha, beta, gamma, delta) -> "PVIParams":
        a, b, g, d = (_affine(x) for x in (alpha, beta, gamma, delta))
        return cls((a, (-b[0], -b[1]), g, (Fraction(1, 2) - d[0], -d[1])))

    def classical(self) -> tuple[Affine, Affine, Affine, Affine]:
        """(α, β, γ, δ) = (α0, −α1, α2, ½ − α3)."""
        a0, a1, a2, a3 = self.alphas
        return (a0, (-a1[0], -a1[1]), a2, (Fraction(1, 2) - a3[0], -a3[1]))

    def at(self, sigma) -> "PVIParams":
        sigma = Fraction(sigma)
        return PVIParams(tuple((c + sigma * d, Fraction(0)) for c, d in self.alphas))

    def is_constant(self) -> bool:
        return all(d == 0 for _, d in self.alphas)

    def as_ratexprs(self) -> tuple[RatExpr, ...]:
        sig = var(SIGMA)
        return tuple(c + d * sig for c, d in self.alphas)

    def __str__(self) -> str:
        def one(x: Affine) -> str:
            c, d = x
            if d == 0:
                return format_rational(c)
            ds = f"{format_rational(d)}*sigma"
            return ds if c == 0 else f"{format_rational(c)} + {ds}"

        return "(" + ", ".join(one(x) for x in self.alphas) + ")"


@dataclass(frozen=True)
class AlgebraicSolution:
    name: str
    lam: RatExpr
    t: RatExpr
    mu: RatExpr | None = None
    param: str = "a"

    def __post_init__(self):
        if self.t.diff(self.param).is_zero():
            raise DegenerateCurve(f"dt/d{self.param} vanishes identically for {self.name}")

    def with_mu(self, mu) -> "AlgebraicSolution":
        return AlgebraicSolution(self.name, self.lam, self.t, lift(mu), self.param)

    def d_dt(self, f: RatExpr) -> RatExpr:
        """Derivative along the curve: (df/da)/(dt/da)."""
        return f.diff(self.param) / self.t.diff(self.param)

    def at(self, a) -> tuple:
        b = {self.param: Fraction(a)}
        return tuple(None if x is None else x.evaluate(b) for x in (self.lam, self.t, self.mu))

    def reparametrize(self, p, q, r, w) -> "AlgebraicSolution":
        """Compose with the Möbius map a ↦ (p a + q)/(r a + w)."""
        if Fraction(p) * w - Fraction(q) * r == 0:
            raise ValueError("degenerate Möbius map")
        a = var(self.param)
        m = {self.param: (a * p + q) / (a * r + w)}
        mu = None if self.mu is None else self.mu.substitute(m)
        return AlgebraicSolution(self.name + "∘mobius", self.lam.substitute(m), self.t.substitute(m), mu, self.param)


def eq1() -> AlgebraicSolution:
    a = var("a")
    return AlgebraicSolution("eq1", a ** 2 * (2 - a) / (a ** 2 - a + 1), a ** 3 * (2 - a) / (2 * a - 1))


def eq2() -> AlgebraicSolution:
    a = var("a")
    return AlgebraicSolution(
        "eq2",
        a * (a - 2) * (2 * a ** 2 + a + 2) / (a ** 2 - 7 * a + 1),
        a ** 3 * (2 - a) / (2 * a - 1),
    )


SOLUTIONS = {"eq1": eq1, "eq2": eq2}


# -- the equation --------------------------------------------------------------

def bracket(params: PVIParams, lam: RatExpr, t: RatExpr) -> RatExpr:
    """α0 − α1 t/λ² + α2 (t−1)/(λ−1)² + (½ − α3) t(t−1)/(λ−t)²."""
    a0, a1, a2, a3 = params.as_ratexprs()
    return (
        a0
        - a1 * t / lam ** 2
        + a2 * (t - 1) / (lam - 1) ** 2
        + (Fraction(1, 2) - a3) * t * (t - 1) / (lam - t) ** 2
    )


def pvi_rhs(params: PVIParams, lam, dlam, t, variant: PVIVariant = PVIVariant.STANDARD) -> RatExpr:
    """Right-hand side of P_VI for λ'' given λ, λ', t."""
    lam, dlam, t = lift(lam), lift(dlam), lift(t)
    first = (1 / lam + 1 / (lam - 1) + 1 / (lam - t)) * dlam ** 2 / 2
    second = (1 / t + 1 / (t - 1) + 1 / (lam - t)) * dlam
    pref = lam * (lam - 1) * (lam - t) / variant.denominator(t)
    return first - second + pref * bracket(params, lam, t)


def pvi_residual_on_curve(
    sol: AlgebraicSolution, params: PVIParams, variant: PVIVariant = PVIVariant.STANDARD
) -> RatExpr:
    """λ_tt − RHS(λ, λ_t, t) along the curve, exact in Q(a, σ)."""
    lt = sol.d_dt(sol.lam)
    ltt = sol.d_dt(lt)
    return ltt - pvi_rhs(params, sol.lam, lt, sol.t, variant)


def pencil_decompose(residual: RatExpr) -> tuple[RatExpr, RatExpr]:
    """Split an affine-in-σ residual as R0 + σ R1."""
    if residual.den.degree(SIGMA) > 0:
        raise NotAffine(f"denominator depends on {SIGMA}")
    cs = residual.num.coeffs_in(SIGMA)
    if any(k > 1 for k in cs):
        raise NotAffine(f"residual has degree {max(cs)} in {SIGMA}")
    zero = Poly({})
    r0 = RatExpr(cs.get(0, zero), residual.den)
    r1 = RatExpr(cs.get(1, zero), residual.den)
    return r0, r1


def bracket_identity(lam, t) -> RatExpr:
    """−t/λ² + (t−1)/(λ−1)² − t(t−1)/(λ−t)²."""
    lam, t = lift(lam), lift(t)
    return -t / lam ** 2 + (t - 1) / (lam - 1) ** 2 - t * (t - 1) / (lam - t) ** 2


def bracket_identity_check(sol: AlgebraicSolution) -> RatExpr:
    return bracket_identity(sol.lam, sol.t)


def bracket_terms_at(sol: AlgebraicSolution, a) -> tuple[Fraction, Fraction, Fraction]:
    """The three summands of the bracket identity at a rational a."""
    lam, t, _ = sol.at(a)
    lam, t = Fraction(lam), Fraction(t)
    return (-t / lam ** 2, (t - 1) / (lam - 1) ** 2, -t * (t - 1) / (lam - t) ** 2)


def sigma_part_prefactor(sol: AlgebraicSolution, variant: PVIVariant = PVIVariant.STANDARD) -> RatExpr:
    """Factor f with R1 = f · bracket_identity for the pencil parameters."""
    lam, t = sol.lam, sol.t
    return -lam * (lam - 1) * (lam - t) / variant.denominator(t) / 8


# -- θ ↔ α -----------------------------------------------------------------------

def alpha_from_theta(theta: Theta) -> PVIParams:
    """α = (½θ∞², ½θ0², ½θ1², ½θt²)."""
    th0, th1, tht, thinf = theta.as_tuple()
    return PVIParams.of(thinf ** 2 / 2, th0 ** 2 / 2, th1 ** 2 / 2, tht ** 2 / 2)


# -- Garnier → P_VI ------------------------------------------------------------------

def _mu_from_velocity(theta: Theta) -> RatExpr:
    """Solve v = ∂K/∂μ for μ; result in (lam, v, t)."""
    lam, v, t = var("lam"), var("v"), var("t")
    inner = (
        theta.th0 * (lam - 1) * (lam - t)
        + theta.th1 * lam * (lam - t)
        + (theta.tht - 1) * lam * (lam - 1)
    )
    return (v * t * (t - 1) + inner) / (2 * lam * (lam - 1) * (lam - t))


def garnier_second_derivative(theta: Theta) -> RatExpr:
    """λ'' along the Hamiltonian flow, expressed in (lam, v = λ', t)."""
    K = hamiltonian_K(theta)
    Km = K.diff("mu")
    lpp = Km.diff("t") + Km.diff("lam") * Km + Km.diff("mu") * (-K.diff("lam"))
    return lpp.substitute({"mu": _mu_from_velocity(theta)})


def _total_degree_bound(x: RatExpr, y: RatExpr) -> int:
    """Degree bound for the numerator of x − y."""
    dn = max(x.num.total_degree() + y.den.total_degree(), y.num.total_degree() + x.den.total_degree())
    return dn


@dataclass(frozen=True)
class GarnierSample:
    theta: Theta
    points: int
    degree_bound: int
    all_equal: bool
    symbolic_equal: bool
    witness: tuple | None = None

    @property
    def conclusive(self) -> bool:
        return self.points > self.degree_bound

    def to_dict(self) -> dict:
        return {
            "theta": [format_rational(x) for x in self.theta.as_tuple()],
            "points": self.points,
            "degree_bound": self.degree_bound,
            "all_equal": self.all_equal,
            "symbolic_equal": self.symbolic_equal,
            "witness": None if self.witness is None else [format_rational(x) for x in self.witness],
        }


@dataclass(frozen=True)
class GarnierReport:
    seed: int
    samples: tuple[GarnierSample, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(s.all_equal and s.conclusive for s in self.samples)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "pass": self.passed, "samples": [s.to_dict() for s in self.samples]}


REFERENCE_THETAS = (Theta(0, 0, 0, Fraction(1, 2)), Theta(1, 0, 0, Fraction(-1, 2)))


def _rand_q(rng: random.Random, num: int = 40, den: int = 12) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_thetas(count: int, seed: int) -> list[Theta]:
    rng = random.Random(seed)
    return [Theta(*(Fraction(rng.randint(-12, 12), rng.randint(1, 6)) for _ in range(4))) for _ in range(count)]


def compare_garnier_pvi(theta: Theta, points: int, rng: random.Random) -> GarnierSample:
    """Compare both sides at rational points on a random line in (λ, λ', t)-space.

    Restricted to the line, the numerator of the difference is a univariate
    polynomial of degree at most the total-degree bound, so more zero samples
    than that bound prove the identity along the line.
    """
    lhs = garnier_second_derivative(theta)
    rhs = pvi_rhs(alpha_from_theta(theta), var("lam"), var("v"), var("t"))
    bound = _total_degree_bound(lhs, rhs)
    base = [_rand_q(rng) for _ in range(3)]
    direction = [_rand_q(rng) or Fraction(1) for _ in range(3)]
    done, tries = 0, 0
    witness = None
    seen = set()
    while done < points:
        tries += 1
        if tries > 20 * points:
            raise RuntimeError("could not find enough nondegenerate sample points")
        tau = _rand_q(rng, 10 ** 6, 997)
        if tau in seen:
            continue
        seen.add(tau)
        pt = {k: b + tau * d for k, b, d in zip(("lam", "v", "t"), base, direction)}
        try:
            l_val = lhs.evaluate(pt)
            r_val = rhs.evaluate(pt)
        except ZeroDivisionError:
            continue
        done += 1
        if l_val != r_val and witness is None:
            witness = (pt["lam"], pt["v"], pt["t"])
    return GarnierSample(theta, done, bound, witness is None, lhs == rhs, witness)


def garnier_to_pvi_check(
    thetas: Sequence[Theta] | None = None,
    seed: int = 0,
    points: int = 200,
    random_count: int = 20,
) -> GarnierReport:
    """Sampled exact check that the Garnier flow yields P_VI at α(θ)."""
    if thetas is None:
        thetas = list(REFERENCE_THETAS) + random_thetas(random_count, seed)
    rng = random.Random(seed + 1)
    samples = tuple(compare_garnier_pvi(th, points, rng) for th in thetas)
    return GarnierReport(seed, samples)


def garnier_sides_at(theta: Theta, lam, dlam, t) -> tuple[Fraction, Fraction]:
    """Both sides of the Garnier→P_VI identity at one rational point."""
    pt = {"lam": Fraction(lam), "v": Fraction(dlam), "t": Fraction(t)}
    lhs = garnier_second_derivative(theta).evaluate(pt)
    rhs = pvi_rhs(alpha_from_theta(theta), var("lam"), var("v"), var("t")).evaluate(pt)
    return Fraction(lhs), Fraction(rhs)


# -- Garnier system on a curve ---------------------------------------------------

def verify_garnier_on_curve(sol: AlgebraicSolution, theta: Theta) -> tuple[RatExpr, RatExpr]:
    """(λ_t − ∂K/∂μ, μ_t + ∂K/∂λ) along the curve."""
    if sol.mu is None:
        raise MissingMomentum(f"solution {sol.name} carries no mu(a)")
    K = hamiltonian_K(theta)
    bind = {"lam": sol.lam, "mu": sol.mu, "t": sol.t}
    r1 = sol.d_dt(sol.lam) - K.diff("mu").substitute(bind)
    r2 = sol.d_dt(sol.mu) + K.diff("lam").substitute(bind)
    return r1, r2


# -- degenerate parameter values -------------------------------------------------

def degenerate_factors(sol: AlgebraicSolution) -> list[Poly]:
    """Polynomials in a whose roots must be excluded.

    Denominators of λ, t, dt/da, plus the numerators of the collisions
    λ ∈ {0, 1, t} and t ∈ {0, 1}.
    """
    dt = sol.t.diff(sol.param)
    out: list[Poly] = []
    for x in (sol.lam, sol.t, dt):
        out.append(x.den)
    for x in (sol.lam, sol.lam - 1, sol.lam - sol.t, sol.t, sol.t - 1, dt):
        out.append(x.num)
    uniq: list[Poly] = []
    for p in out:
        if not p.is_constant() and p not in uniq:
            uniq.append(p)
    return uniq


def degenerate_rational_values(sol: AlgebraicSolution) -> list[Fraction]:
    vals: set[Fraction] = set()
    for p in degenerate_factors(sol):
        ints, _ = p.to_integral()
        cs = [int(c.constant_value()) if c.terms else 0 for c in ints.coeff_list(sol.param)]
        vals.update(_rational_roots(cs))
    return sorted(vals)


def is_degenerate(sol: AlgebraicSolution, a) -> bool:
    a = Fraction(a)
    return any(p.evaluate({sol.param: a}) == 0 for p in degenerate_factors(sol))
