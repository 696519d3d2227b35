"""Exponent data θ and the Garnier Hamiltonian of the five-point Fuchs equation.

The local exponents at 0, 1, t are {0, θ0}, {0, θ1}, {0, θt}; at the
apparent point λ they are {0, 2}; at ∞ they are {α∞, α∞ + θ∞}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import RatExpr, lift, var


def _q(x) -> Fraction:
    if isinstance(x, RatExpr):
        return x.as_fraction()
    if isinstance(x, str):
        from .algebra import parse_rational

        return parse_rational(x)
    return Fraction(x)


@dataclass(frozen=True)
class Theta:
    th0: Fraction
    th1: Fraction
    tht: Fraction
    thinf: Fraction

    def __post_init__(self):
        for name in ("th0", "th1", "tht", "thinf"):
            object.__setattr__(self, name, _q(getattr(self, name)))

    @classmethod
    def of(cls, *values) -> "Theta":
        if len(values) == 1:
            values = tuple(values[0])
        return cls(*values)

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.th0, self.th1, self.tht, self.thinf)

    def k(self) -> Fraction:
        return k_constant(self)

    def alpha_inf(self) -> Fraction:
        """Smaller exponent at infinity, from 2α∞ + θ0 + θ1 + θt + θ∞ = 1."""
        return (1 - self.th0 - self.th1 - self.tht - self.thinf) / 2

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.as_tuple()) + ")"


def k_constant(theta: Theta) -> Fraction:
    """k = ((θ0 + θ1 + θt − 1)² − θ∞²) / 4."""
    s = theta.th0 + theta.th1 + theta.tht - 1
    return (s * s - theta.thinf ** 2) / 4


def hamiltonian_K(theta: Theta) -> RatExpr:
    """Garnier Hamiltonian K(λ, μ, t) as a rational expression in lam, mu, t.

    K = [λ(λ−1)(λ−t)μ² − {θ0(λ−1)(λ−t) + θ1λ(λ−t) + (θt−1)λ(λ−1)}μ + kλ] / (t(t−1))
    """
    lam, mu, t = var("lam"), var("mu"), var("t")
    k = k_constant(theta)
    inner = (
        theta.th0 * (lam - 1) * (lam - t)
        + theta.th1 * lam * (lam - t)
        + (theta.tht - 1) * lam * (lam - 1)
    )
    return (lam * (lam - 1) * (lam - t) * mu ** 2 - inner * mu + k * lam) / (t * (t - 1))


def accessory_parameter(theta: Theta, lam, mu, t) -> RatExpr:
    """Accessory parameter for which λ is an apparent singularity.

    Equals K(λ, μ, t) − k/(t − 1); the shift depends on t alone, so both
    generate the same Hamiltonian flow.
    """
    lam, mu, t = lift(lam), lift(mu), lift(t)
    K = hamiltonian_K(theta).substitute({"lam": lam, "mu": mu, "t": t})
    return K - theta.k() / (t - 1)
