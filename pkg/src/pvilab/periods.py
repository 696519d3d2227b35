"""Floating-point periods of η² = s − Q(ξ; a) and monodromy of second-order equations.

Conventions used throughout:

* Branch points are sorted by (real part, imaginary part).
* A cycle around branch points i, j has value 2 ∫ P dξ/η along a path from
  root i to root j; η is fixed at the path midpoint by the principal square
  root and continued along the path from there.
* Monodromy loops start at the base point b = −iR on the negative imaginary
  axis.  A loop is "go straight to a small circle around p, run it
  counterclockwise, come back".  Composition: the matrix of γ1 followed by
  γ2 is M2·M1.  Loops are ordered by increasing arg(p − b); with M_∞ taken
  along the clockwise circle |s| = R, M_∞·M_pn···M_p1 = I.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import solve_ivp

from .fuchs import LinearODE2
from .picard_fuchs import FORMS, lemma_coefficients, solution_from_a0


class CollidingBranchPoints(ValueError):
    pass


class RootFindingError(ArithmeticError):
    pass


class QuadratureDisagreement(ArithmeticError):
    def __init__(self, first: complex, second: complex, delta: float):
        super().__init__(f"quadrature schemes disagree: {first!r} vs {second!r} (delta {delta:.3e})")
        self.values = (first, second)
        self.delta = delta


class RootPairingAmbiguity(ArithmeticError):
    pass


class ContinuationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class NumericConfig:
    precision_bits: int = 53
    quad_tol: float = 1e-12
    ode_rtol: float = 1e-12
    ode_atol: float = 1e-14
    report_tol: float = 1e-8
    radius_fraction: float = 0.25
    cauchy_nodes: int = 32

    def __post_init__(self):
        if self.precision_bits != 53:
            raise ValueError("only double precision (53 bits) is available")
        for name in ("quad_tol", "ode_rtol", "ode_atol", "report_tol", "radius_fraction"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def to_dict(self) -> dict:
        return {
            "precision_bits": self.precision_bits,
            "quad_tol": self.quad_tol,
            "ode_rtol": self.ode_rtol,
            "ode_atol": self.ode_atol,
            "report_tol": self.report_tol,
            "radius_fraction": self.radius_fraction,
            "cauchy_nodes": self.cauchy_nodes,
        }


DEFAULT = NumericConfig()


# -- the quartic ----------------------------------------------------------------

def quartic_coeffs(a) -> np.ndarray:
    """Coefficients of Q(ξ; a), lowest degree first."""
    a = float(a)
    d = 2 * a - 1
    return np.array([0.0, 0.0, 6 * a / d, -4 * (a + 1) / d, 3 / d])


def form_coeffs(a, form: str) -> np.ndarray:
    """Numerator P(ξ) of the named form at a, lowest degree first."""
    if form not in FORMS:
        raise ValueError(f"form must be one of {sorted(FORMS)}")
    spec = FORMS[form]()
    vals = [float(c.evaluate({"a": Fraction(a)})) for c in spec.P]
    return np.array(vals or [0.0])


def _sort_key(z: complex) -> tuple[float, float]:
    return (round(z.real, 9), round(z.imag, 9))


def branch_points(a, s: complex, tol: float = 1e-12) -> list[complex]:
    """The four roots of Q(ξ; a) = s, sorted by real then imaginary part."""
    q = quartic_coeffs(a).astype(complex)
    q[0] -= s
    poly = Polynomial(q)
    dpoly = poly.deriv()
    roots = np.roots(q[::-1])
    trace = []
    out = []
    for r in roots:
        for it in range(8):
            f = poly(r)
            df = dpoly(r)
            if df == 0:
                break
            step = f / df
            r = r - step
            trace.append((it, complex(r), abs(f)))
            if abs(step) <= 1e-17 * max(1.0, abs(r)):
                break
        out.append(complex(r))
    scale = max(1.0, abs(s))
    for r in out:
        if abs(poly(r)) > tol * scale * 10:
            raise RootFindingError(f"root {r} has residual {abs(poly(r)):.3e}; trace {trace[-8:]}")
    dmin = min(abs(x - y) for i, x in enumerate(out) for y in out[i + 1:])
    if dmin < 1e-7 * max(1.0, max(abs(x) for x in out)):
        raise CollidingBranchPoints(f"branch points collide at s = {s} (separation {dmin:.3e})")
    return sorted(out, key=_sort_key)


# -- segment integrals ----------------------------------------------------------------

@dataclass(frozen=True)
class CyclePath:
    """Path between branch points i and j (indices into the sorted roots).

    ``bulge`` bends the straight segment into the parabola
    ξ(u) = ξi + u(ξj − ξi) + i·bulge·u(1 − u)(ξj − ξi).
    """

    i: int
    j: int
    bulge: float = 0.0

    def reversed(self) -> "CyclePath":
        return CyclePath(self.j, self.i, -self.bulge)


class _Segment:
    """η along ξ(u) written as sqrt(u(1−u))·ρ(u) with ρ smooth and nonvanishing."""

    def __init__(self, a, s: complex, z0: complex, z1: complex, P: np.ndarray, bulge: float, eta_ref: complex | None):
        d = z1 - z0
        self.xi = Polynomial([z0, d + 1j * bulge * d, -1j * bulge * d])
        self.dxi = self.xi.deriv()
        Qc = Polynomial(quartic_coeffs(a).astype(complex))
        D = Polynomial([complex(s)]) - Qc(self.xi)
        # deflate the roots at u = 0 and u = 1
        c = D.coef
        if abs(c[0]) > 1e-8 * max(1.0, np.max(np.abs(c))):
            raise ValueError("path start is not a branch point")
        R, rem = divmod(Polynomial(c[1:]), Polynomial([1.0, -1.0]))
        if abs(rem.coef[0]) > 1e-8 * max(1.0, np.max(np.abs(c))):
            raise ValueError("path end is not a branch point")
        self.R = R
        self.P = Polynomial(P.astype(complex))
        eta_mid = cmath.sqrt(complex(D(0.5)))
        if eta_ref is not None and abs(eta_mid + eta_ref) < abs(eta_mid - eta_ref):
            eta_mid = -eta_mid
        self.eta_mid = eta_mid
        self.rho_mid = 2 * eta_mid  # sqrt(u(1-u)) = 1/2 at the midpoint

    def rho(self, us: np.ndarray) -> np.ndarray:
        """Continuous branch of sqrt(R) on the nodes, continued from u = 1/2."""
        us = np.asarray(us, dtype=float)
        order = np.argsort(us)
        su = us[order]
        out = np.empty(len(su), dtype=complex)
        k = int(np.searchsorted(su, 0.5))
        # walk right then left from the midpoint
        prev_u, prev = 0.5, self.rho_mid
        for idx in range(k, len(su)):
            prev = self._step(prev_u, prev, su[idx])
            prev_u = su[idx]
            out[idx] = prev
        prev_u, prev = 0.5, self.rho_mid
        for idx in range(k - 1, -1, -1):
            prev = self._step(prev_u, prev, su[idx])
            prev_u = su[idx]
            out[idx] = prev
        res = np.empty_like(out)
        res[order] = out
        return res

    def _step(self, u0: float, r0: complex, u1: float, depth: int = 0) -> complex:
        R0, R1 = r0 * r0, complex(self.R(u1))
        if depth < 40 and abs(cmath.phase(R1 / R0)) >= math.pi / 2:
            um = 0.5 * (u0 + u1)
            rm = self._step(u0, r0, um, depth + 1)
            return self._step(um, rm, u1, depth + 1)
        r1 = cmath.sqrt(R1)
        return r1 if abs(r1 - r0) <= abs(r1 + r0) else -r1

    def integrand_phi(self, phi: np.ndarray) -> np.ndarray:
        """∫ P ξ' du/(sqrt(u(1−u)) ρ) after u = (1 − cos φ)/2: P ξ'/ρ dφ."""
        u = (1 - np.cos(phi)) / 2
        x = self.xi(u)
        return self.P(x) * self.dxi(u) / self.rho(u)


def _gauss_legendre(seg: _Segment, tol: float) -> complex:
    n, prev = 32, None
    while n <= 4096:
        x, w = np.polynomial.legendre.leggauss(n)
        phi = (x + 1) * (math.pi / 2)
        val = complex(np.sum(w * seg.integrand_phi(phi)) * (math.pi / 2))
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val
        prev, n = val, 2 * n
    return prev


def _tanh_sinh(seg: _Segment, tol: float) -> complex:
    """Double-exponential rule on u ∈ (0, 1) applied to the raw 1/sqrt endpoint form."""
    tmax = 4.5
    prev = None
    h = 0.5
    for _ in range(9):
        t = np.arange(-tmax, tmax + h / 2, h)
        g = math.pi * np.sinh(t)
        u = 1.0 / (1.0 + np.exp(-g))
        v = 1.0 / (1.0 + np.exp(g))  # 1 − u without cancellation
        keep = (u > 0) & (v > 0)
        t, u, v = t[keep], u[keep], v[keep]
        wgt = math.pi * np.cosh(t) * np.sqrt(u * v)
        x = seg.xi(u)
        f = seg.P(x) * seg.dxi(u) / seg.rho(u)
        val = complex(h * np.sum(wgt * f))
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val
        prev, h = val, h / 2
    return prev


@dataclass(frozen=True)
class PeriodResult:
    value: complex
    gauss: complex
    double_exponential: complex
    delta: float
    eta_mid: complex
    roots: tuple[complex, ...]


def segment_integral(
    a,
    s: complex,
    z0: complex,
    z1: complex,
    P: np.ndarray,
    bulge: float = 0.0,
    cfg: NumericConfig = DEFAULT,
    eta_ref: complex | None = None,
    check: bool = True,
) -> tuple[complex, complex, complex, complex]:
    """(gauss, double-exponential or nan, delta, η at the midpoint)."""
    seg = _Segment(a, s, z0, z1, P, bulge, eta_ref)
    g = _gauss_legendre(seg, cfg.quad_tol)
    if not check:
        return g, complex("nan"), 0.0, seg.eta_mid
    de = _tanh_sinh(seg, cfg.quad_tol)
    return g, de, abs(g - de), seg.eta_mid


def period_integral(a, s: complex, form: str, cycle: CyclePath = CyclePath(0, 1), cfg: NumericConfig = DEFAULT) -> PeriodResult:
    """2 × the integral of P dξ/η from branch point i to branch point j."""
    roots = branch_points(a, s)
    P = form_coeffs(a, form)
    g, de, delta, eta = segment_integral(a, s, roots[cycle.i], roots[cycle.j], P, cycle.bulge, cfg)
    scale = max(1.0, abs(g))
    if delta > max(cfg.quad_tol * 100, 1e-10) * scale:
        raise QuadratureDisagreement(2 * g, 2 * de, 2 * delta)
    return PeriodResult(2 * g, 2 * g, 2 * de, 2 * delta, eta, tuple(roots))


# -- Cauchy-circle derivatives and the Picard-Fuchs residual -----------------------------

def _match_roots(old: Sequence[complex], new: Sequence[complex]) -> list[complex]:
    out = []
    used = set()
    for z in old:
        d = sorted((abs(z - w), k) for k, w in enumerate(new))
        (d1, k1), (d2, _) = d[0], d[1]
        if k1 in used or d1 > 0.5 * d2:
            raise RootPairingAmbiguity(
                "branch points cannot be matched unambiguously along the circle; use a smaller radius"
            )
        used.add(k1)
        out.append(new[k1])
    return out


def period_derivatives(
    a, s0: complex, form: str, radius: float, cycle: CyclePath = CyclePath(0, 1), cfg: NumericConfig = DEFAULT
) -> tuple[complex, complex, complex]:
    """x, x', x'' at s0 from periods on the circle |s − s0| = radius."""
    N = cfg.cauchy_nodes
    sub = 4
    P = form_coeffs(a, form)
    roots0 = branch_points(a, s0)
    ends = [roots0[cycle.i], roots0[cycle.j]]
    tracked = list(roots0)
    vals = np.empty(N, dtype=complex)
    eta_ref = None
    s_prev = s0
    for k in range(N):
        sk = s0 + radius * cmath.exp(2j * math.pi * k / N)
        # walk from the previous point in small steps, tracking every root
        path = [s_prev + (sk - s_prev) * (q + 1) / sub for q in range(sub)] if k else [
            s0 + radius * (q + 1) / sub for q in range(sub)
        ]
        for sp in path:
            tracked = _match_roots(tracked, branch_points(a, sp))
        s_prev = sk
        z0, z1 = tracked[cycle.i], tracked[cycle.j]
        g, _, _, eta = segment_integral(a, sk, z0, z1, P, cycle.bulge, cfg, eta_ref, check=False)
        eta_ref = eta
        vals[k] = 2 * g
    # close the circle and back to the centre: the roots must return home
    back = [s_prev + (s0 + radius - s_prev) * (q + 1) / sub for q in range(sub)]
    back += [s0 + radius * (sub - q - 1) / sub for q in range(sub)]
    for sp in back[:-1]:
        tracked = _match_roots(tracked, branch_points(a, sp))
    tracked = _match_roots(tracked, roots0)
    if [tracked[cycle.i], tracked[cycle.j]] != ends:
        raise RootPairingAmbiguity("branch points are permuted after one turn; use a smaller radius")
    theta = 2 * math.pi * np.arange(N) / N
    out = []
    for n in range(3):
        c = np.mean(vals * np.exp(-1j * n * theta)) / radius ** n
        out.append(complex(c * math.factorial(n)))
    return tuple(out)


def _numeric_coeffs(ode: LinearODE2, a) -> list[np.ndarray]:
    spec = ode.specialize(a=Fraction(a))
    arrs = []
    for p in spec.coefficients():
        cs = p.coeff_list("s")
        arrs.append(np.array([float(c.constant_value()) if c.terms else 0.0 for c in cs], dtype=complex))
    return arrs


def _singular_values(ode: LinearODE2, a) -> list[complex]:
    return [complex(x) for x in Polynomial(_numeric_coeffs(ode, a)[0]).roots()]


@dataclass(frozen=True)
class PFResidual:
    max_residual: float
    per_point: tuple[float, ...]
    grid: tuple[complex, ...]


def numeric_pf_residual(
    a,
    grid: Sequence[complex],
    form: str,
    cfg: NumericConfig = DEFAULT,
    ode: LinearODE2 | None = None,
    cycle: CyclePath = CyclePath(0, 1),
) -> PFResidual:
    """max over the grid of |a0 x'' + a1 x' + a2 x| / (|a0 x''| + |a1 x'| + |a2 x| + ε)."""
    ode = ode if ode is not None else lemma_coefficients(form)
    A = [Polynomial(c) for c in _numeric_coeffs(ode, a)]
    sing = _singular_values(ode, a)
    res = []
    for s0 in grid:
        s0 = complex(s0)
        dist = min(abs(s0 - p) for p in sing)
        r = cfg.radius_fraction * dist
        x, dx, ddx = period_derivatives(a, s0, form, r, cycle, cfg)
        terms = (A[0](s0) * ddx, A[1](s0) * dx, A[2](s0) * x)
        num = abs(sum(terms))
        den = sum(abs(t) for t in terms) + 1e-300
        res.append(float(num / den))
    return PFResidual(max(res), tuple(res), tuple(complex(g) for g in grid))


# -- monodromy --------------------------------------------------------------------

Piece = tuple  # ("line", z0, z1) or ("arc", centre, radius, phi0, phi1)


@dataclass(frozen=True)
class MonodromyMatrix:
    matrix: np.ndarray
    base: complex
    around: str
    location: complex | None

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    def distance_to_identity(self) -> float:
        return float(np.max(np.abs(self.matrix - np.eye(2))))

    def to_dict(self) -> dict:
        return {
            "around": self.around,
            "location": None if self.location is None else self.location,
            "base": self.base,
            "matrix": [[complex(x) for x in row] for row in self.matrix],
            "trace": self.trace,
            "det": self.det,
            "distance_to_identity": self.distance_to_identity(),
        }


def _piece_point(piece: Piece, tau: float) -> tuple[complex, complex]:
    """Point and derivative of a path piece at τ ∈ [0, 1]."""
    if piece[0] == "line":
        _, z0, z1 = piece
        return z0 + tau * (z1 - z0), z1 - z0
    _, c, r, p0, p1 = piece
    ang = p0 + tau * (p1 - p0)
    z = c + r * cmath.exp(1j * ang)
    return z, 1j * r * cmath.exp(1j * ang) * (p1 - p0)


def _continue(coeffs: Sequence[Polynomial], pieces: Sequence[Piece], cfg: NumericConfig) -> np.ndarray:
    """Fundamental matrix continued along the path, starting from the identity."""
    a0, a1, a2 = coeffs
    Y = np.eye(2, dtype=complex).reshape(-1)

    for piece in pieces:

        def rhs(tau, y, piece=piece):
            z, dz = _piece_point(piece, tau)
            c0, c1, c2 = a0(z), a1(z), a2(z)
            y = y.reshape(2, 2)
            out = np.empty((2, 2), dtype=complex)
            out[0] = y[1]
            out[1] = -(c1 * y[1] + c2 * y[0]) / c0
            return (out * dz).reshape(-1)

        sol = solve_ivp(rhs, (0.0, 1.0), Y, method="DOP853", rtol=cfg.ode_rtol, atol=cfg.ode_atol)
        if not sol.success:
            raise ContinuationError(f"integration failed on {piece[0]} piece: {sol.message}")
        Y = sol.y[:, -1]
    return Y.reshape(2, 2)


@dataclass(frozen=True)
class LoopGeometry:
    base: complex
    R: float
    points: dict  # label -> complex location

    def order(self) -> list[str]:
        """Finite labels by increasing arg(p − b)."""
        return sorted(self.points, key=lambda k: cmath.phase(self.points[k] - self.base))


def loop_geometry(points: dict) -> LoopGeometry:
    R = 2 * max(abs(p) for p in points.values()) + 2
    return LoopGeometry(-1j * R, R, dict(points))


def loop_pieces(geom: LoopGeometry, around: str, cfg: NumericConfig = DEFAULT) -> list[Piece]:
    b = geom.base
    if around == "oo":
        # clockwise circle |s| = R starting and ending at b = −iR
        return [("arc", 0j, geom.R, -math.pi / 2, -math.pi / 2 - 2 * math.pi)]
    if around == "none":
        r = geom.R / 4
        return [("arc", b - 1j * r, r, math.pi / 2, math.pi / 2 + 2 * math.pi)]
    if around not in geom.points:
        raise KeyError(f"unknown loop label {around!r}")
    p = geom.points[around]
    others = [abs(p - q) for k, q in geom.points.items() if k != around]
    r = cfg.radius_fraction * min(others)
    direction = (b - p) / abs(b - p)
    entry = p + r * direction
    phi = cmath.phase(direction)
    return [
        ("line", b, entry),
        ("arc", p, r, phi, phi + 2 * math.pi),
        ("line", entry, b),
    ]


@lru_cache(maxsize=8)
def _labelled_exact(kind: str):
    ode = lemma_coefficients(kind)
    sol = solution_from_a0(ode)
    return ode, sol


def labelled_points(ode: LinearODE2, a) -> dict:
    """{"0", "1", "t", "lam"} -> numeric location at a."""
    sol = solution_from_a0(ode)
    lam, t, _ = sol.at(a)
    return {"0": 0j, "1": 1 + 0j, "t": complex(float(t)), "lam": complex(float(lam))}


def monodromy_matrix(
    ode: LinearODE2, a, around: str, cfg: NumericConfig = DEFAULT, points: dict | None = None
) -> MonodromyMatrix:
    points = points if points is not None else labelled_points(ode, a)
    geom = loop_geometry(points)
    coeffs = [Polynomial(c) for c in _numeric_coeffs(ode, a)]
    M = _continue(coeffs, loop_pieces(geom, around, cfg), cfg)
    return MonodromyMatrix(M, geom.base, around, points.get(around))


@dataclass
class SuiteCheck:
    name: str
    expected: str
    got: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "expected": self.expected, "got": self.got, "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class MonodromySuite:
    a: Fraction
    kind: str
    matrices: dict
    order: list[str]
    product_defect: float
    checks: list[SuiteCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "kind": self.kind,
            "convention": "M(g1 then g2) = M2*M1; base -iR; relation M_oo*M_pn*...*M_p1 = I with p1..pn by increasing arg(p - b)",
            "order": self.order,
            "matrices": {k: m.to_dict() for k, m in self.matrices.items()},
            "product_defect": self.product_defect,
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
        }


def _check(name: str, expected: str, got: float, tol: float, ok: bool | None = None) -> SuiteCheck:
    return SuiteCheck(name, expected, float(got), tol, bool(got <= tol) if ok is None else ok)


def monodromy_suite(a, kind: str = "first", cfg: NumericConfig = DEFAULT, tol: float | None = None) -> MonodromySuite:
    """Loops around 0, 1, t, λ, ∞ and an empty loop, with the expected invariants."""
    tol = cfg.report_tol if tol is None else tol
    a = Fraction(a)
    ode, _ = _labelled_exact(kind)
    points = labelled_points(ode, a)
    geom = loop_geometry(points)
    labels = ["0", "1", "t", "lam", "oo", "none"]
    mats = {k: monodromy_matrix(ode, a, k, cfg, points) for k in labels}
    order = geom.order()
    prod = mats["oo"].matrix
    for k in reversed(order):
        prod = prod @ mats[k].matrix
    defect = float(np.max(np.abs(prod - np.eye(2))))
    checks = [
        _check("none-loop identity", "||M - I|| = 0", mats["none"].distance_to_identity(), tol),
        _check("lam-loop identity (apparent point)", "||M - I|| = 0", mats["lam"].distance_to_identity(), tol),
    ]
    for k in ("0", "1", "t"):
        m = mats[k]
        checks.append(_check(f"{k}-loop trace", "trace = 2", abs(m.trace - 2), tol))
        checks.append(_check(f"{k}-loop nontrivial", "||M - I|| >= 0.1", m.distance_to_identity(), 0.1,
                             m.distance_to_identity() >= 0.1))
    # exponents at infinity differ by 1/2, so the eigenvalues there are ±i
    checks.append(_check("oo-loop trace", "trace = 0", abs(mats["oo"].trace), max(tol, 1e-6)))
    for k in labels:
        checks.append(_check(f"{k}-loop det", "det = 1", abs(mats[k].det - 1), max(tol, 1e-6)))
    checks.append(_check("product relation", "M_oo*...*M_p1 = I", defect, max(tol, 1e-6)))
    return MonodromySuite(a, kind, mats, order, defect, checks)


def trace_invariance(a1, a2, kind: str = "first", cfg: NumericConfig = DEFAULT) -> dict:
    """|trace M_p(a1) − trace M_p(a2)| for p in 0, 1, t, ∞."""
    ode, _ = _labelled_exact(kind)
    out = {}
    for k in ("0", "1", "t", "oo"):
        t1 = monodromy_matrix(ode, a1, k, cfg).trace
        t2 = monodromy_matrix(ode, a2, k, cfg).trace
        out[k] = abs(t1 - t2)
    return out


def tolerance_sweep(a, kind: str = "first", rtols: Sequence[float] = (1e-6, 5e-7, 2.5e-7, 1.25e-7)) -> list[dict]:
    """Suite defects (every check except the nontriviality ones) for each continuation tolerance."""
    out = []
    for rt in rtols:
        cfg = NumericConfig(ode_rtol=rt, ode_atol=rt * 1e-2)
        su = monodromy_suite(a, kind, cfg)
        out.append({c.name: c.got for c in su.checks if "nontrivial" not in c.name})
    return out


# -- periods transported around loops ---------------------------------------------------

class PathSwept(ContinuationError):
    """A branch point crossed the straight integration segment during transport."""


def _crosses(p0: complex, q0: complex, w0: complex, p1: complex, q1: complex, w1: complex) -> bool:
    """Did w cross the moving segment [p, q] between two consecutive steps?"""

    def side(p, q, w):
        return ((q - p).conjugate() * (w - p)).imag

    s0, s1 = side(p0, q0, w0), side(p1, q1, w1)
    if s0 * s1 > 0:
        return False
    # crossing parameter along the segment, taken at the step where the side flips
    for p, q, w in ((p0, q0, w0), (p1, q1, w1)):
        d = q - p
        t = ((w - p) * d.conjugate()).real / abs(d) ** 2
        if 0.0 <= t <= 1.0:
            return True
    return False


def transport_period(
    a, form: str, pieces: Sequence[Piece], cycle: CyclePath = CyclePath(0, 1), steps: int = 400,
    cfg: NumericConfig = DEFAULT,
) -> tuple[complex, complex]:
    """Period at the start of the path and its continuation to the end.

    The cycle stays the straight segment between the two tracked branch
    points, with η fixed by continuity at the segment midpoint. This is a
    valid continuation only while no other branch point crosses the
    segment; such a crossing raises PathSwept.
    """
    Qc = Polynomial(quartic_coeffs(a).astype(complex))
    P = form_coeffs(a, form)
    i, j = cycle.i, cycle.j
    s = _piece_point(pieces[0], 0.0)[0]
    tracked = branch_points(a, s)
    g0, _, _, eta = segment_integral(a, s, tracked[i], tracked[j], P, 0.0, cfg, check=False)
    for piece in pieces:
        for k in range(1, steps + 1):
            sn = _piece_point(piece, k / steps)[0]
            new = _match_roots(tracked, branch_points(a, sn))
            for m in range(4):
                if m not in (i, j) and _crosses(tracked[i], tracked[j], tracked[m], new[i], new[j], new[m]):
                    raise PathSwept(f"branch point {m} crosses the segment ({i}, {j}) near s = {complex_text(sn)}")
            e = cmath.sqrt(sn - Qc(0.5 * (new[i] + new[j])))
            eta = e if abs(e - eta) <= abs(e + eta) else -e
            tracked, s = new, sn
    g1, _, _, _ = segment_integral(a, s, tracked[i], tracked[j], P, 0.0, cfg, eta_ref=eta, check=False)
    return 2 * g0, 2 * g1


@dataclass(frozen=True)
class TransportCheck:
    around: str
    cycle: tuple[int, int]
    start: complex
    transported: complex | None
    predicted: complex | None
    skipped: str = ""

    @property
    def error(self) -> float | None:
        if self.transported is None:
            return None
        return abs(self.transported - self.predicted)

    def to_dict(self) -> dict:
        return {
            "around": self.around,
            "cycle": list(self.cycle),
            "start": self.start,
            "transported": self.transported,
            "predicted": self.predicted,
            "error": self.error,
            "skipped": self.skipped,
        }


def continuation_consistency(
    a, kind: str = "first", labels: Sequence[str] = ("0", "1", "t", "lam", "oo"),
    cycles: Sequence[tuple[int, int]] = ((0, 1), (1, 2), (2, 3), (0, 2)), cfg: NumericConfig = DEFAULT,
) -> list[TransportCheck]:
    """Quadrature-transported periods against the ODE monodromy acting on (x, x').

    Two independent routes: the period integral followed continuously in s,
    and monodromy_matrix applied to the period's initial data at the base.
    Pairs whose straight segment gets swept are reported as skipped.
    """
    a = Fraction(a)
    ode = lemma_coefficients(kind)
    points = labelled_points(ode, a)
    geom = loop_geometry(points)
    b = geom.base
    sing = [complex(p) for p in points.values()]
    radius = cfg.radius_fraction * min(abs(b - p) for p in sing)
    out = []
    for i, j in cycles:
        x, dx, _ = period_derivatives(a, b, kind, radius, CyclePath(i, j), cfg)
        for lab in labels:
            try:
                start, end = transport_period(a, kind, loop_pieces(geom, lab, cfg), CyclePath(i, j), cfg=cfg)
            except PathSwept as exc:
                out.append(TransportCheck(lab, (i, j), x, None, None, str(exc)))
                continue
            M = monodromy_matrix(ode, a, lab, cfg, points).matrix
            predicted = complex((M @ np.array([x, dx]))[0])
            out.append(TransportCheck(lab, (i, j), start, end, predicted))
    return out


def complex_text(z: complex) -> str:
    """'re+imi' with 17 significant digits."""
    z = complex(z)
    re, im = f"{z.real:.17g}", f"{abs(z.imag):.17g}"
    sign = "-" if (z.imag < 0 or (z.imag == 0 and math.copysign(1, z.imag) < 0)) else "+"
    return f"{re}{sign}{im}i"


def parse_complex(text: str) -> complex:
    t = text.strip().replace("−", "-").replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    return complex(t)
