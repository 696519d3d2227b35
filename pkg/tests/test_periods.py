from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from pvilab.periods import (
    CollidingBranchPoints,
    CyclePath,
    NumericConfig,
    _crosses,
    branch_points,
    complex_text,
    continuation_consistency,
    monodromy_matrix,
    monodromy_suite,
    numeric_pf_residual,
    parse_complex,
    period_integral,
    quartic_coeffs,
    tolerance_sweep,
    trace_invariance,
)
from pvilab.picard_fuchs import lemma_coefficients

GRID = [0.1 * k for k in range(1, 9)]


def _oracle_period(a: float, s: float, P) -> float:
    """2∫ P dξ/sqrt(s − Q) between the two real roots around ξ = 0, via QUADPACK's algebraic weight."""
    d = 2 * a - 1
    r0, r1, r2, r3 = sorted(np.roots([3 / d, -4 * (a + 1) / d, 6 * a / d, 0.0, -s]).real)

    def smooth(x):
        # s − Q = (3/d)(x − r0)(r1 − x)(x − r2)(x − r3)
        return P(x) / np.sqrt(3 / d * (x - r2) * (x - r3))

    val, _ = integrate.quad(smooth, r0, r1, weight="alg", wvar=(-0.5, -0.5), epsabs=1e-14, epsrel=1e-13)
    return 2 * val


def test_branch_points_at_three():
    roots = branch_points(3, 0.5)
    assert len(roots) == 4
    assert all(abs(z.imag) < 1e-12 for z in roots)
    bounds = [(-0.33, -0.32), (0.47, 0.48), (1.43, 1.44), (3.74, 3.75)]
    for z, (lo, hi) in zip(roots, bounds):
        assert lo < z.real < hi
    q = np.polynomial.Polynomial(quartic_coeffs(3))
    assert max(abs(q(z) - 0.5) for z in roots) < 1e-12


def test_branch_points_collide_at_critical_value():
    with pytest.raises(CollidingBranchPoints):
        branch_points(3, 0.0)


def test_first_kind_period_against_quadpack():
    got = period_integral(3, 0.5, "first")
    assert got.delta < 1e-10
    assert abs(got.value - _oracle_period(3.0, 0.5, lambda x: 1.0)) < 1e-9


def test_second_kind_period_against_quadpack():
    got = period_integral(3, 0.5, "second")
    oracle = _oracle_period(3.0, 0.5, lambda x: (3 * x - 8) * x)
    assert abs(got.value - oracle) < 1e-9


def test_reversed_cycle_negates():
    fwd = period_integral(3, 0.5, "first").value
    back = period_integral(3, 0.5, "first", CyclePath(0, 1).reversed()).value
    assert abs(fwd + back) < 1e-12


@pytest.mark.parametrize("bulge", [0.2, -0.3])
def test_bulge_deformation_invariance(bulge):
    straight = period_integral(3, 0.5, "first").value
    bent = period_integral(3, 0.5, "first", CyclePath(0, 1, bulge)).value
    assert abs(straight - bent) < 1e-10


def test_complex_parameter():
    r = period_integral(3, 0.5 + 0.2j, "first")
    assert r.delta < 1e-10 and abs(r.value) > 0


@pytest.mark.parametrize("form", ["first", "second"])
def test_pf_residual_small(form):
    res = numeric_pf_residual(3, GRID, form)
    assert len(res.per_point) == 8
    assert res.max_residual <= 1e-6


def test_pf_residual_negative_control():
    good = numeric_pf_residual(3, GRID, "first")
    bad = numeric_pf_residual(3, GRID, "first", ode=lemma_coefficients("second"))
    assert bad.max_residual >= 1e3 * max(good.max_residual, 1e-12)


def test_only_double_precision():
    with pytest.raises(ValueError):
        NumericConfig(precision_bits=113)


@pytest.fixture(scope="module")
def suite_first():
    return monodromy_suite(3, "first")


def test_monodromy_apparent_point(suite_first):
    assert suite_first.matrices["lam"].distance_to_identity() <= 1e-8


def test_monodromy_unipotent_points(suite_first):
    for k in ("0", "1", "t"):
        m = suite_first.matrices[k]
        assert abs(m.trace - 2) <= 1e-8 and abs(m.det - 1) <= 1e-8
        assert m.distance_to_identity() > 0.1


def test_monodromy_infinity(suite_first):
    assert abs(suite_first.matrices["oo"].trace) <= 1e-6
    assert suite_first.product_defect <= 1e-6
    assert suite_first.passed


def test_monodromy_suite_second():
    assert monodromy_suite(3, "second").passed


def test_second_equation_zero_loop_is_unipotent_not_identity():
    m = monodromy_matrix(lemma_coefficients("second"), 3, "0")
    assert abs(m.trace - 2) < 1e-8 and m.distance_to_identity() > 0.1


def test_traces_isomonodromic():
    diffs = trace_invariance(Fraction(3), Fraction(5, 2))
    assert max(diffs.values()) <= 1e-6


def test_complex_text_round_trip():
    for z in (0.5 + 0j, -1.25 - 3.5j, complex(1 / 3, 2 / 7)):
        assert parse_complex(complex_text(z)) == z
    assert complex_text(0.1) == "0.10000000000000001+0i"


def _halvings(start: float, n: int) -> list[float]:
    return [start / 2 ** k for k in range(n)]


@pytest.mark.xfail(strict=True, reason="adaptive step control makes individual defects non-monotone in rtol")
def test_tolerance_monotonicity_strict():
    sweep = tolerance_sweep(3, "first", _halvings(1e-6, 8))
    for prev, cur in zip(sweep, sweep[1:]):
        for name, val in cur.items():
            assert val <= prev[name], name


def test_tolerance_tightening_reduces_worst_defect():
    coarse, fine = tolerance_sweep(3, "first", (1e-6, 1e-9))
    assert max(fine.values()) < max(coarse.values()) / 10


def test_crossing_detector():
    # w moves from below to above the fixed segment [0, 1]
    assert _crosses(0, 1, 0.5 - 0.1j, 0, 1, 0.5 + 0.1j)
    # passing beyond the end of the segment is not a crossing
    assert not _crosses(0, 1, 1.5 - 0.1j, 0, 1, 1.5 + 0.1j)
    assert not _crosses(0, 1, 0.5 + 0.2j, 0, 1, 0.5 + 0.1j)


@pytest.fixture(scope="module")
def transport_first():
    return continuation_consistency(3, "first", cycles=((0, 1), (1, 2)))


def test_transported_periods_match_ode_monodromy(transport_first):
    checked = [c for c in transport_first if not c.skipped]
    assert {c.around for c in checked} == {"0", "1", "t", "lam", "oo"}
    for c in checked:
        assert c.error <= 1e-8, (c.around, c.cycle, c.error)
    # not vacuous: some loops change the period by O(1)
    assert max(abs(c.transported - c.start) for c in checked) > 1.0


def test_transport_skips_swept_segments(transport_first):
    skipped = [c for c in transport_first if c.skipped]
    assert skipped and all("crosses" in c.skipped for c in skipped)


def test_transport_negative_control():
    # the t-loop matrix does not describe transport around infinity
    from pvilab.periods import labelled_points, loop_geometry, loop_pieces, period_derivatives, transport_period

    ode = lemma_coefficients("first")
    pts = labelled_points(ode, 3)
    geom = loop_geometry(pts)
    start, end = transport_period(3, "first", loop_pieces(geom, "oo"), CyclePath(0, 1))
    r = 0.25 * min(abs(geom.base - p) for p in pts.values())
    x, dx, _ = period_derivatives(3, geom.base, "first", r, CyclePath(0, 1))
    wrong = (monodromy_matrix(ode, 3, "t").matrix @ np.array([x, dx]))[0]
    assert abs(end - wrong) > 1e-3
