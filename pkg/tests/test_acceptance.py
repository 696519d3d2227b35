"""End-to-end acceptance checks, one test per criterion, each recording a PASS/FAIL line."""

from __future__ import annotations

import io
import json
import time
from fractions import Fraction

from conftest import record

from pvilab.algebra import RatExpr, var
from pvilab.cli import run_command
from pvilab.fuchs import INFINITY, apparent_test, extract_e_theta_params, riemann_scheme
from pvilab.garnier_pvi import (
    PVIParams,
    PVIVariant,
    bracket_identity_check,
    bracket_terms_at,
    eq1,
    eq2,
    garnier_to_pvi_check,
    pencil_decompose,
    pvi_residual_on_curve,
    verify_garnier_on_curve,
)
from pvilab.periods import monodromy_suite, numeric_pf_residual, trace_invariance
from pvilab.picard_fuchs import (
    QuarticFamily,
    derive_pf_full,
    first_kind,
    lemma_coefficients,
    match_lemma,
    second_kind,
    solution_from_a0,
)

Q = Fraction
a = var("a")
T = a ** 3 * (2 - a) / (2 * a - 1)
LAM1 = a ** 2 * (2 - a) / (a ** 2 - a + 1)
LAM2 = a * (a - 2) * (2 * a ** 2 + a + 2) / (a ** 2 - 7 * a + 1)
GRID = [0.1 * k for k in range(1, 9)]


def _finish(n: int, ok: bool, start: float, budget: float | None = None) -> None:
    elapsed = time.perf_counter() - start
    ok = ok and (budget is None or elapsed < budget)
    record(n, ok)
    assert ok, f"criterion {n} failed (elapsed {elapsed:.1f} s)"


def test_criterion_01_pencil_exact():
    t0 = time.perf_counter()
    r0, r1 = pencil_decompose(pvi_residual_on_curve(eq1(), PVIParams.pencil(), PVIVariant.STANDARD))
    ok = r0 == RatExpr(0) and r1 == RatExpr(0)
    _finish(1, ok, t0, 60)


def test_criterion_02_second_solution_exact():
    t0 = time.perf_counter()
    res = pvi_residual_on_curve(eq2(), PVIParams.of(Q(1, 8), Q(1, 2), 0, 0))
    _finish(2, res.is_zero(), t0, 60)


def test_criterion_03_bracket_identity():
    t0 = time.perf_counter()
    terms = bracket_terms_at(eq1(), 3)
    ok = bracket_identity_check(eq1()).is_zero() and terms == (Q(49, 15), Q(-49, 40), Q(-49, 24)) and sum(terms) == 0
    _finish(3, ok, t0, 5)


def test_criterion_04_picard_fuchs_rederived():
    t0 = time.perf_counter()
    fam = QuarticFamily.generic()
    ok = True
    for kind, form in (("first", first_kind()), ("second", second_kind())):
        d = derive_pf_full(fam, form)
        c = match_lemma(d.ode, lemma_coefficients(kind))  # raises if not proportional
        ok = ok and d.rank == 2 and c.num.degree("s") == 0 and not c.is_zero()
    _finish(4, ok, t0, 300)


def test_criterion_05_root_identification():
    t0 = time.perf_counter()
    s1 = solution_from_a0(lemma_coefficients("first"))
    s2 = solution_from_a0(lemma_coefficients("second"))
    ok = (
        s1.lam == LAM1 and s1.t == T and s2.lam == LAM2 and s2.t == T
        and s1.at(3)[:2] == (Q(-9, 7), Q(-27, 5))
        and s2.at(3)[:2] == (Q(-69, 11), Q(-27, 5))
    )
    _finish(5, ok, t0)


def _table(ode) -> dict:
    return {str(e.location): e.exponent_set() for e in riemann_scheme(ode).entries}


def test_criterion_06_scheme_tables():
    t0 = time.perf_counter()
    x, y = lemma_coefficients("first"), lemma_coefficients("second")
    ok = _table(x) == {"0": (0, 0), "1": (0, 0), str(T): (0, 0), str(LAM1): (0, 2), "oo": (Q(1, 4), Q(3, 4))}
    ok = ok and _table(y) == {"0": (0, 1), "1": (0, 0), str(T): (0, 0), str(LAM2): (0, 2), "oo": (Q(-1, 4), Q(1, 4))}
    ok = ok and riemann_scheme(x).fuchs_sum() == 3 and riemann_scheme(y).fuchs_sum() == 3
    rx, ry = apparent_test(x, LAM1), apparent_test(y, LAM2)
    ok = ok and rx.apparent and rx.obstruction.is_zero() and ry.apparent and ry.obstruction.is_zero()
    r0 = apparent_test(y, 0)
    ok = ok and not r0.apparent and not r0.obstruction.is_zero()
    assert riemann_scheme(x).entries[-1].location is INFINITY
    _finish(6, ok, t0, 60)


def test_criterion_07_garnier_to_pvi():
    t0 = time.perf_counter()
    rep = garnier_to_pvi_check(seed=0, points=200, random_count=20)
    ok = rep.passed and len(rep.samples) == 22
    ok = ok and all(s.points >= 200 and s.points > s.degree_bound and s.all_equal for s in rep.samples)
    _finish(7, ok, t0, 300)


def test_criterion_08_garnier_on_curve():
    t0 = time.perf_counter()
    ok = True
    for kind in ("first", "second"):
        ode = lemma_coefficients(kind)
        p = extract_e_theta_params(ode)
        sol = solution_from_a0(ode).with_mu(p.mu)
        r1, r2 = verify_garnier_on_curve(sol, p.theta)
        ok = ok and r1.is_zero() and r2.is_zero()
    _finish(8, ok, t0)


def test_criterion_09_numerical_monodromy():
    t0 = time.perf_counter()
    su = monodromy_suite(3, "first")
    m = su.matrices
    ok = m["lam"].distance_to_identity() <= 1e-8
    for k in ("0", "1", "t"):
        ok = ok and abs(m[k].trace - 2) <= 1e-8 and abs(m[k].det - 1) <= 1e-8 and m[k].distance_to_identity() > 1e-2
    ok = ok and abs(m["oo"].trace) <= 1e-6 and su.product_defect <= 1e-6
    ok = ok and max(trace_invariance(Q(3), Q(5, 2)).values()) <= 1e-6
    _finish(9, ok, t0, 120)


def test_criterion_10_period_ode_consistency():
    t0 = time.perf_counter()
    good = [numeric_pf_residual(3, GRID, f).max_residual for f in ("first", "second")]
    bad = numeric_pf_residual(3, GRID, "first", ode=lemma_coefficients("second")).max_residual
    ok = max(good) <= 1e-6 and bad >= 1e3 * max(max(good), 1e-12) and bad >= 1e3 * 1e-6
    _finish(10, ok, t0, 120)


def test_criterion_11_variant_adjudication():
    t0 = time.perf_counter()
    buf = io.BytesIO()
    code = run_command(["verify-pvi", "--pencil", "--variant", "both"], buf)
    rep = json.loads(buf.getvalue())
    ok = (
        code == 0
        and rep["data"]["zero_variants"] == ["standard"]
        and rep["data"]["standard"]["zero"] is True
        and rep["data"]["printed"]["zero"] is False
        and rep["inputs"]["variant"] == "both"
    )
    _finish(11, ok, t0)
