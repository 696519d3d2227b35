from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from pvilab.algebra import Poly, RatExpr, var
from pvilab.algebra.univariate import linear_factor_roots
from pvilab.fuchs import LinearODE2
from pvilab.picard_fuchs import (
    AmbiguousRoots,
    DegenerateFamily,
    FormSpec,
    LemmaMismatch,
    QuarticFamily,
    ThirdOrderOnly,
    certificate_holds,
    critical_values,
    derive_pf,
    derive_pf_full,
    exact_numerator,
    first_kind,
    lemma_coefficients,
    match_lemma,
    reduce_form,
    second_kind,
    solution_from_a0,
    wronskian_form_check,
)

Q = Fraction
a, s, xi = var("a"), var("s"), var("xi")
T = a ** 3 * (2 - a) / (2 * a - 1)
LAM1 = a ** 2 * (2 - a) / (a ** 2 - a + 1)
LAM2 = a * (a - 2) * (2 * a ** 2 + a + 2) / (a ** 2 - 7 * a + 1)


@pytest.fixture(scope="module")
def fam():
    return QuarticFamily.generic()


def test_critical_values(fam):
    assert set(critical_values(fam)) == {RatExpr(0), RatExpr(1), T}
    assert set(critical_values(QuarticFamily.at(3))) == {RatExpr(0), RatExpr(1), RatExpr(Q(-27, 5))}


def test_critical_values_sympy():
    X, A = sp.symbols("xi a")
    Qs = (3 * X ** 4 - 4 * (A + 1) * X ** 3 + 6 * A * X ** 2) / (2 * A - 1)
    vals = {sp.cancel(Qs.subs(X, r)) for r in sp.solve(sp.diff(Qs, X), X)}
    assert vals == {0, 1, sp.cancel(A ** 3 * (2 - A) / (2 * A - 1))}


def test_degenerate_family():
    with pytest.raises(DegenerateFamily):
        QuarticFamily.at(Q(1, 2))
    with pytest.raises(DegenerateFamily):
        critical_values(QuarticFamily.at(1))


def test_reduce_exact_forms(fam):
    dQ = FormSpec(tuple(fam.dQ), 1)
    assert reduce_form(fam, dQ).is_zero()
    for m in (0, 1, 2, 3):
        G = (xi ** 2 + a * xi - 1)
        N = exact_numerator(fam, [c for c in FormSpec.of(G).P], m)
        vec = reduce_form(fam, FormSpec(tuple(N), m))
        assert vec.is_zero()


def test_reduce_basis_element(fam):
    vec = reduce_form(fam, first_kind())
    assert vec.coords == (RatExpr(1), RatExpr(0), RatExpr(0))
    assert vec.certificate == ()


def test_reduce_high_degree(fam):
    form = FormSpec.of(xi ** 4)
    vec = reduce_form(fam, form)
    assert not vec.coords[2].is_zero()
    assert vec.certificate
    assert certificate_holds(fam, form, vec)


def test_reduction_linear(fam):
    f, g = FormSpec.of(xi ** 5 + 1, 1), FormSpec.of(3 * xi ** 2 - a, 1)
    fg = FormSpec.of(xi ** 5 + 1 + 3 * xi ** 2 - a, 1)
    assert reduce_form(fam, fg).coords == (reduce_form(fam, f) + reduce_form(fam, g)).coords


def test_level_consistency(fam):
    # P/η^(2m+1) equals P·F/η^(2m+3)
    P = xi ** 3 - 2 * xi + a
    low = reduce_form(fam, FormSpec.of(P, 1))
    F = RatExpr(0)
    for i, c in enumerate(fam.F):
        F = F + c * xi ** i
    high = reduce_form(fam, FormSpec.of(P * F, 2))
    assert low.coords == high.coords


def test_strategies_agree(fam):
    for form in (first_kind().d_ds().d_ds(), second_kind().d_ds(), FormSpec.of(xi ** 6, 2)):
        v1 = reduce_form(fam, form, "remainder")
        v2 = reduce_form(fam, form, "direct")
        assert v1.coords == v2.coords
        assert certificate_holds(fam, form, v1) and certificate_holds(fam, form, v2)


def test_unknown_strategy(fam):
    with pytest.raises(ValueError):
        reduce_form(fam, first_kind(), "magic")


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=7), st.integers(0, 2))
def test_certificates_always_hold(coeffs, m):
    fam = QuarticFamily.at(3)
    form = FormSpec(tuple(RatExpr(c) for c in coeffs), m)
    assert certificate_holds(fam, form, reduce_form(fam, form))


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.integers(0, 2))
def test_exact_forms_reduce_to_zero(coeffs, m):
    fam = QuarticFamily.at(3)
    N = exact_numerator(fam, [RatExpr(c) for c in coeffs], m)
    assert reduce_form(fam, FormSpec(tuple(N), m)).is_zero()


@pytest.mark.parametrize("kind", ["first", "second"])
def test_derive_matches_lemma(fam, kind):
    form = first_kind() if kind == "first" else second_kind()
    d = derive_pf_full(fam, form)
    assert d.rank == 2
    assert match_lemma(d.ode, lemma_coefficients(kind)) == 144


def test_printed_second_kind_is_third_order(fam):
    with pytest.raises(ThirdOrderOnly):
        derive_pf(fam, second_kind(printed=True))


def test_match_lemma_mismatch():
    with pytest.raises(LemmaMismatch):
        match_lemma(lemma_coefficients("first"), lemma_coefficients("second"))
    assert match_lemma(lemma_coefficients("second"), lemma_coefficients("second")) == 1


def _sympy_exactness(kind: str, a_value: int, ode_kind: str | None = None) -> bool:
    """Oracle: L(P/η) = d/dξ (G/η³) for a polynomial G, solved by sympy."""
    X, S = sp.symbols("xi s")
    A = sp.Integer(a_value)
    Qs = (3 * X ** 4 - 4 * (A + 1) * X ** 3 + 6 * A * X ** 2) / (2 * A - 1)
    F = S - Qs
    P = 1 if kind == "first" else (3 * X - 2 * (A + 1)) * X
    ode = lemma_coefficients(ode_kind or kind)
    c0, c1, c2 = (
        sp.sympify(str(RatExpr(c).substitute({"a": a_value})).replace("^", "**"), locals={"s": S})
        for c in (ode.a0, ode.a1, ode.a2)
    )
    # ∂s F^(-1/2) = -1/2 F^(-3/2), ∂s² = 3/4 F^(-5/2); everything times F^(5/2)
    N = sp.expand(P * (sp.Rational(3, 4) * c0 - sp.Rational(1, 2) * c1 * F + c2 * F ** 2))
    gs = sp.symbols("g0:8")
    G = sum(g * X ** i for i, g in enumerate(gs))
    # d/dξ (G F^(-3/2)) · F^(5/2) = G' F + (3/2) G Q'
    target = sp.expand(sp.diff(G, X) * F + sp.Rational(3, 2) * G * sp.diff(Qs, X))
    eqs = sp.Poly(N - target, X).all_coeffs()
    return bool(sp.solve(eqs, gs, dict=True))


@pytest.mark.parametrize("kind", ["first", "second"])
def test_lemma_annihilates_form_sympy(kind):
    assert _sympy_exactness(kind, 3)
    assert _sympy_exactness(kind, 5)


def test_sympy_oracle_negative_control():
    assert not _sympy_exactness("first", 3, ode_kind="second")
    assert not _sympy_exactness("second", 3, ode_kind="first")


def test_a0_at_three():
    a0 = lemma_coefficients("first").a0.partial_evaluate({"a": 3})
    expected = (s * (s - 1) * (5 * s + 27) * (7 * s + 9)).num
    assert RatExpr(a0) == RatExpr(expected)


def test_b0_has_lambda2_factor():
    b0 = RatExpr(lemma_coefficients("second").a0)
    assert b0.substitute({"s": LAM2}).is_zero()
    assert b0.substitute({"s": T}).is_zero()


def test_wronskian_first():
    rep = wronskian_form_check(lemma_coefficients("first"))
    assert rep.passed
    assert [r for _, r in rep.residues] == [1, 1, 1, -1]
    assert rep.apparent_root == LAM1


def test_wronskian_second():
    rep = wronskian_form_check(lemma_coefficients("second"))
    assert rep.passed
    assert [r for _, r in rep.residues] == [0, 1, 1, -1]
    assert rep.apparent_root == LAM2


def test_wronskian_negative_control():
    ode = lemma_coefficients("first")
    shifted = LinearODE2(ode.a0, (RatExpr(ode.a1) + RatExpr(ode.a0)).num, ode.a2)
    assert not wronskian_form_check(shifted).passed


@pytest.mark.parametrize("kind,lam,a3", [("first", LAM1, Q(-9, 7)), ("second", LAM2, Q(-69, 11))])
def test_solution_from_a0(kind, lam, a3):
    sol = solution_from_a0(lemma_coefficients(kind))
    assert sol.t == T and sol.lam == lam
    assert sol.at(3)[:2] == (a3, Q(-27, 5))


def test_solution_from_a0_ambiguous():
    ode = LinearODE2((s * (s - 1)).num, Poly.const(1), Poly.const(0))
    with pytest.raises(AmbiguousRoots):
        solution_from_a0(ode)


def test_roots_of_b0_at_three():
    b0 = lemma_coefficients("second").a0.partial_evaluate({"a": 3})
    roots = sorted(r.as_fraction() for r, _ in linear_factor_roots(b0))
    assert roots == [Q(-69, 11), Q(-27, 5), 0, 1]
