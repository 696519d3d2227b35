from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp

from pvilab.algebra import RatExpr, var
from pvilab.fuchs import extract_e_theta_params
from pvilab.garnier_pvi import (
    AlgebraicSolution,
    DegenerateCurve,
    MissingMomentum,
    NotAffine,
    PVIParams,
    PVIVariant,
    alpha_from_theta,
    bracket_identity_check,
    bracket_terms_at,
    compare_garnier_pvi,
    degenerate_factors,
    eq1,
    eq2,
    garnier_sides_at,
    is_degenerate,
    pencil_decompose,
    pvi_residual_on_curve,
    sigma_part_prefactor,
    verify_garnier_on_curve,
)
from pvilab.hamiltonian import Theta, hamiltonian_K, k_constant
from pvilab.picard_fuchs import lemma_coefficients, solution_from_a0

Q = Fraction
a, sigma = var("a"), var("sigma")


def test_classical_accessor_round_trip():
    p = PVIParams.of(Q(1, 8), Q(1, 2), Q(1, 3), Q(1, 5))
    alpha, beta, gamma, delta = p.classical()
    assert (alpha[0], beta[0], gamma[0], delta[0]) == (Q(1, 8), Q(-1, 2), Q(1, 3), Q(3, 10))
    assert PVIParams.from_classical(alpha, beta, gamma, delta) == p
    pencil = PVIParams.pencil()
    assert PVIParams.from_classical(*pencil.classical()) == pencil


def test_pencil_residual_vanishes():
    res = pvi_residual_on_curve(eq1(), PVIParams.pencil())
    r0, r1 = pencil_decompose(res)
    assert r0.is_zero() and r1.is_zero()


def test_sigma_one_member():
    assert pvi_residual_on_curve(eq1(), PVIParams.of(*[Q(1, 8)] * 4)).is_zero()


def test_base_member():
    res = pvi_residual_on_curve(eq1(), PVIParams.of(Q(1, 8), 0, 0, 0))
    assert pencil_decompose(res) == (RatExpr(0), RatExpr(0))


def test_trivial_parameters_fail():
    assert not pvi_residual_on_curve(eq1(), PVIParams.of(0, 0, 0, 0)).is_zero()


def test_second_solution():
    assert pvi_residual_on_curve(eq2(), PVIParams.of(Q(1, 8), Q(1, 2), 0, 0)).is_zero()
    assert not pvi_residual_on_curve(eq2(), PVIParams.pencil()).is_zero()


def test_printed_variant_not_zero():
    assert not pvi_residual_on_curve(eq1(), PVIParams.pencil(), PVIVariant.PRINTED).is_zero()
    assert not pvi_residual_on_curve(eq2(), PVIParams.of(Q(1, 8), Q(1, 2), 0, 0), PVIVariant.PRINTED).is_zero()


def _sympy_residual(classical, a_value):
    # independent oracle: sympy differentiation of the eq1 curve, standard P_VI
    A = sp.Symbol("a")
    al, be, ga, de = (sp.Rational(x) for x in classical)
    L = A ** 2 * (2 - A) / (A ** 2 - A + 1)
    T = A ** 3 * (2 - A) / (2 * A - 1)
    lt = sp.diff(L, A) / sp.diff(T, A)
    ltt = sp.diff(lt, A) / sp.diff(T, A)
    rhs = (
        sp.Rational(1, 2) * (1 / L + 1 / (L - 1) + 1 / (L - T)) * lt ** 2
        - (1 / T + 1 / (T - 1) + 1 / (L - T)) * lt
        + L * (L - 1) * (L - T) / (T ** 2 * (T - 1) ** 2)
        * (al + be * T / L ** 2 + ga * (T - 1) / (L - 1) ** 2 + de * T * (T - 1) / (L - T) ** 2)
    )
    return sp.simplify((ltt - rhs).subs(A, sp.Rational(a_value)))


def test_residual_against_sympy_pointwise():
    # classical (alpha, beta, gamma, delta) = (1/8, 0, 0, 1/2) is the base member
    assert _sympy_residual((Q(1, 8), 0, 0, Q(1, 2)), Q(5, 3)) == 0
    assert _sympy_residual((0, 0, 0, Q(1, 2)), Q(5, 3)) != 0
    ours = pvi_residual_on_curve(eq1(), PVIParams.of(0, 0, 0, 0)).evaluate({"a": Q(5, 3)})
    assert sp.Rational(ours) == _sympy_residual((0, 0, 0, Q(1, 2)), Q(5, 3))


def test_affine_in_sigma():
    res = pvi_residual_on_curve(eq2(), PVIParams.pencil())
    assert res.num.degree("sigma") <= 1 and res.den.degree("sigma") == 0


def test_pencil_decompose_examples():
    assert pencil_decompose(sigma * (a + 1)) == (RatExpr(0), a + 1)
    with pytest.raises(NotAffine):
        pencil_decompose(sigma ** 2)


def test_sigma_part_is_bracket():
    for sol in (eq1(), eq2()):
        for variant in PVIVariant:
            _, r1 = pencil_decompose(pvi_residual_on_curve(sol, PVIParams.pencil(), variant))
            assert r1 == sigma_part_prefactor(sol, variant) * bracket_identity_check(sol)


def test_bracket_identity():
    assert bracket_identity_check(eq1()).is_zero()
    assert not bracket_identity_check(eq2()).is_zero()
    terms = bracket_terms_at(eq1(), 3)
    assert terms == (Q(49, 15), Q(-49, 40), Q(-49, 24))
    assert sum(terms) == 0


def test_hamiltonian_at_zero_momentum():
    th = Theta(Q(1, 3), Q(-2, 5), Q(3, 7), Q(1, 2))
    lam, t = var("lam"), var("t")
    K = hamiltonian_K(th)
    assert K.substitute({"mu": 0}) == k_constant(th) * lam / (t * (t - 1))


def test_alpha_from_theta():
    assert alpha_from_theta(Theta(0, 0, 0, Q(1, 2))) == PVIParams.of(Q(1, 8), 0, 0, 0)
    assert alpha_from_theta(Theta(1, 0, 0, Q(-1, 2))) == PVIParams.of(Q(1, 8), Q(1, 2), 0, 0)
    assert alpha_from_theta(Theta(0, 0, 0, 0)) == PVIParams.of(0, 0, 0, 0)


def test_alpha_even_in_theta():
    rng = random.Random(5)
    for _ in range(10):
        vals = [Q(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(4)]
        flipped = [-v for v in vals]
        assert alpha_from_theta(Theta(*vals)) == alpha_from_theta(Theta(*flipped))


def test_garnier_single_point():
    # both sides at (lam, lam', t) = (2, 1, 3), theta = (0, 0, 0, 1/2)
    lhs, rhs = garnier_sides_at(Theta(0, 0, 0, Q(1, 2)), 2, 1, 3)
    assert lhs == rhs


def test_garnier_single_point_by_hand():
    # at lam = 2, t = 3, lam' = 1 with theta = (0,0,0,1/2):
    # RHS = 1/2 (1/2 + 1 - 1) - (1/3 + 1/2 - 1) + (2*1*(-1)/(9*4)) (1/8 + 0 + 0 + 1/2 * 6/1)
    rhs = Q(1, 2) * (Q(1, 2) + 1 - 1) - (Q(1, 3) + Q(1, 2) - 1) + Q(-2, 36) * (Q(1, 8) + Q(1, 2) * 6)
    _, got = garnier_sides_at(Theta(0, 0, 0, Q(1, 2)), 2, 1, 3)
    assert got == rhs == Q(35, 144)


def test_garnier_sampled_paper_thetas():
    rng = random.Random(0)
    for th in (Theta(0, 0, 0, Q(1, 2)), Theta(1, 0, 0, Q(-1, 2))):
        sample = compare_garnier_pvi(th, 60, rng)
        assert sample.all_equal and sample.conclusive and sample.symbolic_equal


def test_garnier_detects_wrong_alpha():
    # the same flow compared against P_VI with the accessory-shifted α fails
    from pvilab.garnier_pvi import garnier_second_derivative, pvi_rhs

    th = Theta(Q(1, 3), Q(1, 5), Q(1, 7), Q(1, 2))
    lhs = garnier_second_derivative(th)
    wrong = PVIParams.of(Q(1, 8), 0, 0, 0)
    rhs = pvi_rhs(wrong, var("lam"), var("v"), var("t"))
    pt = {"lam": Q(2), "v": Q(1), "t": Q(3)}
    assert lhs.evaluate(pt) != rhs.evaluate(pt)


@pytest.fixture(scope="module")
def curves():
    out = {}
    for kind in ("first", "second"):
        ode = lemma_coefficients(kind)
        p = extract_e_theta_params(ode)
        out[kind] = (solution_from_a0(ode).with_mu(p.mu), p.theta)
    return out


def test_garnier_on_curves(curves):
    for sol, th in curves.values():
        r1, r2 = verify_garnier_on_curve(sol, th)
        assert r1.is_zero() and r2.is_zero()


def test_garnier_on_curve_negative_control(curves):
    sol, _ = curves["first"]
    r1, r2 = verify_garnier_on_curve(sol, Theta(0, 0, 0, Q(1, 3)))
    assert not (r1.is_zero() and r2.is_zero())


def test_garnier_requires_mu():
    with pytest.raises(MissingMomentum):
        verify_garnier_on_curve(eq1(), Theta(0, 0, 0, Q(1, 2)))


def test_mobius_invariance():
    for p, q, r, w in ((2, 1, 1, 3), (1, -1, 3, 2)):
        s1 = eq1().reparametrize(p, q, r, w)
        assert pencil_decompose(pvi_residual_on_curve(s1, PVIParams.pencil())) == (RatExpr(0), RatExpr(0))
        assert bracket_identity_check(s1).is_zero()
        s2 = eq2().reparametrize(p, q, r, w)
        assert pvi_residual_on_curve(s2, PVIParams.of(Q(1, 8), Q(1, 2), 0, 0)).is_zero()
        assert not pvi_residual_on_curve(s1, PVIParams.of(0, 0, 0, 0)).is_zero()


def test_degenerate_values():
    sol = eq1()
    for bad in (0, 1, 2, Q(1, 2)):
        assert is_degenerate(sol, bad)
    assert not is_degenerate(sol, 3)
    assert (a ** 2 - a + 1).num in degenerate_factors(sol)


def test_constant_t_rejected():
    with pytest.raises(DegenerateCurve):
        AlgebraicSolution("flat", a, RatExpr(5))
