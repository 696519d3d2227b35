"""Polynomial gcd over Q[tower].

Inputs are reduced to primitive integer polynomials.  The fast path is
the heuristic gcd (evaluate the main variable at a large integer, recurse,
interpolate ξ-adically, accept only after exact trial division).  When it
gives up, the recursive subresultant PRS computes the gcd of primitive
parts over Z[inner variables].
"""

from __future__ import annotations

import math
from typing import Sequence

from . import monomial as mono
from .poly import ONE, ZERO, Poly

_HEU_TRIES = 6


def int_content(p: Poly) -> int:
    g = 0
    for c in p.terms.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def _positive(p: Poly) -> Poly:
    if p.terms and p.terms[max(p.terms)] < 0:
        return -p
    return p


def _div_int(p: Poly, c: int) -> Poly:
    if c == 1:
        return p
    return Poly({m: v // c for m, v in p.terms.items()})


def gcd(p: Poly, q: Poly) -> Poly:
    """Gcd of two polynomials over Q.

    The result is primitive over Z with positive lex-leading coefficient;
    ``gcd(0, 0) == 0``.
    """
    if not p.terms and not q.terms:
        return ZERO
    P = p.to_integral()[0] if p.terms else ZERO
    Q = q.to_integral()[0] if q.terms else ZERO
    g = _gcd_zz(P, Q)
    return _positive(_div_int(g, int_content(g)))


def cofactors(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, p/g, q/g)`` with ``g = gcd(p, q)``."""
    g = gcd(p, q)
    if not g.terms:
        return g, ZERO, ZERO
    return g, p.divexact(g), q.divexact(g)


def _gcd_zz(P: Poly, Q: Poly) -> Poly:
    """Gcd in Z[tower] including integer content, positive lex lead."""
    if not P.terms:
        return _positive(Q)
    if not Q.terms:
        return _positive(P)
    cp, cq = int_content(P), int_content(Q)
    c = math.gcd(cp, cq)
    if P.is_constant() or Q.is_constant():
        return Poly.const(c)
    if len(P.terms) == 1 and len(Q.terms) == 1:
        (mp, _), = P.terms.items()
        (mq, _), = Q.terms.items()
        return Poly({_mono_gcd(mp, mq): c})
    P, Q = _div_int(P, cp), _div_int(Q, cq)
    if P == Q or P == -Q:
        return _positive(P).scale(c)
    g = _heugcd(P, Q)
    if g is None:
        g = _prs_gcd(P, Q)
    return _positive(g).scale(c)


def _mono_gcd(m1: int, m2: int) -> int:
    out = 0
    for i in range(mono.NVARS):
        e = min(mono.degree_in(m1, i), mono.degree_in(m2, i))
        if e:
            out += mono.unit(i, e)
    return out


def _norm(p: Poly) -> int:
    return max(abs(c) for c in p.terms.values())


def _heugcd(P: Poly, Q: Poly) -> Poly | None:
    x = max(P.main_var(), Q.main_var())
    if x < 0:
        return ONE
    nP, nQ = _norm(P), _norm(Q)
    B = 2 * min(nP, nQ) + 29
    lcP = _lc_norm(P, x)
    lcQ = _lc_norm(Q, x)
    xi = max(min(B, 99 * math.isqrt(B)), 2 * min(nP // lcP, nQ // lcQ) + 4)
    name = mono.TOWER[x]
    for _ in range(_HEU_TRIES):
        ff = P.partial_evaluate({name: xi})
        gg = Q.partial_evaluate({name: xi})
        if ff.terms and gg.terms:
            h = _gcd_zz(ff, gg)
            cand = _interpolate(h, xi, x)
            cand = _div_int(cand, int_content(cand)) if cand.terms else cand
            if cand.terms and _trial_divides(cand, P) and _trial_divides(cand, Q):
                return _positive(cand)
        xi = 73794 * xi * math.isqrt(math.isqrt(xi)) // 27011
    return None


def _lc_norm(p: Poly, x: int) -> int:
    cs = p.coeffs_in(x)
    return max(1, min(abs(c) for c in cs[max(cs)].terms.values()))


def _interpolate(h: Poly, xi: int, x: int) -> Poly:
    out: dict[int, int] = {}
    half = xi // 2
    for m, c in h.terms.items():
        j = 0
        while c:
            r = c % xi
            if r > half:
                r -= xi
            if r:
                out[m + mono.unit(x, j)] = r
            c = (c - r) // xi
            j += 1
    return Poly(out)


def _trial_divides(d: Poly, p: Poly) -> bool:
    # cheap degree screen before the sparse division
    for i in mono.support(_or_monos(d)):
        if d.degree(i) > p.degree(i):
            return False
    return d.divides(p)


def _or_monos(p: Poly) -> int:
    seen = 0
    for m in p.terms:
        seen |= m
    return seen


# -- subresultant PRS fallback ----------------------------------------

def _content_x(coeffs: Sequence[Poly]) -> Poly:
    g = ZERO
    for c in coeffs:
        if c.terms:
            g = _gcd_zz(g, c)
            if g.is_constant() and abs(g.constant_value()) == 1:
                return ONE
    return g


def _trim(a: list[Poly]) -> list[Poly]:
    while a and not a[-1].terms:
        a.pop()
    return a


def _prem(A: list[Poly], B: list[Poly]) -> list[Poly]:
    dB = len(B) - 1
    lcB = B[-1]
    R = list(A)
    e = len(A) - len(B) + 1
    while R and len(R) - 1 >= dB:
        lcR = R[-1]
        j = len(R) - 1 - dB
        R = [r * lcB for r in R]
        for i, b in enumerate(B):
            R[j + i] = R[j + i] - lcR * b
        _trim(R)
        e -= 1
    if e > 0:
        f = lcB ** e
        R = [r * f for r in R]
    return R


def _prs_gcd(P: Poly, Q: Poly) -> Poly:
    x = max(P.main_var(), Q.main_var())
    if x < 0:
        return Poly.const(math.gcd(P.constant_value(), Q.constant_value()))
    A = P.coeff_list(x)
    B = Q.coeff_list(x)
    if len(A) == 1:
        return _gcd_zz(P, _content_x(B))
    if len(B) == 1:
        return _gcd_zz(Q, _content_x(A))
    ca, cb = _content_x(A), _content_x(B)
    c = _gcd_zz(ca, cb)
    A = [a.divexact(ca) for a in A]
    B = [b.divexact(cb) for b in B]
    if len(A) < len(B):
        A, B = B, A
    g = h = ONE
    while True:
        d = len(A) - len(B)
        R = _prem(A, B)
        if not R:
            break
        if len(R) == 1:
            B = [ONE]
            break
        A = B
        div = g * h ** d
        B = [r.divexact(div) for r in R]
        g = A[-1]
        if d == 0:
            pass
        elif d == 1:
            h = g
        else:
            h = (g ** d).divexact(h ** (d - 1))
    cB = _content_x(B)
    G = Poly.from_univariate(mono.TOWER[x], [b.divexact(cB) for b in B])
    return G * c
