"""Exact arithmetic kernel: polynomials and rational expressions over Q."""

from .gcd import cofactors, gcd
from .monomial import TOWER, UnknownVariable
from .poly import NotDivisible, Poly
from .ratexpr import DegenerateSubstitution, RatExpr, const, lift, var
from .text import format_rational, parse_expr, parse_rational

__all__ = [
    "TOWER", "Poly", "RatExpr", "NotDivisible", "UnknownVariable",
    "DegenerateSubstitution", "gcd", "cofactors", "var", "const", "lift",
    "parse_expr", "parse_rational", "format_rational",
]
