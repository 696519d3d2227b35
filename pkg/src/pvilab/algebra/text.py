"""Text syntax for rationals, polynomials and rational expressions.

Input accepts ``^`` or ``**`` for powers, implicit nothing (use ``*``),
the Unicode minus sign and the Greek aliases of the tower variables.
Output is ASCII: ``-27/5``, ``3*a^2*s - 1/2*a + 1``.
"""

from __future__ import annotations

import ast
from fractions import Fraction

from . import monomial as mono
from .poly import Poly


def format_rational(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def parse_rational(text: str) -> Fraction:
    t = _clean(text)
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def _monomial_str(m: int) -> str:
    parts = []
    for i, e in enumerate(mono.unpack(m)):
        if e == 1:
            parts.append(mono.TOWER[i])
        elif e:
            parts.append(f"{mono.TOWER[i]}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    keys = sorted(p.terms, key=lambda m: (mono.total_degree(m), m), reverse=True)
    out = []
    for k, m in enumerate(keys):
        c = Fraction(p.terms[m])
        neg = c < 0
        c = abs(c)
        ms = _monomial_str(m)
        if not ms:
            body = format_rational(c)
        elif c == 1:
            body = ms
        else:
            body = f"{format_rational(c)}*{ms}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_ratexpr(r) -> str:
    num = format_poly(r.num)
    if r.den.is_constant() and r.den.constant_value() == 1:
        return num
    den = format_poly(r.den)
    if len(r.num.terms) > 1:
        num = f"({num})"
    if len(r.den.terms) > 1 or not r.den.is_constant() and len(r.den.terms) == 1 and "*" in den:
        den = f"({den})"
    return f"{num}/{den}"


def _clean(text: str) -> str:
    t = text.strip().replace("−", "-").replace("^", "**").replace("·", "*")
    for alias in sorted(mono.ALIASES, key=len, reverse=True):
        if not alias.isascii():
            t = t.replace(alias, mono.ALIASES[alias])
    return t


def parse_expr(text: str):
    """Parse an expression into a :class:`RatExpr`."""
    from .ratexpr import RatExpr

    t = _clean(text)
    try:
        tree = ast.parse(t, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return RatExpr.const(node.value)
        if isinstance(node, ast.Name):
            return RatExpr.var(mono.canonical_name(node.id))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise ValueError(f"non-integer exponent in {text!r}")
                return ev(node.left) ** (sign * exp.value)
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
        raise ValueError(f"unsupported syntax in {text!r}: {ast.dump(node)}")

    return ev(tree)
