"""Packed exponent vectors over the fixed indeterminate tower.

A monomial is a single Python int holding one 16-bit field per tower
variable, ``a`` in the lowest field.  Field ``i`` starts at bit ``16*i``
and its top bit is a guard, so degrees are limited to ``MAX_DEGREE``.

Two facts make the packing convenient:

* multiplying monomials is integer addition;
* comparing packed ints is lexicographic order with the *outermost*
  variable (last in ``TOWER``) most significant.
"""

from __future__ import annotations

from typing import Iterable

TOWER: tuple[str, ...] = (
    "a", "s", "xi", "lam", "mu", "t", "v", "sigma", "th0", "th1", "tht", "thinf",
)

# Unicode spellings accepted by the parser.
ALIASES: dict[str, str] = {
    "ξ": "xi", "λ": "lam", "μ": "mu", "σ": "sigma",
    "θ₀": "th0", "θ₁": "th1", "θ_t": "tht", "θt": "tht", "θ∞": "thinf",
    "theta0": "th0", "theta1": "th1", "thetat": "tht", "thetainf": "thinf",
}

NVARS = len(TOWER)
BITS = 16
MAX_DEGREE = (1 << (BITS - 1)) - 1
_FIELD = (1 << BITS) - 1
_DEG_MASK = MAX_DEGREE
GUARD = sum(1 << (BITS * i + BITS - 1) for i in range(NVARS))

INDEX: dict[str, int] = {name: i for i, name in enumerate(TOWER)}


class UnknownVariable(KeyError):
    pass


def var_index(name: str) -> int:
    name = ALIASES.get(name, name)
    try:
        return INDEX[name]
    except KeyError:
        raise UnknownVariable(f"unknown indeterminate {name!r}; tower is {TOWER}") from None


def canonical_name(name: str) -> str:
    return TOWER[var_index(name)]


def pack(exps: Iterable[int]) -> int:
    m = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MAX_DEGREE:
            raise OverflowError(f"exponent {e} out of range")
        m |= e << (BITS * i)
    return m


def unpack(m: int) -> tuple[int, ...]:
    return tuple((m >> (BITS * i)) & _DEG_MASK for i in range(NVARS))


def unit(i: int, e: int = 1) -> int:
    return e << (BITS * i)


def degree_in(m: int, i: int) -> int:
    return (m >> (BITS * i)) & _DEG_MASK


def total_degree(m: int) -> int:
    d = 0
    while m:
        d += m & _FIELD
        m >>= BITS
    return d


def divides(m2: int, m1: int) -> int | None:
    """Return ``m1 / m2`` if ``m2`` divides ``m1``, else None."""
    d = (m1 | GUARD) - m2
    if d & GUARD != GUARD:
        return None
    return d ^ GUARD


def strip(m: int, i: int) -> int:
    """Zero out the field of variable ``i``."""
    return m & ~(_FIELD << (BITS * i))


def support(m: int) -> list[int]:
    out = []
    i = 0
    while m:
        if m & _FIELD:
            out.append(i)
        m >>= BITS
        i += 1
    return out


def highest_var(m: int) -> int:
    """Index of the outermost variable with nonzero exponent, or -1."""
    if not m:
        return -1
    return (m.bit_length() - 1) // BITS
