"""Exact densities of primes p with d | ord_g(p), and derived exponents.

Everything here is a Fraction; no floating point.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import IntLike, as_factored, gcd_supernatural, kappa, mobius, unitary_divisors
from .base import as_base

_EPS_TABLE = {
    1: (Fraction(-1, 2), Fraction(1, 4), Fraction(1, 16)),
    -1: (Fraction(1, 4), Fraction(-1, 2), Fraction(1, 16)),
}


def render(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def cap_C(q: int, n: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(q * q, q * q - 1) / Fraction(q) ** n


def _nu2(n: int) -> int:
    return (n & -n).bit_length() - 1


def table_gamma(g, d: IntLike) -> int:
    g, d = as_base(g), as_factored(d)
    if d.value % 2:
        raise ValueError(f"epsilon is only defined for even d, got {d.value}")
    return max(0, _nu2(g.disc) - _nu2(d.value) - _nu2(g.h))


def epsilon(g, d: IntLike, sign: int | None = None) -> Fraction:
    """Table lookup of epsilon_g(d); `sign` overrides the sign row (used for |g|)."""
    g = as_base(g)
    row = g.sign if sign is None else sign
    return _EPS_TABLE[row][table_gamma(g, d)]


def epsilon_prime(g, d: IntLike) -> Fraction:
    g, d = as_base(g), as_factored(d)
    dv = d.value
    divides = (4 * dv) % g.disc == 0
    if dv % 2:
        return Fraction(1)
    if dv % 4:
        e = 1 + Fraction(3 * (1 - g.sign) * (2 ** _nu2(g.h) - 1), 4)
        return e + epsilon(g, d) if divides else e
    if not divides:
        return Fraction(1)
    return 1 + epsilon(g, d, sign=1)


def delta(g, d: IntLike) -> Fraction:
    """Density of primes p in S(g) with d | ord_g(p); delta(g, 1) = 1."""
    g, d = as_base(g), as_factored(d)
    if d.value == 1:
        return Fraction(1)
    out = epsilon_prime(g, d) / (d.value * gcd_supernatural(g.h, d).value)
    for p in d.primes:
        out *= Fraction(p * p, p * p - 1)
    return out


def delta_prime(g, m: IntLike) -> Fraction:
    """Density of primes with p_j^e_j not dividing ord_g(p) for every block of m."""
    g, m = as_base(g), as_factored(m)
    return sum((mobius(kappa(j)) * delta(g, j) for j in unitary_divisors(m)), Fraction(0))


def gamma_min(g, m: IntLike) -> Fraction:
    g, m = as_base(g), as_factored(m)
    if m.value < 2:
        raise ValueError("gamma_min needs m >= 2")
    return min(delta(g, c) for c in m.components())


def exponent_spectrum(g, m: IntLike) -> list[Fraction]:
    """Sorted distinct log-exponents 1 - delta'_g(j) over unitary j > 1."""
    g, m = as_base(g), as_factored(m)
    if m.value < 2:
        raise ValueError("exponent_spectrum needs m >= 2")
    return sorted({1 - delta_prime(g, j) for j in unitary_divisors(m) if j.value > 1})
