"""Coincidences between C-values and between densities of prime powers,
the Mueller generator sets, and the Mueller-number test."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import isqrt, lcm
from typing import Optional

from .arith import FactoredInteger, is_prime, valuation
from .base import Base, as_base
from .density import delta


@dataclass(frozen=True, order=True)
class CoincidenceQuadruple:
    p1: int
    e1: int
    p2: int
    e2: int
    value: Fraction

    def __post_init__(self):
        if not self.p1 < self.p2 or min(self.e1, self.e2) < 1:
            raise ValueError(f"malformed quadruple {self}")

    def key(self) -> tuple[int, int, int, int]:
        return (self.p1, self.e1, self.p2, self.e2)


@dataclass(frozen=True)
class GeneratorSet:
    tau2: int
    members: tuple[int, ...]


def _primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


def _order_lhs(p: int, a: int) -> Fraction:
    return Fraction(p) ** (a - 2) * (p * p - 1)


def _int_roots(a: int, b: int, c: int) -> list[int]:
    disc = b * b - 4 * a * c
    if disc < 0 or isqrt(disc) ** 2 != disc:
        return []
    s = isqrt(disc)
    return sorted({r // (2 * a) for r in (-b + s, -b - s) if r % (2 * a) == 0})


def _exponent_of(p: int, n: int) -> Optional[int]:
    """k with p^k == n, or None."""
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k if n == 1 else None


def _structured_solutions() -> set[tuple[int, int, int, int]]:
    """All solutions of p^(a-2)(p^2-1) = q^(b-2)(q^2-1), p < q, by case analysis.

    Exponent 1 on either side is impossible (non-integral vs integral, or p = q),
    so a, b >= 2."""
    sols: set[tuple[int, int, int, int]] = set()
    # b >= 3 forces q | p^2 - 1 with q > p, so q = p + 1.
    p, q = 2, 3
    a = 2 + valuation(p, q * q - 1)
    b = 2 + valuation(q, p * p - 1)
    if b >= 3 and _order_lhs(p, a) == _order_lhs(q, b):
        sols.add((p, a, q, b))
    # b = 2, p = 2: q^2 - 1 = 3 * 2^k and one of q -+ 1 divides 6.
    for d in (1, 2, 3, 6):
        for q in (d - 1, d + 1):
            if q > 2 and is_prime(q) and (q * q - 1) % 3 == 0:
                k = _exponent_of(2, (q * q - 1) // 3)
                if k is not None:
                    sols.add((2, k + 2, q, 2))
    # b = 2, p odd. Only exponent 1 on p survives in either sub-case.
    # p | q + 1: q + 1 = p r with r = (p + 1)/2, giving p^2 - 2p - 3 = 0.
    for p in _int_roots(1, -2, -3):
        if p > 2 and is_prime(p):
            q = p * (p + 1) // 2 - 1
            if is_prime(q) and _order_lhs(p, 3) == _order_lhs(q, 2):
                sols.add((p, 3, q, 2))
    # p | q - 1: q - 1 = p r with r = (p - 1)/2, giving p^2 - 6p + 5 = 0.
    for p in _int_roots(1, -6, 5):
        if p > 2 and is_prime(p):
            q = p * (p - 1) // 2 + 1
            if is_prime(q) and _order_lhs(p, 3) == _order_lhs(q, 2):
                sols.add((p, 3, q, 2))
    return sols


def brute_force_order_equation(pmax: int, emax: int) -> set[tuple[int, int, int, int]]:
    groups: dict[Fraction, list[tuple[int, int]]] = defaultdict(list)
    for p in _primes_upto(pmax):
        for a in range(1, emax + 1):
            groups[_order_lhs(p, a)].append((p, a))
    sols = set()
    for members in groups.values():
        for (p, a), (q, b) in combinations(sorted(members), 2):
            if p < q:
                sols.add((p, a, q, b))
    return sols


def solve_order_equation(pmax: int, emax: int) -> list[tuple[int, int, int, int]]:
    if pmax < 11 or emax < 6:
        raise ValueError("need pmax >= 11 and emax >= 6")
    structured = {s for s in _structured_solutions() if s[2] <= pmax and max(s[1], s[3]) <= emax}
    oracle = brute_force_order_equation(pmax, emax)
    if structured != oracle:
        raise AssertionError(f"case analysis {structured} disagrees with brute force {oracle}")
    return sorted(structured)


def _pp(p: int, e: int) -> FactoredInteger:
    return FactoredInteger(p**e, ((p, e),))


def coincidence_search(g, pmax: int, emax: int) -> list[CoincidenceQuadruple]:
    """Every pair p1^e1, p2^e2 (p1 < p2 <= pmax, e <= emax) with equal density."""
    g = as_base(g)
    if pmax < 11 or emax < 6:
        raise ValueError("need pmax >= 11 and emax >= 6")
    groups: dict[Fraction, list[tuple[int, int]]] = defaultdict(list)
    for p in _primes_upto(pmax):
        for e in range(1, emax + 1):
            groups[delta(g, _pp(p, e))].append((p, e))
    out = []
    for value, members in groups.items():
        for (p1, e1), (p2, e2) in combinations(sorted(members), 2):
            if p1 != p2:
                out.append(CoincidenceQuadruple(p1, e1, p2, e2, value))
    return sorted(out)


def _family_rows(g: Base):
    nu = lambda p: valuation(p, g.h)
    t1, t2 = g.tau1, g.tau2
    # (p1, e1, p2, e2, guard moduli)
    return [
        (2, 5 - t1 - nu(2), 3, 3 - nu(3), (2 ** (5 - t2), 27)),
        (2, 5 - t1 - nu(2), 5, 2 - nu(5), (2 ** (5 - t2), 25)),
        (2, 6 - t1 - nu(2), 7, 2 - nu(7), (2 ** (6 - t2), 49)),
        (3, 3 - nu(3), 5, 2 - nu(5), (27, 25)),
        (5, 3 - nu(5), 11, 2 - nu(11), (125, 121)),
    ]


def theorem5_families(g) -> list[CoincidenceQuadruple]:
    """Closed-form list of density coincidences for the base g."""
    g = as_base(g)
    out = []
    for p1, e1, p2, e2, guard in _family_rows(g):
        if any(g.h % mod == 0 for mod in guard) or min(e1, e2) < 1:
            continue
        out.append(CoincidenceQuadruple(p1, e1, p2, e2, delta(g, _pp(p1, e1))))
    return sorted(out)


def _blocking_pairs(tau2: int) -> list[tuple[int, int]]:
    return [
        (2 ** (5 - tau2), 27),
        (2 ** (5 - tau2), 25),
        (2 ** (6 - tau2), 49),
        (27, 25),
        (125, 121),
    ]


def derive_generator_sets(tau2: int) -> GeneratorSet:
    if tau2 not in (0, 1, 2):
        raise ValueError(f"tau2 must be 0, 1 or 2, got {tau2}")
    lcms = {lcm(*choice) for choice in product(*_blocking_pairs(tau2))}
    minimal = sorted(n for n in lcms if not any(m != n and n % m == 0 for m in lcms))
    return GeneratorSet(tau2, tuple(minimal))


def is_muller(g) -> tuple[bool, Optional[int]]:
    g = as_base(g)
    for member in derive_generator_sets(g.tau2).members:
        if g.h % member == 0:
            return True, member
    return False, None
