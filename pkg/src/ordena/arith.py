"""Exact integer arithmetic: factorization, Moebius-type utilities, unitary
divisors, the Carmichael function and multiplicative orders."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt, prod
from typing import Iterable, Union

import numpy as np

TRIAL_BOUND = 1 << 12
# Deterministic Miller-Rabin witnesses: exact for n < 3.3 * 10**24.
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_EXTRA = (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"FactoredInteger needs a positive value, got {self.value}")
        if prod(p**e for p, e in self.factors) != self.value:
            raise ValueError(f"factors {self.factors} do not multiply to {self.value}")

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def omega(self) -> int:
        return len(self.factors)

    def components(self) -> list["FactoredInteger"]:
        """The prime-power blocks p_j^e_j."""
        return [FactoredInteger(p**e, ((p, e),)) for p, e in self.factors]

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    @classmethod
    def from_factors(cls, factors: Iterable[tuple[int, int]]) -> "FactoredInteger":
        merged: dict[int, int] = {}
        for p, e in factors:
            if e:
                merged[p] = merged.get(p, 0) + e
        fs = tuple(sorted(merged.items()))
        return cls(prod(p**e for p, e in fs), fs)


IntLike = Union[int, FactoredInteger]


def as_factored(n: IntLike) -> FactoredInteger:
    if isinstance(n, FactoredInteger):
        return n
    return factorize(n)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = MR_BASES if n < 3_317_044_064_679_887_385_961_981 else MR_BASES + MR_EXTRA
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _small_primes(limit: int) -> list[int]:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


_TRIAL_PRIMES = _small_primes(TRIAL_BOUND)


def _brent(n: int) -> int:
    """A non-trivial factor of the odd composite n (Brent's variant of rho).

    Seeds are tried in a fixed order so the output is deterministic."""
    for c in range(1, 200):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        m = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise RuntimeError(f"rho failed to split {n}")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    f = _brent(n)
    _split(f, out)
    _split(n // f, out)


def factorize(n: int) -> FactoredInteger:
    if isinstance(n, FactoredInteger):
        return n
    n = int(n)
    if n < 1:
        raise ValueError(f"cannot factorize {n}: need n >= 1")
    found: dict[int, int] = {}
    m = n
    for p in _TRIAL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m < TRIAL_BOUND * TRIAL_BOUND:
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, found)
    return FactoredInteger(n, tuple(sorted(found.items())))


def mobius(n: IntLike) -> int:
    n = as_factored(n)
    if any(e > 1 for _, e in n.factors):
        return 0
    return -1 if n.omega % 2 else 1


def kappa(n: IntLike) -> FactoredInteger:
    n = as_factored(n)
    return FactoredInteger.from_factors((p, 1) for p in n.primes)


def valuation(p: int, n: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError(f"valuation needs n >= 1, got {n}")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def unitary_divisors(m: IntLike) -> list[FactoredInteger]:
    m = as_factored(m)
    divs = [FactoredInteger(1)]
    for p, e in m.factors:
        divs += [FactoredInteger.from_factors(d.factors + ((p, e),)) for d in divs]
    return sorted(divs, key=lambda d: d.value)


def gcd_supernatural(h: int, d: IntLike) -> FactoredInteger:
    """gcd(h, d^infinity): the part of h supported on the primes of d."""
    d = as_factored(d)
    return FactoredInteger.from_factors((p, valuation(p, h)) for p in d.primes)


def carmichael(u: IntLike) -> int:
    u = as_factored(u)
    lam = 1
    for p, e in u.factors:
        if p == 2:
            part = 1 if e == 1 else 2 if e == 2 else 2 ** (e - 2)
        else:
            part = (p - 1) * p ** (e - 1)
        lam = lam * part // gcd(lam, part)
    return lam


def _carmichael_factored(u: FactoredInteger) -> FactoredInteger:
    parts = []
    for p, e in u.factors:
        if p == 2:
            parts.append(((2, 0 if e == 1 else 1 if e == 2 else e - 2),))
        else:
            parts.append(factorize(p - 1).factors + ((p, e - 1),))
    best: dict[int, int] = {}
    for fs in parts:
        for q, k in fs:
            best[q] = max(best.get(q, 0), k)
    return FactoredInteger.from_factors(best.items())


def order_of_residue(a: int, u: IntLike) -> int:
    """Least t >= 1 with a^t = 1 (mod u); a must be a unit mod u."""
    u = as_factored(u)
    if u.value == 1:
        return 1
    a %= u.value
    if gcd(a, u.value) != 1:
        raise ValueError(f"{a} is not invertible modulo {u.value}")
    lam = _carmichael_factored(u)
    t = lam.value
    for q, k in lam.factors:
        for _ in range(k):
            if pow(a, t // q, u.value) == 1:
                t //= q
            else:
                break
    return t


class NotInS(ValueError):
    pass


def _check_in_s(g, u: int) -> None:
    if not g.in_S(u):
        raise NotInS(f"{u} shares a prime with the base {g}")


@lru_cache(maxsize=1 << 16)
def _prime_power_order(g, p: int, k: int) -> int:
    q = p**k
    return order_of_residue(g.residue(q), FactoredInteger(q, ((p, k),)))


def multiplicative_order(g, u: IntLike) -> int:
    """ord_g(u) for a Base g and u in S(g); ord_g(1) = 1.

    Computed per prime-power block and combined by lcm; block orders are
    memoized."""
    from .base import as_base

    g = as_base(g)
    u = as_factored(u)
    _check_in_s(g, u.value)
    t = 1
    for p, k in u.factors:
        o = _prime_power_order(g, p, k)
        t = t * o // gcd(t, o)
    return t


def order_valuation(g, u: IntLike, p: int, cap: int) -> int:
    if cap < 1:
        raise ValueError("cap must be >= 1")
    return min(cap, valuation(p, multiplicative_order(g, u)))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
