"""Segmented order sieve.

For each u <= x in S(g) the sieve only tracks the capped valuations
nu_q(ord_g(u)) at the primes q of m. Orders of coprime factors combine by
lcm, so valuations combine by max over the prime-power blocks of u.
Primes are handled in vectorized batches (modular powers over int64, valid
while p < 2**31); prime powers p^k with k >= 2 are few and go through the
exact order routine.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional

import numpy as np
from scipy.special import expi

from .arith import FactoredInteger, IntLike, as_factored, kappa, mobius, multiplicative_order, unitary_divisors, valuation
from .base import Base, as_base
from .density import delta, delta_prime, gamma_min, render

MODES = ("N", "Nprime", "Ndoubleprime", "P", "Pprime")
PRIME_MODES = ("P", "Pprime")
DEFAULT_SEGMENT = 1 << 22
MAX_X = 1 << 31
DEFAULT_MEM_MB = 4096


class SieveResourceError(MemoryError):
    pass


@dataclass
class SpfTable:
    lo: int
    spf: np.ndarray  # spf[i] is the smallest prime factor of lo + i (0 for i with lo + i < 2)

    @property
    def limit(self) -> int:
        return self.lo + len(self.spf) - 1


@dataclass
class CountTable:
    g: Base
    m: FactoredInteger
    mode: str
    checkpoints: list[tuple[int, int]]
    predicted_exponent: Optional[Fraction]

    @property
    def final(self) -> int:
        return self.checkpoints[-1][1]


@dataclass
class Report:
    name: str
    passed: bool
    rows: list[dict] = field(default_factory=list)


# -- primes and smallest prime factors ---------------------------------------

def base_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def spf_segment(lo: int, hi: int, small: np.ndarray) -> SpfTable:
    """Smallest prime factors on [lo, hi); `small` must hold all primes <= sqrt(hi - 1)."""
    spf = np.zeros(hi - lo, dtype=np.int64)
    for p in small[::-1]:
        p = int(p)
        if p * p >= hi:
            continue
        start = max(p * p, -(-lo // p) * p)
        spf[start - lo :: p] = p
    idx = np.arange(lo, hi, dtype=np.int64)
    unset = (spf == 0) & (idx >= 2)
    spf[unset] = idx[unset]
    return SpfTable(lo, spf)


def primes_in(lo: int, hi: int, small: np.ndarray) -> np.ndarray:
    t = spf_segment(lo, hi, small)
    idx = np.arange(lo, hi, dtype=np.int64)
    return idx[(t.spf == idx) & (idx >= 2)]


def segments(x: int, segment: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + segment, x + 1)) for lo in range(0, x + 1, segment)]


# -- vectorized modular arithmetic ------------------------------------------

def powmod(base: np.ndarray, exp, mod: np.ndarray) -> np.ndarray:
    """Elementwise base**exp % mod; exp is a non-negative int or an int64 array."""
    base = base % mod
    result = np.ones_like(mod) % mod
    if np.isscalar(exp) or isinstance(exp, int):
        e = int(exp)
        while e:
            if e & 1:
                result = result * base % mod
            e >>= 1
            if e:
                base = base * base % mod
        return result
    e = exp.copy()
    while True:
        odd = (e & 1).astype(bool)
        result = np.where(odd, result * base % mod, result)
        e >>= 1
        if not e.any():
            return result
        base = base * base % mod


def _reduced_exponent(e: int, pm1: np.ndarray):
    if e.bit_length() < 62:
        return e
    return np.fromiter((e % int(n) for n in pm1), dtype=np.int64, count=len(pm1))


def residues_mod_primes(g: Base, primes: np.ndarray) -> np.ndarray:
    """g mod p for primes p in S(g) (entries for other primes are meaningless)."""
    pm1 = primes - 1
    r = np.ones_like(primes) % primes
    for q, e in g.g0_num.factors:
        r = r * powmod(np.full_like(primes, q), _reduced_exponent(e * g.h, pm1), primes) % primes
    for q, e in g.g0_den.factors:
        inv = powmod(np.full_like(primes, q) % primes, np.maximum(primes - 2, 0), primes)
        r = r * powmod(inv, _reduced_exponent(e * g.h, pm1), primes) % primes
    if g.sign < 0:
        r = (primes - r) % primes
    return r


def prime_order_valuations(g: Base, primes: np.ndarray, q: int, cap: int) -> np.ndarray:
    """min(cap, nu_q(ord_g(p))) for each prime p in S(g)."""
    primes = np.asarray(primes, dtype=np.int64)
    out = np.zeros(len(primes), dtype=np.uint8)
    if not len(primes):
        return out
    if primes.max() >= MAX_X:
        raise SieveResourceError("vectorized order arithmetic needs p < 2**31")
    pm1 = primes - 1
    t = pm1.copy()
    q_part = np.ones_like(pm1)
    while True:
        div = (t % q == 0) & (t > 0)
        if not div.any():
            break
        t[div] //= q
        q_part[div] *= q
    live = q_part > 1
    if not live.any():
        return out
    ps = primes[live]
    y = powmod(residues_mod_primes(g, ps), t[live], ps)
    val = np.zeros(len(ps), dtype=np.uint8)
    for _ in range(cap):
        not_one = y != 1
        if not not_one.any():
            break
        val += not_one
        y = powmod(y, q, ps)
    out[live] = val
    return out


# -- the sieve ----------------------------------------------------------------

def checkpoint_grid(x: int, n: int) -> list[int]:
    """Geometric grid x^(i/n), i = 1..n, rounded; the last point is exactly x."""
    if n < 1:
        raise ValueError("need at least one checkpoint")
    pts = sorted({max(1, round(x ** (i / n))) for i in range(1, n)} | {x})
    return pts


def _memory_budget_mb() -> float:
    return float(os.environ.get("ORDENA_MEM_MB", DEFAULT_MEM_MB))


def _check_memory(x: int, r: int, segment: int) -> None:
    need = ((x + 1) * max(r, 1) + segment * 64) / 2**20
    if need > _memory_budget_mb():
        raise SieveResourceError(
            f"sieve to x={x} needs about {need:.0f} MB, budget is {_memory_budget_mb():.0f} MB (ORDENA_MEM_MB)"
        )


class OrderSieve:
    """Capped order valuations for all u <= x (or all primes, if primes_only)."""

    def __init__(self, g, m: IntLike, x: int, *, primes_only: bool = False,
                 threads: int = 1, segment: int = DEFAULT_SEGMENT):
        self.g = as_base(g)
        self.m = as_factored(m)
        self.x = int(x)
        if self.x < 1:
            raise ValueError("x must be >= 1")
        if self.x >= MAX_X:
            raise SieveResourceError(f"x must be below 2**31, got {x}")
        self.blocks = list(self.m.factors)
        self.primes_only = primes_only
        self.threads = max(1, int(threads))
        self.segment = int(segment)
        _check_memory(self.x, len(self.blocks), self.segment)
        self.small = base_primes(isqrt(self.x) + 1)
        self.val = np.zeros((len(self.blocks), self.x + 1), dtype=np.uint8)
        self.in_s = np.ones(self.x + 1, dtype=bool)
        self.in_s[0] = False
        for b in self.g.bad_primes:
            self.in_s[::b] = False
        self.is_prime = np.zeros(self.x + 1, dtype=bool)
        self._run()

    def _map(self, fn, items):
        if self.threads == 1:
            return list(map(fn, items))
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(fn, items))

    def _prime_phase(self, bounds) -> None:
        ps = primes_in(*bounds, self.small)
        self.is_prime[ps] = True
        ps = ps[self.in_s[ps]]
        for j, (q, e) in enumerate(self.blocks):
            self.val[j, ps] = prime_order_valuations(self.g, ps, q, e)

    def _prime_power_phase(self) -> None:
        for p in self.small.tolist():
            if not self.g.in_S(p):
                continue
            pk, k = p * p, 2
            while pk <= self.x:
                o = multiplicative_order(self.g, FactoredInteger(pk, ((p, k),)))
                for j, (q, e) in enumerate(self.blocks):
                    self.val[j, pk] = min(e, valuation(q, o))
                pk *= p
                k += 1

    def _composite_phase(self, bounds) -> None:
        lo, hi = bounds
        spf = spf_segment(lo, hi, self.small).spf
        u = np.arange(lo, hi, dtype=np.int64)
        sel = (u >= 2) & self.in_s[lo:hi]
        u, s = u[sel], spf[sel]
        rest = u // s
        pp = s.copy()
        idx = np.flatnonzero(rest % s == 0)
        while len(idx):
            rest[idx] //= s[idx]
            pp[idx] *= s[idx]
            idx = idx[rest[idx] % s[idx] == 0]
        comp = rest > 1
        u, rest, pp = u[comp], rest[comp], pp[comp]
        if not len(u):
            return
        # rest < u and pp < u; earlier segments are final, in-segment
        # dependencies settle after at most omega(u) rounds.
        for j in range(len(self.blocks)):
            row = self.val[j]
            while True:
                new = np.maximum(row[pp], row[rest])
                if np.array_equal(new, row[u]):
                    break
                row[u] = new

    def _run(self) -> None:
        bounds = segments(self.x, self.segment)
        self._map(self._prime_phase, bounds)
        if self.primes_only or not self.blocks:
            return
        self._prime_power_phase()
        for b in bounds:
            self._composite_phase(b)

    def members(self, mode: str) -> np.ndarray:
        """Boolean indicator over 0..x of the elements counted by `mode`."""
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
        caps = np.array([e for _, e in self.blocks], dtype=np.uint8).reshape(-1, 1)
        full = self.val >= caps  # block p_j^e_j divides the order
        if mode == "P":
            hit = full.all(axis=0)
        elif mode == "N":
            hit = ~full.all(axis=0) if self.blocks else np.zeros(self.x + 1, dtype=bool)
        else:
            hit = ~full.any(axis=0)
        hit &= self.in_s
        if mode in PRIME_MODES:
            hit &= self.is_prime
        elif mode == "Ndoubleprime":
            for p in self.m.primes:
                hit[::p] = False
        return hit

    def counts(self, mode: str, points: list[int]) -> list[int]:
        csum = np.cumsum(self.members(mode), dtype=np.int64)
        return [int(csum[x]) for x in points]


def predicted_exponent(g: Base, m: FactoredInteger, mode: str) -> Optional[Fraction]:
    if mode == "N":
        return gamma_min(g, m) if m.value > 1 else None
    if mode in ("Nprime", "Ndoubleprime"):
        return 1 - delta_prime(g, m)
    if mode == "P":
        return delta(g, m)
    return delta_prime(g, m)


def count_series(g, m: IntLike, x: int, mode: str = "N", checkpoints: int = 1,
                 threads: int = 1, segment: int = DEFAULT_SEGMENT) -> CountTable:
    g, m = as_base(g), as_factored(m)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    sv = OrderSieve(g, m, x, primes_only=mode in PRIME_MODES, threads=threads, segment=segment)
    points = checkpoint_grid(int(x), checkpoints)
    return CountTable(g, m, mode, list(zip(points, sv.counts(mode, points))), predicted_exponent(g, m, mode))


def naive_count(g, m: IntLike, x: int, mode: str) -> int:
    """Reference count by computing every order directly."""
    from .arith import is_prime

    g, m = as_base(g), as_factored(m)
    total = 0
    for u in range(1, x + 1):
        if not g.in_S(u):
            continue
        if mode in PRIME_MODES and not is_prime(u):
            continue
        if mode == "Ndoubleprime" and any(u % p == 0 for p in m.primes):
            continue
        o = multiplicative_order(g, u)
        divides = [o % (p**e) == 0 for p, e in m.factors]
        if mode == "N":
            total += not all(divides)
        elif mode == "P":
            total += all(divides)
        else:
            total += not any(divides)
    return total


def prime_count(x: int) -> int:
    return int(sum(len(primes_in(lo, hi, base_primes(isqrt(x) + 1))) for lo, hi in segments(x, DEFAULT_SEGMENT)))


# -- identity checks -----------------------------------------------------------

def _signed_sum(terms: list[int]) -> str:
    out = str(terms[0])
    for t in terms[1:]:
        out += f" - {-t}" if t < 0 else f" + {t}"
    return out


def verify_lemma2(g, m: IntLike, x: int, checkpoints: int = 10, threads: int = 1) -> Report:
    """N(x;g,m) against -sum over unitary d > 1 of mu(kappa(d)) N'(x;g,d)."""
    g, m = as_base(g), as_factored(m)
    if m.value < 2:
        raise ValueError("need m >= 2")
    lhs = count_series(g, m, x, "N", checkpoints, threads)
    parts = []
    for d in unitary_divisors(m):
        if d.value > 1:
            t = count_series(g, d, x, "Nprime", checkpoints, threads)
            parts.append((-mobius(kappa(d)), d.value, [c for _, c in t.checkpoints]))
    rows = []
    for i, (xi, left) in enumerate(lhs.checkpoints):
        terms = [sign * counts[i] for sign, _, counts in parts]
        rows.append({"x": xi, "lhs": left, "rhs": sum(terms), "terms": terms,
                     "expression": f"{left} = {_signed_sum(terms)}", "pass": left == sum(terms)})
    return Report("counting-identity", all(r["pass"] for r in rows), rows)


def verify_prime_inclusion_exclusion(g, d: IntLike, x: int, checkpoints: int = 1, threads: int = 1) -> Report:
    """P'(x;g,d) sieved directly against sum over unitary j of mu(kappa(j)) P_g(j)(x)."""
    g, d = as_base(g), as_factored(d)
    if d.value < 2:
        raise ValueError("need d >= 2")
    direct = count_series(g, d, x, "Pprime", checkpoints, threads)
    parts = [(mobius(kappa(j)), count_series(g, j, x, "P", checkpoints, threads)) for j in unitary_divisors(d)]
    rows = []
    for i, (xi, left) in enumerate(direct.checkpoints):
        right = sum(mu * t.checkpoints[i][1] for mu, t in parts)
        rows.append({"x": xi, "lhs": left, "rhs": right, "pass": left == right})
    return Report("prime-inclusion-exclusion", all(r["pass"] for r in rows), rows)


def _coprime_member(g: Base, m: FactoredInteger, u: int) -> bool:
    o = multiplicative_order(g, u)
    return all(o % (p**e) for p, e in m.factors)


def check_complete_multiplicativity(g, m: IntLike, x: int, trials: int, seed: int = 0) -> Report:
    """Random check that the N'' set is closed under products and factors."""
    import random
    from math import exp, gcd, log

    g, m = as_base(g), as_factored(m)
    rng = random.Random(seed)
    forbidden = m.value * g.g0_num.value * g.g0_den.value
    rows, done = [], 0
    while done < trials:
        u = min(x, max(1, int(exp(rng.uniform(0, log(x))))))
        v = rng.randint(1, x // u)
        if gcd(u * v, forbidden) != 1:
            continue
        done += 1
        mu, mv, muv = (_coprime_member(g, m, w) for w in (u, v, u * v))
        if muv != (mu and mv):
            rows.append({"u": u, "v": v, "member_u": mu, "member_v": mv, "member_uv": muv})
    return Report("complete-multiplicativity", not rows, rows)


def congruence_characterization(g, d: IntLike, x: int) -> Report:
    """For squarefree d: g^(d y) = g (mod p) solvable iff p is counted by P'(x;g,d)."""
    g, d = as_base(g), as_factored(d)
    if d.value < 2 or mobius(d) == 0:
        raise ValueError(f"d must be squarefree and >= 2, got {d.value}")
    if x > 10**5:
        raise ValueError("brute-force congruence check is limited to x <= 10**5")
    sv = OrderSieve(g, d, x, primes_only=True)
    counted = sv.members("Pprime")
    rows = []
    for p in np.flatnonzero(sv.is_prime & sv.in_s).tolist():
        a = g.residue(p)
        step = pow(a, d.value, p)
        o = multiplicative_order(g, p)
        cur, solvable = 1, False
        for _ in range(o):
            if cur == a:
                solvable = True
                break
            cur = cur * step % p
        if solvable != bool(counted[p]):
            rows.append({"p": p, "solvable": solvable, "counted": bool(counted[p])})
    return Report("congruence", not rows, rows)


# -- diagnostics ---------------------------------------------------------------

def logarithmic_integral(x: float) -> float:
    """Principal-value li(x) = integral from 0 to x of dt/log t."""
    if x < 2:
        raise ValueError(f"li is only provided for x >= 2, got {x}")
    return float(expi(np.log(x)))


def normalized_series(table: CountTable) -> list[tuple[int, float]]:
    """count / (density * li(x)) for prime modes, count * log(x)^exponent / x otherwise."""
    out = []
    e = table.predicted_exponent
    for x, c in table.checkpoints:
        if x < 2 or e is None:
            continue
        if table.mode in PRIME_MODES:
            out.append((x, c / (float(e) * logarithmic_integral(x))))
        else:
            out.append((x, c * np.log(x) ** float(e) / x))
    return out


def table_rows(table: CountTable) -> list[dict]:
    norm = dict(normalized_series(table))
    exp = render(table.predicted_exponent) if table.predicted_exponent is not None else "nan"
    return [{"x": x, "count": c, "predicted_exponent": exp, "normalized": norm.get(x, float("nan"))}
            for x, c in table.checkpoints]


def write_tsv(table: CountTable, fh) -> None:
    fh.write("x\tcount\tpredicted_exponent\tnormalized\n")
    for r in table_rows(table):
        fh.write(f"{r['x']}\t{r['count']}\t{r['predicted_exponent']}\t{r['normalized']:.6f}\n")
