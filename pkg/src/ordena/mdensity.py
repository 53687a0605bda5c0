"""Density of integers m whose prime-power blocks carry no density coincidence."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .base import as_base
from .coincidence import CoincidenceQuadruple, coincidence_search

SEGMENT = 1 << 22


@dataclass(frozen=True)
class ValuationPattern:
    constraints: tuple[tuple[int, int], ...]
    source: CoincidenceQuadruple | None = None

    def __post_init__(self):
        primes = [p for p, _ in self.constraints]
        if len(set(primes)) != len(primes) or any(k < 1 for _, k in self.constraints):
            raise ValueError(f"bad pattern {self.constraints}")

    def matches(self, m: int) -> bool:
        for p, k in self.constraints:
            v = 0
            while m % p == 0:
                m //= p
                v += 1
            if v != k:
                return False
        return True


def coincidence_patterns(g, pmax: int = 50, emax: int = 10) -> list[ValuationPattern]:
    return [
        ValuationPattern(((c.p1, c.e1), (c.p2, c.e2)), c)
        for c in coincidence_search(as_base(g), pmax, emax)
    ]


def _prime_caps(patterns) -> dict[int, int]:
    caps: dict[int, int] = {}
    for pat in patterns:
        for p, k in pat.constraints:
            caps[p] = max(caps.get(p, 0), k + 1)
    return caps


def pattern_density(patterns: list[ValuationPattern]) -> Fraction:
    """Density of m matching at least one pattern, by enumerating the joint
    distribution of capped valuations (the last state of each prime absorbs
    all larger valuations)."""
    if not patterns:
        return Fraction(0)
    caps = _prime_caps(patterns)
    primes = sorted(caps)
    dists = []
    for p in primes:
        probs = [Fraction(p - 1, p) / Fraction(p) ** k for k in range(caps[p])]
        probs.append(1 / Fraction(p) ** caps[p])
        dists.append(probs)
    bad = Fraction(0)
    for state in product(*(range(caps[p] + 1) for p in primes)):
        val = dict(zip(primes, state))
        if any(all(val[p] == k for p, k in pat.constraints) for pat in patterns):
            w = Fraction(1)
            for i, s in enumerate(state):
                w *= dists[i][s]
            bad += w
    return bad


def _exact_valuation_density(p: int, k: int) -> Fraction:
    return Fraction(p - 1, p) / Fraction(p) ** k


def pattern_density_ie(patterns: list[ValuationPattern]) -> Fraction:
    """Same quantity by inclusion-exclusion over subsets of patterns."""
    total = Fraction(0)
    for r in range(1, len(patterns) + 1):
        for subset in combinations(patterns, r):
            need: dict[int, int] = {}
            ok = True
            for pat in subset:
                for p, k in pat.constraints:
                    if need.setdefault(p, k) != k:
                        ok = False
            if not ok:
                continue
            w = Fraction(1)
            for p, k in need.items():
                w *= _exact_valuation_density(p, k)
            total += (-1) ** (r + 1) * w
    return total


def unique_pattern_density(g) -> Fraction:
    """Density of m with no coincident pair of exact valuations.

    Requiring only that the minimum over blocks is attained once gives
    density 1 (a tie pins every prime of m below a fixed bound), so the
    pairwise event is the informative one."""
    return 1 - pattern_density(coincidence_patterns(g))


def _scan_segment(patterns, caps, lo: int, hi: int) -> int:
    m = np.arange(lo, hi, dtype=np.int64)
    vals = {}
    for p, cap in caps.items():
        v = np.zeros(hi - lo, dtype=np.int8)
        pk = p
        for _ in range(cap):
            v += (m % pk == 0)
            pk *= p
        vals[p] = v
    bad = np.zeros(hi - lo, dtype=bool)
    for pat in patterns:
        hit = np.ones(hi - lo, dtype=bool)
        for p, k in pat.constraints:
            hit &= vals[p] == k
        bad |= hit
    return int(bad.sum())


def scan_bad(g, limit: int, threads: int = 1, segment: int = SEGMENT) -> int:
    """Count m <= limit matching some coincidence pattern of g."""
    if limit > 10**9:
        raise ValueError("scan limit is capped at 10**9")
    patterns = coincidence_patterns(g)
    if not patterns or limit < 1:
        return 0
    caps = _prime_caps(patterns)
    bounds = [(lo, min(lo + segment, limit + 1)) for lo in range(1, limit + 1, segment)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return sum(pool.map(lambda b: _scan_segment(patterns, caps, *b), bounds))
