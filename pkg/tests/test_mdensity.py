from fractions import Fraction as F

import pytest

from ordena.base import parse_base
from ordena.mdensity import (
    ValuationPattern,
    coincidence_patterns,
    pattern_density,
    pattern_density_ie,
    scan_bad,
    unique_pattern_density,
)

EXPECTED = F(147497571941, 147916692000)
TWO_PATTERNS = [((2, 4), (3, 3)), ((2, 4), (5, 2)), ((2, 5), (7, 2)), ((3, 3), (5, 2)), ((5, 3), (11, 2))]


def test_patterns_for_two():
    assert [p.constraints for p in coincidence_patterns(parse_base("2"))] == TWO_PATTERNS


@pytest.mark.parametrize("g, pats", [("3^8000", []), ("3^4000", [((2, 1), (7, 2))])])
def test_patterns_examples(g, pats):
    assert [p.constraints for p in coincidence_patterns(parse_base(g))] == pats


def test_unique_density():
    assert unique_pattern_density(parse_base("2")) == EXPECTED


def test_unique_density_expansion():
    pairs = F(1, 1296) + F(1, 1000) + F(8, 10125) + F(3, 10976) + F(8, 166375)
    overlaps = 2 * F(1, 40500) + F(1, 26952750) + F(1, 4630500) + F(3, 10976) * F(8, 166375)
    assert 1 - (pairs - overlaps) == EXPECTED


def test_density_denominator():
    bad = 1 - EXPECTED
    assert (2**6 * 3**4 * 5**4 * 7**3 * 11**3) % bad.denominator == 0


def test_enumeration_matches_inclusion_exclusion():
    pats = coincidence_patterns(parse_base("2"))
    assert pattern_density(pats) == pattern_density_ie(pats)
    pats = coincidence_patterns(parse_base("3^4000"))
    assert pattern_density(pats) == pattern_density_ie(pats)


def test_single_pattern():
    pat = ValuationPattern(((2, 4), (3, 3)))
    assert 1 - pattern_density([pat]) == 1 - F(1, 32) * F(2, 81) == 1 - F(1, 1296)


@pytest.mark.parametrize("g, v", [("3^8000", F(1)), ("3^4000", F(683, 686))])
def test_unique_density_examples(g, v):
    assert unique_pattern_density(parse_base(g)) == v


def test_muller_iff_density_one():
    for g in ("2", "3", "-2", "10", "3^4000", "3^8000", "2^4000", "-2^2000", "5^125"):
        b = parse_base(g)
        assert (unique_pattern_density(b) == 1) == (not coincidence_patterns(b))


def test_pattern_validation():
    with pytest.raises(ValueError):
        ValuationPattern(((2, 1), (2, 3)))


def test_scan_small():
    two = parse_base("2")
    assert scan_bad(two, 100) == 0
    assert scan_bad(two, 399) == 0
    assert scan_bad(two, 432) == 2  # 2^4 * 5^2 and 2^4 * 3^3
    assert scan_bad(parse_base("3^8000"), 10**6) == 0


def test_scan_matches_pattern_test():
    two = parse_base("2")
    pats = coincidence_patterns(two)
    brute = sum(any(p.matches(m) for p in pats) for m in range(1, 200_001))
    assert scan_bad(two, 200_000, segment=7919) == brute


@pytest.mark.parametrize("n", [10**5, 10**6])
def test_scan_converges(n):
    got = scan_bad(parse_base("2"), n)
    assert abs(got / n - (1 - EXPECTED)) <= 10 / n**0.5


def test_scan_thread_invariance():
    two = parse_base("2")
    assert scan_bad(two, 10**6, threads=1) == scan_bad(two, 10**6, threads=4, segment=1 << 17)
