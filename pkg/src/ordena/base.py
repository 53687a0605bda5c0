"""Rational bases g = sign * g0^h with g0 > 0 not a perfect power."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from functools import reduce

from .arith import FactoredInteger, IntLike, as_factored, factorize

_GRAMMAR = "[-] INT [/ INT] [^ INT]"
_BASE_RE = re.compile(r"^\s*(-)?\s*(\d+)\s*(?:/\s*(\d+)\s*)?(?:\^\s*(\d+)\s*)?$")


class InvalidBase(ValueError):
    pass


class DegenerateField(ValueError):
    pass


@dataclass(frozen=True)
class Base:
    sign: int
    g0_num: FactoredInteger
    g0_den: FactoredInteger
    h: int
    disc: int = field(init=False)
    tau1: int = field(init=False)
    tau2: int = field(init=False)

    def __post_init__(self):
        if self.sign not in (1, -1) or self.h < 1:
            raise InvalidBase(f"bad sign/exponent: {self.sign}, {self.h}")
        if self.g0_num.value == self.g0_den.value:
            raise InvalidBase("base must not be 0, 1 or -1")
        if gcd(self.g0_num.value, self.g0_den.value) != 1:
            raise InvalidBase("g0 must be in lowest terms")
        exps = [e for _, e in self.g0_num.factors + self.g0_den.factors]
        if reduce(gcd, exps, 0) != 1:
            raise InvalidBase("g0 must not be a perfect power")
        disc = discriminant(self.g0_num, self.g0_den)
        t1 = 1 if disc == 8 else 0
        object.__setattr__(self, "disc", disc)
        object.__setattr__(self, "tau1", t1)
        object.__setattr__(self, "tau2", t1 + (1 - self.sign) // 2)

    @property
    def g0(self) -> Fraction:
        return Fraction(self.g0_num.value, self.g0_den.value)

    @property
    def numerator(self) -> FactoredInteger:
        """Numerator of |g| (materializes g0_num^h)."""
        return FactoredInteger.from_factors((p, e * self.h) for p, e in self.g0_num.factors)

    @property
    def denominator(self) -> FactoredInteger:
        return FactoredInteger.from_factors((p, e * self.h) for p, e in self.g0_den.factors)

    @property
    def bad_primes(self) -> tuple[int, ...]:
        return tuple(sorted(self.g0_num.primes + self.g0_den.primes))

    def value(self) -> Fraction:
        return self.sign * self.g0**self.h

    def in_S(self, u: int) -> bool:
        return gcd(int(u), self.g0_num.value * self.g0_den.value) == 1

    def residue(self, u: int) -> int:
        """g mod u for u in S(g), without expanding g0^h."""
        if u == 1:
            return 0
        r = pow(self.g0_num.value, self.h, u) * pow(self.g0_den.value, -self.h, u)
        return self.sign * r % u

    def __str__(self) -> str:
        s = "-" if self.sign < 0 else ""
        s += str(self.g0_num.value)
        if self.g0_den.value != 1:
            s += f"/{self.g0_den.value}"
        if self.h != 1:
            s += f"^{self.h}"
        return s


def discriminant(g0_num: IntLike, g0_den: IntLike = 1) -> int:
    """Discriminant of Q(sqrt(g0)) for a positive rational g0."""
    num, den = as_factored(g0_num), as_factored(g0_den)
    k = 1
    for p, e in num.factors + den.factors:
        if e % 2:
            k *= p
    if k == 1:
        raise DegenerateField(f"{num}/{den} is a rational square")
    return k if k % 4 == 1 else 4 * k


def make_base(sign: int, num: int, den: int = 1, exp: int = 1) -> Base:
    if num == 0 or exp == 0:
        raise InvalidBase("base must not be 0, 1 or -1")
    if den == 0:
        raise InvalidBase("zero denominator")
    c = gcd(num, den)
    num, den = num // c, den // c
    if num == den:
        raise InvalidBase("base must not be 0, 1 or -1")
    fn, fd = factorize(num), factorize(den)
    k = reduce(gcd, [e for _, e in fn.factors + fd.factors], 0)
    root_n = FactoredInteger.from_factors((p, e // k) for p, e in fn.factors)
    root_d = FactoredInteger.from_factors((p, e // k) for p, e in fd.factors)
    return Base(sign, root_n, root_d, k * exp)


def parse_base(text: str) -> Base:
    m = _BASE_RE.match(text)
    if not m:
        raise InvalidBase(f"cannot parse base {text!r}; expected {_GRAMMAR}")
    sign = -1 if m.group(1) else 1
    num = int(m.group(2))
    den = int(m.group(3)) if m.group(3) else 1
    exp = int(m.group(4)) if m.group(4) else 1
    return make_base(sign, num, den, exp)


def as_base(g) -> Base:
    if isinstance(g, Base):
        return g
    if isinstance(g, str):
        return parse_base(g)
    if isinstance(g, int):
        return make_base(1 if g > 0 else -1, abs(g))
    if isinstance(g, Fraction):
        return make_base(1 if g > 0 else -1, abs(g.numerator), g.denominator)
    raise TypeError(f"cannot interpret {g!r} as a base")


def tau(g) -> tuple[int, int]:
    g = as_base(g)
    return g.tau1, g.tau2


def in_S(g, u: int) -> bool:
    return as_base(g).in_S(u)
