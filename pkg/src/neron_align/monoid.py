"""Labels as monomials in a free commutative monoid, and cyclic submonoids of N0 x N0.

A label stands for a principal ideal of a regular local ring up to units, so it
is determined by one exponent per height-one prime (here: per named generator).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

from .errors import EmptyInput, UnitLabel

__all__ = [
    "Label",
    "CyclicMonoidN2",
    "label_mul",
    "proportional",
    "saturation",
    "common_relation",
]


@dataclass(frozen=True, order=True)
class Label:
    """Exponent vector over named generators; zero exponents are never stored."""

    items: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        for name, exp in self.items:
            if not isinstance(exp, int) or isinstance(exp, bool) or exp < 1:
                raise ValueError(f"label exponent for {name!r} must be a positive int, got {exp!r}")
        names = [n for n, _ in self.items]
        if names != sorted(set(names)):
            raise ValueError("label items must be sorted by generator with no repeats")

    @classmethod
    def of(cls, mapping: Mapping[str, int] | None = None, **kwargs: int) -> "Label":
        merged: dict[str, int] = dict(mapping or {})
        merged.update(kwargs)
        return cls(tuple(sorted((g, e) for g, e in merged.items() if e != 0)))

    @classmethod
    def gen(cls, name: str, exp: int = 1) -> "Label":
        return cls.of({name: exp})

    @property
    def exponents(self) -> dict[str, int]:
        return dict(self.items)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.items)

    def is_unit(self) -> bool:
        return not self.items

    def exponent(self, name: str) -> int:
        for g, e in self.items:
            if g == name:
                return e
        return 0

    def __mul__(self, other: "Label") -> "Label":
        return label_mul(self, other)

    def __pow__(self, k: int) -> "Label":
        if k < 0:
            raise ValueError("labels form a monoid; negative powers are undefined")
        return Label(tuple((g, e * k) for g, e in self.items)) if k else Label()

    def without(self, names: Iterable[str]) -> "Label":
        drop = set(names)
        return Label(tuple((g, e) for g, e in self.items if g not in drop))

    def primitive(self) -> tuple["Label", int]:
        """Split as root**k with root primitive (gcd of exponents 1)."""
        if not self.items:
            return self, 0
        k = 0
        for _, e in self.items:
            k = gcd(k, e)
        return Label(tuple((g, e // k) for g, e in self.items)), k

    def to_json(self) -> dict[str, int]:
        return dict(self.items)

    def __str__(self) -> str:
        if not self.items:
            return "1"
        return "*".join(g if e == 1 else f"{g}^{e}" for g, e in self.items)


def label_mul(a: Label, b: Label) -> Label:
    acc = dict(a.items)
    for g, e in b.items:
        acc[g] = acc.get(g, 0) + e
    return Label(tuple(sorted(acc.items())))


def proportional(a: Label, b: Label) -> tuple[int, int] | None:
    """Coprime positive (n, n') with a**n == b**n', or None if no such pair exists."""
    if a.is_unit() or b.is_unit():
        raise UnitLabel("proportionality is only defined for non-identity labels")
    if a.support != b.support:
        return None
    ea, eb = a.exponents, b.exponents
    ratio = None
    for g in ea:
        r = Fraction(ea[g], eb[g])
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    # a_g / b_g = n' / n
    return ratio.denominator, ratio.numerator


@dataclass(frozen=True)
class CyclicMonoidN2:
    """The submonoid {k * (m, n) : k >= 0} of N0 x N0."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("generator must lie in N0 x N0")

    @property
    def generator(self) -> tuple[int, int]:
        return (self.m, self.n)

    def is_zero(self) -> bool:
        return self.m == 0 and self.n == 0

    def __contains__(self, point: tuple[int, int]) -> bool:
        p, q = point
        if self.is_zero():
            return p == 0 and q == 0
        # k*(m, n) == (p, q) for a single k >= 0
        if self.m:
            k, rem = divmod(p, self.m)
            return rem == 0 and k >= 0 and k * self.n == q
        return p == 0 and q % self.n == 0 and q >= 0


def saturation(mon: CyclicMonoidN2) -> CyclicMonoidN2:
    g = gcd(mon.m, mon.n)
    if g == 0:
        return mon
    return CyclicMonoidN2(mon.m // g, mon.n // g)


def common_relation(monoids: list[CyclicMonoidN2]) -> tuple[int, int] | None:
    """Smallest nonzero element common to all the monoids, if their saturations agree."""
    if not monoids:
        raise EmptyInput("common_relation needs at least one monoid")
    if any(mon.is_zero() for mon in monoids):
        raise ValueError("every input monoid must be nonzero")
    sat = saturation(monoids[0])
    multiplier = 1
    for mon in monoids:
        if saturation(mon) != sat:
            return None
        k = gcd(mon.m, mon.n)
        multiplier = multiplier * k // gcd(multiplier, k)
    return (sat.m * multiplier, sat.n * multiplier)
