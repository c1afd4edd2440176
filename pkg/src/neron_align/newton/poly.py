"""Sparse Laurent polynomials over Q in named base variables.

These model elements of the coefficient ring R (nonnegative exponents) and of
its fraction field K at desk scale. Arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Mono = tuple[tuple[str, int], ...]

ONE_MONO: Mono = ()


def mono(mapping: Mapping[str, int] | None = None) -> Mono:
    return tuple(sorted((v, e) for v, e in (mapping or {}).items() if e))


def mono_mul(a: Mono, b: Mono) -> Mono:
    acc = dict(a)
    for v, e in b:
        acc[v] = acc.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in acc.items() if e))


def mono_inv(a: Mono) -> Mono:
    return tuple((v, -e) for v, e in a)


def mono_deg(a: Mono) -> int:
    return sum(e for _, e in a)


def mono_exp(a: Mono, var: str) -> int:
    for v, e in a:
        if v == var:
            return e
    return 0


class Poly:
    """Immutable map monomial -> nonzero Fraction."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Mono, Fraction | int] | None = None):
        self._terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def const(cls, c: Fraction | int) -> "Poly":
        return cls({ONE_MONO: c})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "Poly":
        return cls({mono({name: exp}): 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int] | Mono, c: Fraction | int = 1) -> "Poly":
        m = exps if isinstance(exps, tuple) else mono(exps)
        return cls({m: c})

    @property
    def terms(self) -> dict[Mono, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "Poly") -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0) + c
        return Poly(acc)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.const(other) - self

    def __mul__(self, other: "Poly") -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly({m: c * other for m, c in self._terms.items()})
        acc: dict[Mono, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return Poly(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent-polynomial inverses")
            (m, c), = self._terms.items()
            return Poly({mono_mul(ONE_MONO, tuple((v, e * k) for v, e in m)): Fraction(1) / c ** -k})
        out, base = Poly.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure ---------------------------------------------------------

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self._terms for v, _ in m)

    def valuation(self, var: str) -> int | None:
        """Order along ``var`` (least exponent); None for zero."""
        if not self._terms:
            return None
        return min(mono_exp(m, var) for m in self._terms)

    def degree(self) -> int | None:
        """Least total degree of a term; None for zero."""
        if not self._terms:
            return None
        return min(mono_deg(m) for m in self._terms)

    def lowest_form(self) -> "Poly":
        d = self.degree()
        return Poly({m: c for m, c in self._terms.items() if mono_deg(m) == d})

    def truncate(self, bound: int) -> "Poly":
        """Drop every term of total degree >= bound."""
        return Poly({m: c for m, c in self._terms.items() if mono_deg(m) < bound})

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE_MONO, Fraction(0))

    def in_R(self) -> bool:
        return all(e >= 0 for m in self._terms for _, e in m)

    def is_unit_in_R(self) -> bool:
        return self.in_R() and self.constant_term() != 0

    def div_monomial(self, m: Mono, c: Fraction | int = 1) -> "Poly":
        inv = mono_inv(m)
        c = Fraction(c)
        return Poly({mono_mul(k, inv): v / c for k, v in self._terms.items()})

    def divide_exact(self, other: "Poly") -> "Poly":
        """self / other when other is a monomial (the only case needed here)."""
        if not other.is_monomial():
            raise ValueError("exact division is only supported by monomials")
        (m, c), = other._terms.items()
        return self.div_monomial(m, c)

    def divisible_in_R(self, other: "Poly") -> bool:
        """Is self/other an element of R (other a monomial)?"""
        return self.divide_exact(other).in_R()

    # -- wire form ---------------------------------------------------------

    def to_json(self) -> list:
        out = []
        for m, c in sorted(self._terms.items()):
            out.append([dict(m), str(c)])
        return out

    @classmethod
    def from_json(cls, data: Iterable) -> "Poly":
        terms: dict[Mono, Fraction] = {}
        for exps, c in data:
            m = mono({str(k): int(v) for k, v in exps.items()})
            terms[m] = terms.get(m, 0) + Fraction(c)
        return cls(terms)

    def __repr__(self) -> str:
        return f"Poly({str(self)})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in sorted(self._terms.items(), key=lambda mc: (mono_deg(mc[0]), mc[0])):
            mon = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


ZERO = Poly()
ONE = Poly.const(1)
