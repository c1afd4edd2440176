"""Windows onto series sum_i w_i T^i with coefficients in K.

A window is either ``polynomial`` (every coefficient outside the window is
zero, so the window *is* the element) or ``truncated`` (nothing is claimed
outside the window). A truncated window may also record, per index, a degree
bound P: the stored coefficient is then only correct modulo terms of total
degree >= P.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .poly import ONE, ZERO, Poly, mono_deg

POLYNOMIAL = "polynomial"
TRUNCATED = "truncated"

WINDOW_ENV = "NERON_ALIGN_WINDOW"


def default_span(width: int) -> int:
    """Indices to examine on each side; NERON_ALIGN_WINDOW overrides 10 * width."""
    env = os.environ.get(WINDOW_ENV)
    if env:
        return max(1, int(env))
    return max(10, 10 * width)


@dataclass(frozen=True)
class LaurentWindow:
    coeffs: Mapping[int, Poly]
    window: tuple[int, int]
    r: Poly
    kind: str = POLYNOMIAL
    precision: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.window
        if lo > hi:
            raise ValueError("window must satisfy i_min <= i_max")
        if self.kind not in (POLYNOMIAL, TRUNCATED):
            raise ValueError(f"unknown window kind {self.kind!r}")
        clean = {}
        for i, c in self.coeffs.items():
            if not lo <= i <= hi:
                raise ValueError(f"coefficient index {i} lies outside the window {self.window}")
            if c:
                clean[int(i)] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "precision", {int(i): int(p) for i, p in self.precision.items()})
        if self.precision and self.kind == POLYNOMIAL:
            raise ValueError("a polynomial window has exact coefficients")

    # -- construction ----------------------------------------------------

    @classmethod
    def polynomial(cls, coeffs: Mapping[int, Poly], r: Poly, window: tuple[int, int] | None = None):
        nz = [i for i, c in coeffs.items() if c]
        if window is None:
            window = (min(nz), max(nz)) if nz else (0, 0)
        return cls(dict(coeffs), window, r)

    @classmethod
    def image(cls, terms: Mapping[tuple[int, int], Poly], r: Poly) -> "LaurentWindow":
        """T-image of sum c_{n,m} x^n y^m under x -> T, y -> r/T."""
        acc: dict[int, Poly] = {}
        for (n, m), c in terms.items():
            if n < 0 or m < 0:
                raise ValueError("exponents of x and y must be nonnegative")
            acc[n - m] = acc.get(n - m, ZERO) + c * r ** m
        return cls.polynomial(acc, r)

    # -- access ------------------------------------------------------------

    @property
    def is_polynomial(self) -> bool:
        return self.kind == POLYNOMIAL

    def coeff(self, i: int) -> Poly:
        lo, hi = self.window
        if lo <= i <= hi or self.is_polynomial:
            return self.coeffs.get(i, ZERO)
        raise IndexError(f"index {i} is outside the truncated window {self.window}")

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def is_exact_at(self, i: int) -> bool:
        return i not in self.precision

    @property
    def base_variables(self) -> frozenset[str]:
        out = set(self.r.variables())
        for c in self.coeffs.values():
            out |= c.variables()
        return frozenset(out)

    def width(self) -> int:
        if not self.is_polynomial:
            raise ValueError("width is only defined for polynomial-type windows")
        s = self.support()
        return s[-1] - s[0] if s else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation_at(self, i: int, var: str) -> tuple[int | None, bool]:
        """(v(w_i), exact). None means zero (or, when inexact, nothing known)."""
        c = self.coeff(i)
        if i not in self.precision:
            return c.valuation(var), True
        # the unknown tail only has terms of total degree >= P; that pins the
        # valuation down only when var is the sole base variable
        if c and self.base_variables <= {var}:
            return c.valuation(var), True
        return (c.valuation(var) if c else None), False

    def valuation_floor(self, i: int, var: str) -> int | None:
        """A lower bound for v(w_i) when it is not known exactly (None: no bound)."""
        val, exact = self.valuation_at(i, var)
        if exact:
            return val
        if self.base_variables <= {var} and not self.coeff(i):
            return self.precision[i]
        return None

    def points(self, var: str, lo: int | None = None, hi: int | None = None) -> list[tuple[int, int]]:
        """(i, v(w_i)) for the exactly known nonzero coefficients in [lo, hi]."""
        a, b = self.window
        lo = a if lo is None else max(lo, a)
        hi = b if hi is None else min(hi, b)
        out = []
        for i in range(lo, hi + 1):
            val, exact = self.valuation_at(i, var)
            if exact and val is not None:
                out.append((i, val))
        return out

    # -- arithmetic ----------------------------------------------------------

    def shift(self, k: int) -> "LaurentWindow":
        lo, hi = self.window
        return LaurentWindow(
            {i + k: c for i, c in self.coeffs.items()},
            (lo + k, hi + k),
            self.r,
            self.kind,
            {i + k: p for i, p in self.precision.items()},
        )

    def scale_T(self, var: str, d: int) -> "LaurentWindow":
        """Substitute T -> var^d * T."""
        return LaurentWindow(
            {i: c * Poly.var(var, d * i) for i, c in self.coeffs.items()},
            self.window,
            self.r,
            self.kind,
            {i: p + d * i for i, p in self.precision.items()},
        )

    def scale(self, c: Poly) -> "LaurentWindow":
        if not self.is_polynomial and not c.is_monomial():
            raise ValueError("truncated windows may only be scaled by monomials")
        shift = mono_deg(next(iter(c.items()))[0]) if c.is_monomial() else 0
        return LaurentWindow(
            {i: w * c for i, w in self.coeffs.items()},
            self.window,
            self.r,
            self.kind,
            {i: p + shift for i, p in self.precision.items()},
        )

    def __mul__(self, other: "LaurentWindow") -> "LaurentWindow":
        """Product with a polynomial-type window (the K[T]-module action)."""
        if not other.is_polynomial and not self.is_polynomial:
            raise ValueError("at least one factor must be polynomial-type")
        if not self.is_polynomial:
            return other * self
        f, g = self, other
        if g.is_polynomial:
            acc: dict[int, Poly] = {}
            for i, a in f.coeffs.items():
                for j, b in g.coeffs.items():
                    acc[i + j] = acc.get(i + j, ZERO) + a * b
            return LaurentWindow.polynomial(acc, f.r)
        return product_window(f, g)

    def to_json(self) -> dict:
        out = {
            "r": self.r.to_json(),
            "coeffs": {str(i): c.to_json() for i, c in sorted(self.coeffs.items())},
            "window": list(self.window),
        }
        if not self.is_polynomial:
            out["kind"] = self.kind
        if self.precision:
            out["precision"] = {str(i): p for i, p in sorted(self.precision.items())}
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentWindow":
        return cls(
            {int(i): Poly.from_json(c) for i, c in data["coeffs"].items()},
            tuple(data["window"]),
            Poly.from_json(data["r"]),
            data.get("kind", POLYNOMIAL),
            {int(i): int(p) for i, p in data.get("precision", {}).items()},
        )


def product_window(f: LaurentWindow, g: LaurentWindow) -> LaurentWindow:
    """f * g for polynomial f and truncated g, on the indices where every needed g_j is in g's window.

    Each output coefficient carries the degree bound below which it is exact.
    """
    lo, hi = g.window
    fs = f.support()
    if not fs:
        return LaurentWindow({}, g.window, g.r, TRUNCATED)
    out_lo, out_hi = lo + fs[-1], hi + fs[0]
    if out_lo > out_hi:
        raise ValueError("window too small to determine any coefficient of the product")
    coeffs: dict[int, Poly] = {}
    prec: dict[int, int] = {}
    for M in range(out_lo, out_hi + 1):
        acc = ZERO
        bound = None
        for j in fs:
            a = f.coeffs[j]
            acc = acc + a * g.coeff(M - j)
            if (M - j) in g.precision:
                b = g.precision[M - j] + a.degree()
                bound = b if bound is None else min(bound, b)
        if bound is not None:
            acc = acc.truncate(bound)
            prec[M] = bound
        coeffs[M] = acc
    return LaurentWindow(coeffs, (out_lo, out_hi), g.r, TRUNCATED, prec)


def delta_check(w: LaurentWindow) -> tuple[bool, int]:
    """Does w equal 1 (= T^0) on its window, modulo recorded precision? Returns (ok, indices checked)."""
    lo, hi = w.window
    for i in range(lo, hi + 1):
        target = ONE if i == 0 else ZERO
        diff = w.coeff(i) - target
        if i in w.precision:
            diff = diff.truncate(w.precision[i])
        if diff:
            return False, hi - lo + 1
    return True, hi - lo + 1


def from_terms(terms: Iterable[tuple[int, Poly]], r: Poly) -> LaurentWindow:
    acc: dict[int, Poly] = {}
    for i, c in terms:
        acc[i] = acc.get(i, ZERO) + c
    return LaurentWindow.polynomial(acc, r)
