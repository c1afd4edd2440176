"""f-torsion elements of W and the gradients of their infinite Newton-polygon edges."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import UnsupportedCoefficient, WindowTooSmall
from .cinv import fitted_slopes
from .polygon import hull
from .poly import Poly
from .series import TRUNCATED, LaurentWindow, default_span

__all__ = ["torsion_solve", "torsion_slopes", "TorsionSlopes"]


def _as_poly(c) -> Poly:
    return c if isinstance(c, Poly) else Poly.const(c)


def torsion_solve(f: LaurentWindow, seed: Sequence, window: tuple[int, int] | None = None) -> LaurentWindow:
    """The w with f*w = 0 and (w_1, ..., w_d) = seed, d = width(f), on ``window``.

    The relation sum_j f_j w_{M-j} = 0 is solved forwards through the trailing
    coefficient and backwards through the leading one; both must be monomials
    so that the divisions stay exact.
    """
    if not f.is_polynomial or f.is_zero():
        raise ValueError("torsion needs a nonzero polynomial-type f")
    d = f.width()
    if d < 1:
        raise ValueError("f has width 0, so its torsion space is zero")
    if len(seed) != d:
        raise ValueError(f"seed must have width(f) = {d} entries")
    supp = f.support()
    n0, n = supp[0], supp[-1]
    trail, lead = f.coeffs[n0], f.coeffs[n]
    if not (trail.is_monomial() and lead.is_monomial()):
        raise UnsupportedCoefficient("leading and trailing coefficients must be monomials for exact recurrence")
    if window is None:
        span = default_span(d)
        window = (-span, span)
    lo, hi = window
    lo, hi = min(lo, 1), max(hi, d)
    w: dict[int, Poly] = {k + 1: _as_poly(c) for k, c in enumerate(seed)}
    for k in range(d + 1, hi + 1):
        acc = Poly()
        for j in supp[1:]:
            acc = acc - f.coeffs[j] * w[k + n0 - j]
        w[k] = acc.divide_exact(trail)
    for k in range(0, lo - 1, -1):
        acc = Poly()
        for j in supp[:-1]:
            acc = acc - f.coeffs[j] * w[k + n - j]
        w[k] = acc.divide_exact(lead)
    a, b = window
    return LaurentWindow({k: v for k, v in w.items() if a <= k <= b}, window, f.r, TRUNCATED)


@dataclass(frozen=True)
class TorsionSlopes:
    G_r: Fraction | None
    G_l: Fraction | None
    span: int
    f_slopes: tuple[Fraction, ...]

    @property
    def matches_f(self) -> bool:
        return all(g is None or g in self.f_slopes for g in (self.G_r, self.G_l))

    @property
    def ordered(self) -> bool:
        return self.G_r is None or self.G_l is None or self.G_r <= self.G_l

    def to_json(self) -> dict:
        return {
            "G_r": None if self.G_r is None else str(self.G_r),
            "G_l": None if self.G_l is None else str(self.G_l),
            "span": self.span,
            "f_slopes": [str(s) for s in self.f_slopes],
            "matches_f": self.matches_f,
            "ordered": self.ordered,
        }


def torsion_slopes(f: LaurentWindow, seed: Sequence, var: str, span: int | None = None) -> TorsionSlopes:
    """Asymptotic gradients of NP_var(w) on both sides; stable when a doubled window agrees."""
    d = f.width()
    if span is None:
        span = default_span(d)
    if span < 10 * d:
        raise WindowTooSmall(f"span {span} is shorter than 10 * width(f) = {10 * d}")
    w2 = torsion_solve(f, seed, (-2 * span, 2 * span))
    first = fitted_slopes(w2, var, span)
    second = fitted_slopes(w2, var, 2 * span)
    if first != second:
        raise WindowTooSmall(f"slope estimates {first} and {second} disagree after doubling the window")
    G_l, G_r = second
    f_slopes = hull([(i, f.coeffs[i].valuation(var)) for i in f.support()]).slopes
    return TorsionSlopes(G_r, G_l, span, f_slopes)
