"""Lower convex hulls, left/right Newton polygons and v-integral lines."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ..errors import EmptyInput, EmptySide
from .series import LaurentWindow

__all__ = [
    "NewtonPolygon",
    "IntegralLine",
    "LineVerdict",
    "hull",
    "np_full",
    "np_right",
    "np_left",
    "integral_line",
    "above_integral_line",
    "slopes_around",
    "asymptotic_slope",
]


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, Fraction], ...]
    slopes: tuple[Fraction, ...]
    bound: int | None = None  # outermost window index the polygon was built from, if truncated

    def faces(self) -> list[tuple[tuple[int, Fraction], tuple[int, Fraction], Fraction]]:
        return [(a, b, s) for a, b, s in zip(self.vertices, self.vertices[1:], self.slopes)]

    def value_at(self, x: Fraction) -> Fraction:
        """Height of the polygon over x (inside its index range)."""
        vs = self.vertices
        if not vs[0][0] <= x <= vs[-1][0]:
            raise ValueError("x lies outside the polygon's index range")
        for (x0, y0), (x1, _), s in self.faces():
            if x0 <= x <= x1:
                return y0 + s * (x - x0)
        return vs[-1][1]

    def has_vertex_at(self, i: int) -> bool:
        return any(x == i for x, _ in self.vertices)

    def to_json(self) -> dict:
        return {
            "vertices": [[x, _q(y)] for x, y in self.vertices],
            "slopes": [_q(s) for s in self.slopes],
            "bound": self.bound,
        }


def _q(x: Fraction) -> str | int:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull(points: Iterable[tuple[int, Fraction | int]], bound: int | None = None) -> NewtonPolygon:
    """Lower convex hull; for repeated indices only the least value matters."""
    best: dict[int, Fraction] = {}
    for x, y in points:
        y = Fraction(y)
        if x not in best or y < best[x]:
            best[x] = y
    if not best:
        raise EmptyInput("hull of an empty point set")
    pts = sorted(best.items())
    lower: list[tuple[int, Fraction]] = []
    for p in pts:
        # drop the middle point unless it makes a strict left turn (strictly convex)
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    slopes = tuple(Fraction(b[1] - a[1], 1) / (b[0] - a[0]) for a, b in zip(lower, lower[1:]))
    return NewtonPolygon(tuple(lower), slopes, bound)


def np_full(w: LaurentWindow, var: str) -> NewtonPolygon:
    pts = w.points(var)
    if not pts:
        raise EmptySide("no exactly known nonzero coefficients")
    return hull(pts, None if w.is_polynomial else w.window[1])


def _side(w: LaurentWindow, var: str, right: bool) -> NewtonPolygon:
    lo, hi = w.window
    if not w.is_polynomial and (hi < 0 if right else lo > 0):
        raise EmptySide(f"window {w.window} has no index on the {'right' if right else 'left'} side")
    pts = w.points(var, lo=0) if right else w.points(var, hi=0)
    bound = None if w.is_polynomial else (hi if right else lo)
    if not pts:
        # every coefficient on this side is zero: the polygon lies at infinity
        return NewtonPolygon((), (), bound)
    return hull(pts, bound)


def np_right(w: LaurentWindow, var: str) -> NewtonPolygon:
    """Hull of the points with index >= 0."""
    return _side(w, var, True)


def np_left(w: LaurentWindow, var: str) -> NewtonPolygon:
    """Hull of the points with index <= 0."""
    return _side(w, var, False)


@dataclass(frozen=True)
class IntegralLine:
    """Horizontal ray right of the origin; ray of gradient -v(r) to its left."""

    var: str
    v_r: int

    def height(self, i: int) -> int:
        return 0 if i >= 0 else -self.v_r * i


def integral_line(w: LaurentWindow, var: str) -> IntegralLine:
    v = w.r.valuation(var)
    if v is None:
        raise ValueError("r must be nonzero")
    return IntegralLine(var, v)


@dataclass(frozen=True)
class LineVerdict:
    """Three-valued answer: holds=True/False; ``conclusive`` says whether the window settles it."""

    holds: bool
    conclusive: bool
    index: int | None = None
    valuation: int | None = None

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "conclusive": self.conclusive,
            "index": self.index,
            "valuation": self.valuation,
        }


def above_integral_line(w: LaurentWindow, var: str) -> LineVerdict:
    """Are all windowed points on or above the v-integral line?

    A point below the line is a definite failure. Success is conclusive only
    for polynomial windows whose coefficients are all known exactly.
    """
    line = integral_line(w, var)
    lo, hi = w.window
    unsure = False
    for i in range(lo, hi + 1):
        val, exact = w.valuation_at(i, var)
        if not exact:
            floor = w.valuation_floor(i, var)
            if val is not None and val < line.height(i):
                # a known term already undercuts the line, and the unknown tail has
                # other total degrees so it cannot cancel that term
                return LineVerdict(False, True, i, val)
            if floor is None or floor < line.height(i):
                unsure = True
            continue
        if val is not None and val < line.height(i):
            return LineVerdict(False, True, i, val)
    return LineVerdict(True, w.is_polynomial and not unsure)


def slopes_around(P: NewtonPolygon, i: int) -> tuple[Fraction | None, Fraction | None]:
    """Gradients just left and just right of the vertex over i (None = no face on that side)."""
    xs = [x for x, _ in P.vertices]
    if i not in xs:
        raise ValueError(f"no vertex over {i}")
    k = xs.index(i)
    left = P.slopes[k - 1] if k > 0 else None
    right = P.slopes[k] if k < len(P.slopes) else None
    return left, right


def asymptotic_slope(points: list[tuple[int, int]], span: int) -> Fraction | None:
    """Gradient of the hull face lying over 3/4 * span, hull taken over the outer half of [0, span].

    Cutting at span/2 discards the transient near the origin; reading the face
    in the middle of what is left ignores the short faces that the window edges
    produce when valuations oscillate. ``points`` must have nonnegative indices;
    mirror them first for the left side. None if fewer than two points lie in range.
    """
    pts = [(i, v) for i, v in points if span <= 2 * i <= 2 * span]
    if len(pts) < 2:
        return None
    P = hull(pts)
    x = Fraction(3 * span, 4)
    for (x0, _), (x1, _), s in P.faces():
        if x0 <= x < x1:
            return s
    return P.slopes[0] if x < P.vertices[0][0] else P.slopes[-1]
