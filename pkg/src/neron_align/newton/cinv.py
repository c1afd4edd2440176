"""Crude inverses CInv_N(f) = (f_N T^N)^{-1} sum_i ftilde^i.

At an endpoint of the support with a monomial f_N the inverse is a one-sided
series and its coefficients follow from an exact recurrence. At an interior
corner the sum is genuinely infinite in each coefficient; it is expanded in
the grading phi(c T^k) = deg(c) - Lam * k, which is positive on every term of
ftilde once Lam is strictly between the two gradients of the total-degree
polygon at N. Terms with phi >= phi_max are dropped, so coefficient K is exact
below total degree phi_max + Lam * (K + N) - deg(mu), and that bound is
recorded in the result.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from ..errors import NoCorner, UnsupportedCoefficient
from .polygon import NewtonPolygon, asymptotic_slope, hull, slopes_around
from .poly import ONE_MONO, Mono, Poly, mono_deg, mono_inv, mono_mul
from .series import TRUNCATED, LaurentWindow, default_span, product_window, delta_check

__all__ = [
    "CrudeInverse",
    "crude_inverse",
    "crude_inverse_slopes",
    "verify_inverse",
    "fitted_slopes",
]


def _valuation_points(f: LaurentWindow, var: str | None) -> list[tuple[int, int]]:
    if var is None:
        return [(i, 0) for i in f.support()]
    return [(i, f.coeffs[i].valuation(var)) for i in f.support()]


def _degree_points(f: LaurentWindow) -> list[tuple[int, int]]:
    return [(i, f.coeffs[i].degree()) for i in f.support()]


def _check_corner(f: LaurentWindow, N: int) -> None:
    if not f.is_polynomial:
        raise ValueError("crude inverses are taken of finite-width (polynomial-type) elements")
    if not f.coeff(N):
        raise NoCorner(f"f has no coefficient over T^{N}")
    vars_ = sorted(f.base_variables) or [None]
    for var in vars_:
        P = hull(_valuation_points(f, var))
        if not P.has_vertex_at(N):
            raise NoCorner(f"the Newton polygon for {var or 'the trivial valuation'} has no corner over T^{N}")


def crude_inverse_slopes(f: LaurentWindow, N: int, var: str) -> tuple[Fraction | None, Fraction | None]:
    """(G_l, G_r): gradients of NP_var(f) just left and right of the corner at N; None = infinite."""
    _check_corner(f, N)
    return slopes_around(hull(_valuation_points(f, var)), N)


@dataclass(frozen=True)
class CrudeInverse:
    series: LaurentWindow
    N: int
    method: str
    lam: Fraction | None = None
    phi_max: Fraction | None = None

    def to_json(self) -> dict:
        out = {"N": self.N, "method": self.method, "series": self.series.to_json()}
        if self.lam is not None:
            out["lambda"] = str(self.lam)
            out["phi_max"] = str(self.phi_max)
        return out


def _recurrence(f: LaurentWindow, N: int, window: tuple[int, int]) -> LaurentWindow:
    supp = f.support()
    fN = f.coeffs[N]
    lo, hi = window
    g: dict[int, Poly] = {}
    if N == supp[0]:
        # g is supported on indices >= -N
        start = -N
        for K in range(start, hi + 1):
            acc = Poly.const(1) if K == start else Poly()
            for j in supp[1:]:
                prev = K - (j - N)
                if prev >= start:
                    acc = acc - f.coeffs[j] * g[prev]
            g[K] = acc.divide_exact(fN)
    else:
        start = -N
        for K in range(start, lo - 1, -1):
            acc = Poly.const(1) if K == start else Poly()
            for j in supp[:-1]:
                prev = K - (j - N)
                if prev <= start:
                    acc = acc - f.coeffs[j] * g[prev]
            g[K] = acc.divide_exact(fN)
    return LaurentWindow({K: c for K, c in g.items() if lo <= K <= hi}, window, f.r, TRUNCATED)


def _lambda(P: NewtonPolygon, N: int) -> Fraction:
    left, right = slopes_around(P, N)
    if left is None and right is None:
        return Fraction(0)
    if left is None:
        return right - 1
    if right is None:
        return left + 1
    return (left + right) / 2


def _min_phi(terms: dict[int, Fraction], targets: range, reach: int) -> dict[int, Fraction]:
    """Least phi of a product of ftilde-terms landing on each pre-shift index (Dijkstra)."""
    lo, hi = targets.start - reach, targets.stop - 1 + reach
    dist = {0: Fraction(0)}
    heap = [(Fraction(0), 0)]
    while heap:
        d, k = heapq.heappop(heap)
        if d > dist.get(k, d):
            continue
        for step, cost in terms.items():
            j = k + step
            if step == 0 or not lo <= j <= hi:
                continue
            nd = d + cost
            if nd < dist.get(j, nd + 1):
                dist[j] = nd
                heapq.heappush(heap, (nd, j))
    return {k: dist[k] for k in targets if k in dist}


def _expansion(f: LaurentWindow, N: int, window: tuple[int, int], extra: Fraction | None):
    fN = f.coeffs[N]
    low = fN.lowest_form()
    if not low.is_monomial():
        raise UnsupportedCoefficient(
            f"the lowest-degree part of f_{N} is not a single monomial; cannot expand its inverse"
        )
    (mu, c), = low.items()
    degP = hull(_degree_points(f))
    if not degP.has_vertex_at(N):
        raise UnsupportedCoefficient(f"the total-degree polygon of f has no corner over T^{N}")
    lam = _lambda(degP, N)
    inv_mu = mono_inv(mu)
    # ftilde' = 1 - f / (c mu T^N), as a dict (index, monomial) -> coefficient
    ft: dict[tuple[int, Mono], Fraction] = {}
    for j, coeff in f.coeffs.items():
        for m, a in coeff.items():
            key = (j - N, mono_mul(m, inv_mu))
            ft[key] = ft.get(key, 0) - a / c
    ft[(0, ONE_MONO)] = ft.get((0, ONE_MONO), 0) + 1
    ft = {k: v for k, v in ft.items() if v}

    def phi(k: int, m: Mono) -> Fraction:
        return mono_deg(m) - lam * k

    assert all(phi(k, m) > 0 for k, m in ft)
    cheapest: dict[int, Fraction] = {}
    for k, m in ft:
        p = phi(k, m)
        if k not in cheapest or p < cheapest[k]:
            cheapest[k] = p
    lo, hi = window
    targets = range(lo + N, hi + N + 1)
    reach = max(abs(k) for k in cheapest) if cheapest else 0
    dist = _min_phi(cheapest, targets, reach)
    if extra is None:
        extra = max(cheapest.values()) if cheapest else Fraction(1)
    phi_max = (max(dist.values()) if dist else Fraction(0)) + Fraction(extra)

    # work with q * phi, which is an integer when lam = p / q
    q, p = lam.denominator, lam.numerator
    limit = ceil(phi_max * q)
    steps = sorted(((q * mono_deg(m) - p * k, k, m, a) for (k, m), a in ft.items()), key=lambda x: x[0])
    total: dict[tuple[int, Mono], Fraction] = {(0, ONE_MONO): Fraction(1)}
    power: dict[tuple[int, Mono], tuple[int, Fraction]] = {(0, ONE_MONO): (0, Fraction(1))}
    while power:
        nxt: dict[tuple[int, Mono], tuple[int, Fraction]] = {}
        for (k1, m1), (w1, a1) in power.items():
            for w2, k2, m2, a2 in steps:
                w = w1 + w2
                if w >= limit:
                    break
                key = (k1 + k2, mono_mul(m1, m2))
                prev = nxt.get(key)
                nxt[key] = (w, a1 * a2 if prev is None else prev[1] + a1 * a2)
        power = {k: v for k, v in nxt.items() if v[1]}
        for key, (_, v) in power.items():
            total[key] = total.get(key, 0) + v
    coeffs: dict[int, dict[Mono, Fraction]] = {}
    for (k, m), v in total.items():
        K = k - N
        if lo <= K <= hi and v:
            coeffs.setdefault(K, {})[mono_mul(m, inv_mu)] = v / c
    deg_mu = mono_deg(mu)
    precision = {K: ceil(phi_max + lam * (K + N) - deg_mu) for K in range(lo, hi + 1)}
    series = LaurentWindow({K: Poly(t) for K, t in coeffs.items()}, window, f.r, TRUNCATED, precision)
    return series, lam, phi_max


def crude_inverse(
    f: LaurentWindow,
    N: int,
    window: tuple[int, int] | None = None,
    extra: Fraction | int | None = None,
    check_corners: bool = True,
) -> CrudeInverse:
    """The coefficients of CInv_N(f) on ``window`` (default: 10 * width indices either side of -N)."""
    if check_corners:
        _check_corner(f, N)
    elif not f.coeff(N):
        raise NoCorner(f"f has no coefficient over T^{N}")
    if window is None:
        span = default_span(f.width())
        window = (-N - span, -N + span)
    supp = f.support()
    if N in (supp[0], supp[-1]) and f.coeffs[N].is_monomial():
        return CrudeInverse(_recurrence(f, N, window), N, "recurrence")
    series, lam, phi_max = _expansion(f, N, window, None if extra is None else Fraction(extra))
    return CrudeInverse(series, N, "expansion", lam, phi_max)


def verify_inverse(f: LaurentWindow, g: LaurentWindow) -> tuple[bool, int]:
    """Check f * g == 1 on every index the window of g determines."""
    return delta_check(product_window(f, g))


def fitted_slopes(g: LaurentWindow, var: str, span: int | None = None) -> tuple[Fraction | None, Fraction | None]:
    """Windowed estimates (left, right) of the asymptotic gradients of NP_var(g)."""
    lo, hi = g.window
    right_span = hi if span is None else min(span, hi)
    left_span = -lo if span is None else min(span, -lo)
    right_pts = [(i, v) for i, v in g.points(var, lo=0, hi=right_span)]
    left_pts = [(-i, v) for i, v in g.points(var, lo=-left_span, hi=0)]
    r = asymptotic_slope(right_pts, right_span) if right_span > 0 else None
    l = asymptotic_slope(left_pts, left_span) if left_span > 0 else None
    return (-l if l is not None else None), r
