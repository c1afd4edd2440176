"""Decide whether a finite-width a in A = R[[x,y]]/(xy - r) has the shape s x^n y^m u.

The element is first normalised by stripping every factor s in R, x or y that
divides it inside A. If the remaining u has a unit constant coefficient its
crude inverse at 0 is an honest inverse and a = s x^n y^m u. Otherwise an edge
of some NP_v(u) with gradient strictly between -ord_v(r) and 0 shows that a is
not a unit of A tensor K.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import sympy

from ..errors import NotInA
from .cinv import crude_inverse, verify_inverse
from .polygon import LineVerdict, above_integral_line, hull
from .poly import Poly, mono
from .series import LaurentWindow, default_span

__all__ = ["Monomial", "NotAUnit", "Inconclusive", "classify_generic_unit", "normalise", "check_in_A"]


@dataclass(frozen=True)
class Normalised:
    s: Poly
    n: int
    m: int
    u: LaurentWindow


@dataclass(frozen=True)
class Monomial:
    s: Poly
    n: int
    m: int
    u: LaurentWindow
    inverse: LaurentWindow
    inverse_checked: int
    reconstructs: bool
    inverse_in_A: dict[str, LineVerdict] = field(default_factory=dict)

    branch = "monomial"

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "s": self.s.to_json(),
            "n": self.n,
            "m": self.m,
            "u": self.u.to_json(),
            "certificate": {
                "unit_constant_term": self.u.coeff(0).to_json(),
                "inverse_window": self.inverse.to_json(),
                "inverse_identity_checked": self.inverse_checked,
                "reconstructs": self.reconstructs,
                "inverse_in_A": {v: d.to_json() for v, d in sorted(self.inverse_in_A.items())},
            },
        }


@dataclass(frozen=True)
class NotAUnit:
    var: str
    v_r: int
    edge: tuple[tuple[int, Fraction], tuple[int, Fraction]]
    gradient: Fraction
    normalised: Normalised

    branch = "not_a_unit"

    @property
    def verified(self) -> bool:
        return -self.v_r < self.gradient < 0

    def to_json(self) -> dict:
        (x0, y0), (x1, y1) = self.edge
        return {
            "branch": self.branch,
            "certificate": {
                "valuation": self.var,
                "ord_r": self.v_r,
                "edge": [[x0, str(y0)], [x1, str(y1)]],
                "gradient": str(self.gradient),
                "interval": [-self.v_r, 0],
                "verified": self.verified,
            },
            "stripped": {"s": self.normalised.s.to_json(), "n": self.normalised.n, "m": self.normalised.m},
        }


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    normalised: Normalised

    branch = "inconclusive"

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "reason": self.reason,
            "stripped": {"s": self.normalised.s.to_json(), "n": self.normalised.n, "m": self.normalised.m},
        }


Classification = Monomial | NotAUnit | Inconclusive


def _check_r(r: Poly) -> None:
    if not (r.is_monomial() and r.in_R() and (r.degree() or 0) > 0):
        raise ValueError("r must be a non-unit monomial in the base variables")


def check_in_A(a: LaurentWindow) -> None:
    """Raise NotInA unless every coefficient clears the v-integral line for every base variable."""
    _check_r(a.r)
    if not a.is_polynomial:
        raise ValueError("membership can only be decided for finite-width (polynomial-type) elements")
    for var in sorted(a.base_variables):
        verdict = above_integral_line(a, var)
        if not verdict.holds:
            raise NotInA(
                f"coefficient {verdict.index} has {var}-valuation {verdict.valuation}, below the integral line",
                verdict.index,
                verdict.valuation,
            )


# -- normalisation ------------------------------------------------------------

def _to_sympy(p: Poly, syms: dict[str, sympy.Symbol]):
    return sympy.Add(*[
        sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[syms[v] ** e for v, e in m])
        for m, c in p.items()
    ])


def _from_sympy(expr, syms: dict[str, sympy.Symbol]) -> Poly:
    names = sorted(syms)
    P = sympy.Poly(sympy.expand(expr), *[syms[n] for n in names])
    terms = {}
    for exps, c in P.terms():
        c = sympy.Rational(c)
        terms[mono(dict(zip(names, (int(e) for e in exps))))] = Fraction(int(c.p), int(c.q))
    return Poly(terms)


def _nonunit_content(coeffs: list[Poly], names: list[str]) -> Poly:
    """Product of the irreducible factors, vanishing at the origin, common to all coefficients."""
    if not names:
        return Poly.const(1)
    syms = {n: sympy.Symbol(n) for n in names}
    exprs = [_to_sympy(c, syms) for c in coeffs if c]
    g = reduce(sympy.gcd, exprs)
    _, factors = sympy.factor_list(g, *[syms[n] for n in names])
    keep = sympy.Integer(1)
    origin = {s: 0 for s in syms.values()}
    for fac, mult in factors:
        if fac.subs(origin) == 0:
            keep *= fac ** mult
    return _from_sympy(keep, syms)


def _exact_div(p: Poly, q: Poly, names: list[str]) -> Poly:
    if q.is_monomial():
        return p.divide_exact(q)
    syms = {n: sympy.Symbol(n) for n in names}
    quo, rem = sympy.div(_to_sympy(p, syms), _to_sympy(q, syms), *[syms[n] for n in names])
    if rem != 0:
        raise AssertionError("internal error: content does not divide a coefficient")
    return _from_sympy(quo, syms)


def normalise(a: LaurentWindow, max_rounds: int = 1000) -> Normalised:
    """Strip s in R, x and y while the quotient stays in A; then cancel x^k y^k into r^k."""
    r = a.r
    names = sorted(a.base_variables)
    s, n, m = Poly.const(1), 0, 0
    u = a
    for _ in range(max_rounds):
        changed = False
        # normal-form coefficients: a_i for i >= 0 and a_{-j} / r^j for j >= 1
        nf = [c if i >= 0 else c.divide_exact(r ** -i) for i, c in u.coeffs.items()]
        g = _nonunit_content(nf, names)
        if g != Poly.const(1) and g.degree() and g.degree() > 0:
            u = LaurentWindow.polynomial({i: _exact_div(c, g, names) for i, c in u.coeffs.items()}, r)
            s = s * g
            changed = True
        # a / x in A  iff  r | a_0 and r | a_{-j} / r^j for all j >= 1
        if all(c.divide_exact(r ** max(-i, 0)).divisible_in_R(r) for i, c in u.coeffs.items() if i <= 0):
            u = u.shift(-1)
            u = LaurentWindow.polynomial(dict(u.coeffs), r)
            n += 1
            changed = True
        # a / y = a T / r in A  iff  r | a_i for all i >= 0
        elif all(c.divisible_in_R(r) for i, c in u.coeffs.items() if i >= 0) and any(i >= 0 for i in u.coeffs):
            u = LaurentWindow.polynomial({i + 1: c.divide_exact(r) for i, c in u.coeffs.items()}, r)
            m += 1
            changed = True
        if not changed:
            break
    k = min(n, m)
    if k:
        n, m, s = n - k, m - k, s * r ** k
    return Normalised(s, n, m, u)


def _reconstruct(norm: Normalised) -> LaurentWindow:
    r = norm.u.r
    coeffs = {i + norm.n - norm.m: c * norm.s * r ** norm.m for i, c in norm.u.coeffs.items()}
    return LaurentWindow.polynomial(coeffs, r)


def classify_generic_unit(a: LaurentWindow, span: int | None = None) -> Classification:
    if a.is_zero():
        raise NotInA("zero is not a generic unit")
    check_in_A(a)
    norm = normalise(a)
    u = norm.u
    rebuilt = _reconstruct(norm)
    reconstructs = rebuilt.coeffs == a.coeffs
    if not reconstructs:
        raise AssertionError("internal error: normal form does not reproduce a")
    if u.coeff(0).is_unit_in_R():
        if span is None:
            span = default_span(u.width())
        inv = crude_inverse(u, 0, (-span, span), check_corners=False)
        ok, checked = verify_inverse(u, inv.series)
        if not ok:
            raise AssertionError("internal error: crude inverse at 0 is not an inverse on the window")
        in_A = {var: above_integral_line(inv.series, var) for var in sorted(a.base_variables)}
        return Monomial(norm.s, norm.n, norm.m, u, inv.series, checked, reconstructs, in_A)
    for var in sorted(a.r.variables()):
        v_r = a.r.valuation(var)
        P = hull([(i, c.valuation(var)) for i, c in u.coeffs.items()])
        for p0, p1, grad in P.faces():
            if -v_r < grad < 0:
                return NotAUnit(var, v_r, (p0, p1), grad, norm)
    return Inconclusive("no Newton-polygon edge with an intermediate gradient was found", norm)
