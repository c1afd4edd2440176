"""Newton polygons of Laurent series over a valued coefficient ring."""

from .cinv import CrudeInverse, crude_inverse, crude_inverse_slopes, fitted_slopes, verify_inverse
from .classify import Inconclusive, Monomial, NotAUnit, check_in_A, classify_generic_unit, normalise
from .polygon import (
    IntegralLine,
    LineVerdict,
    NewtonPolygon,
    above_integral_line,
    asymptotic_slope,
    hull,
    integral_line,
    np_full,
    np_left,
    np_right,
    slopes_around,
)
from .poly import ONE, ZERO, Poly
from .series import LaurentWindow, default_span, delta_check, product_window
from .torsion import TorsionSlopes, torsion_slopes, torsion_solve

__all__ = [
    "CrudeInverse", "crude_inverse", "crude_inverse_slopes", "fitted_slopes", "verify_inverse",
    "Inconclusive", "Monomial", "NotAUnit", "check_in_A", "classify_generic_unit", "normalise",
    "IntegralLine", "LineVerdict", "NewtonPolygon", "above_integral_line", "asymptotic_slope",
    "hull", "integral_line", "np_full", "np_left", "np_right", "slopes_around",
    "ONE", "ZERO", "Poly",
    "LaurentWindow", "default_span", "delta_check", "product_window",
    "TorsionSlopes", "torsion_slopes", "torsion_solve",
]
