from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import (
    classifier_cases,
    random_cornered_series,
    random_seed,
    random_split,
    random_unit_terms,
    rngs,
    zero_free_t,
)
from neron_align.errors import EmptyInput, NoCorner, NotInA, UnsupportedCoefficient, WindowTooSmall
from neron_align.newton import (
    LaurentWindow,
    Poly,
    above_integral_line,
    asymptotic_slope,
    check_in_A,
    classify_generic_unit,
    crude_inverse,
    crude_inverse_slopes,
    fitted_slopes,
    hull,
    np_left,
    np_right,
    product_window,
    slopes_around,
    torsion_slopes,
    torsion_solve,
    verify_inverse,
)
from neron_align.oracles import brute_lower_hull

t = Poly.var("t")
s = Poly.var("s")
one = Poly.const(1)


def series(coeffs, r=t, **kw):
    return LaurentWindow.polynomial(coeffs, r, **kw)


# -- polynomials and windows ---------------------------------------------------


def test_poly_arithmetic():
    p = one + t
    assert p * p == one + t * 2 + t ** 2
    assert (p * t ** 2).divide_exact(t) == p * t
    assert (t ** 2 * s + t ** 3).valuation("t") == 2
    assert (t ** 2 * s + t ** 3).lowest_form() == t ** 2 * s + t ** 3
    assert (one + t).lowest_form() == one
    assert Poly.from_json((t * F(1, 2) - s).to_json()) == t * F(1, 2) - s


def test_image_of_x_plus_y():
    w = LaurentWindow.image({(1, 0): one, (0, 1): one}, t)
    assert w.coeffs == {1: one, -1: t}
    with pytest.raises(ValueError):
        LaurentWindow.image({(-1, 0): one}, t)


def test_truncated_access_outside_window():
    w = LaurentWindow({0: one}, (0, 3), t, "truncated")
    assert not w.coeff(2)
    with pytest.raises(IndexError):
        w.coeff(4)


# -- hulls -------------------------------------------------------------------


def test_hull_example():
    P = hull([(0, 0), (1, -1), (2, 0), (3, -2)])
    assert P.vertices == ((0, 0), (1, -1), (3, -2))
    assert P.slopes == (-1, F(-1, 2))
    assert slopes_around(P, 1) == (-1, F(-1, 2))
    assert slopes_around(P, 0) == (None, -1)
    assert P.value_at(F(2)) == F(-3, 2)


def test_hull_repeated_index_and_collinear():
    assert hull([(0, 3), (0, 1)]).vertices == ((0, 1),)
    # the middle of three collinear points is not a corner
    assert hull([(0, 0), (1, 1), (2, 2)]).vertices == ((0, 0), (2, 2))
    with pytest.raises(EmptyInput):
        hull([])


def test_sides_of_x_plus_y():
    w = series({-1: t, 1: one})
    assert np_right(w, "t").vertices == ((1, 0),)
    assert np_left(w, "t").vertices == ((-1, 1),)
    assert np_right(series({-1: t}), "t").vertices == ()


def test_integral_line():
    assert above_integral_line(series({-1: t, 1: one}), "t").holds
    bad = above_integral_line(series({-2: t, 0: one}), "t")
    assert not bad.holds and bad.conclusive and bad.index == -2
    # truncated windows cannot confirm membership
    trunc = LaurentWindow({0: one}, (0, 5), t, "truncated")
    assert above_integral_line(trunc, "t").holds and not above_integral_line(trunc, "t").conclusive


def test_asymptotic_slope_ignores_transient():
    pts = [(0, 5), (1, 0)] + [(i, i) for i in range(2, 21)]
    assert asymptotic_slope(pts, 20) == 1
    assert asymptotic_slope([(0, 1)], 20) is None


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=12))
def test_hull_matches_brute(points):
    P = hull(points)
    assert list(P.vertices) == brute_lower_hull(points)
    assert all(a < b for a, b in zip(P.slopes, P.slopes[1:]))
    for x, y in points:
        assert P.value_at(F(x)) <= y


# -- crude inverses ------------------------------------------------------------


def test_cinv_geometric_series():
    f = series({0: one, 1: -t})
    g = crude_inverse(f, 0, (-5, 8))
    assert g.method == "recurrence"
    assert g.series.coeffs == {k: t ** k for k in range(0, 9)}
    assert verify_inverse(f, g.series)[0]
    assert crude_inverse_slopes(f, 0, "t") == (None, 1)


def test_cinv_of_T():
    f = series({1: one})
    g = crude_inverse(f, 1, (-4, 4))
    assert g.series.coeffs == {-1: one}


def test_cinv_t_plus_T_at_top():
    f = series({0: t, 1: one})
    g = crude_inverse(f, 1, (-30, 3))
    # 1/(T + t) = sum_{k>=0} (-t)^k T^{-1-k}
    for K in range(-30, 4):
        expected = (-t) ** (-1 - K) if K <= -1 else Poly()
        assert g.series.coeff(K) == expected
    assert verify_inverse(f, g.series)[0]


def test_cinv_interior_corner():
    f = series({0: t, 1: one, 2: t})
    assert crude_inverse_slopes(f, 1, "t") == (-1, 1)
    g = crude_inverse(f, 1, (-30, 30))
    assert g.method == "expansion"
    assert verify_inverse(f, g.series)[0]
    assert fitted_slopes(g.series, "t") == (-1, 1)


def test_cinv_needs_a_corner():
    f = series({-1: one, 0: one, 1: one})
    with pytest.raises(NoCorner):
        crude_inverse(f, 0)
    with pytest.raises(NoCorner):
        crude_inverse(f, 5)


def test_cinv_unsupported_lowest_form():
    f = series({0: t + s, 1: one, -1: t ** 3 * s ** 3})
    with pytest.raises(UnsupportedCoefficient):
        crude_inverse(f, 0)


@settings(max_examples=30, deadline=None)
@given(rngs())
def test_cinv_is_an_inverse(rng):
    f, N = random_cornered_series(rng)
    g = crude_inverse(f, N)
    ok, checked = verify_inverse(f, g.series)
    assert ok and checked > 0


@settings(max_examples=30, deadline=None)
@given(rngs(), st.integers(1, 3))
def test_scaling_shifts_slopes(rng, d):
    f, N = random_cornered_series(rng)
    pts = lambda w: [(i, w.coeffs[i].valuation("t")) for i in w.support()]
    fs = f.scale_T("t", d)
    assert hull(pts(fs)).slopes == tuple(x + d for x in hull(pts(f)).slopes)
    # make f_N a monomial so that the inverse comes from the exact recurrence
    f = series({i: (c if i != N else c.lowest_form()) for i, c in f.coeffs.items()})
    if N not in (f.support()[0], f.support()[-1]):
        return
    fs = f.scale_T("t", d)
    g = crude_inverse(f, N, (-N - 12, -N + 12)).series
    gs = crude_inverse(fs, N, (-N - 12, -N + 12)).series
    for K in range(-N - 12, -N + 13):
        assert gs.coeff(K) == g.coeff(K) * Poly.var("t", d * K)


def _geometric_tail(f: dict[int, Poly], upto: int) -> dict[int, Poly]:
    """g = sum_{i>=1} f^i from g = f + f g, term by term."""
    g: dict[int, Poly] = {}
    for i in range(1, upto + 1):
        acc = f.get(i, Poly())
        for j, c in f.items():
            if 1 <= i - j:
                acc = acc + c * g[i - j]
        g[i] = acc
    return g


@settings(max_examples=30, deadline=None)
@given(rngs())
def test_no_cancel(rng):
    m = rng.randint(1, 2)
    n = rng.randint(m, 3)
    f = {i: zero_free_t(rng, 0, 2) for i in range(m + 1, n)}
    for i in (m, n):
        f[i] = zero_free_t(rng, 1, 2) + Poly.const(rng.choice([-2, -1, 1, 2]))
    upto = 40
    g = _geometric_tail(f, upto)
    # an independent route: g = CInv_0(1 - f) - 1
    h = crude_inverse(series({0: one, **{i: -c for i, c in f.items()}}), 0, (0, upto)).series
    assert all(h.coeff(i) == g[i] for i in range(1, upto + 1))
    for N in range(1, upto - n + 1):
        assert any(g[i].valuation("t") == 0 for i in range(N, N + n + 1))


# -- torsion -------------------------------------------------------------------


def test_torsion_of_T_minus_t():
    f = series({0: -t, 1: one})
    w = torsion_solve(f, [one], (-4, 4))
    assert all(w.coeff(k) * t ** k == t for k in range(-4, 5))
    res = torsion_slopes(f, [one], "t")
    assert (res.G_r, res.G_l) == (-1, -1)
    assert res.matches_f and res.ordered


def test_torsion_two_slopes():
    f = series({0: -t, 1: one}) * series({0: -one, 1: one})
    res = torsion_slopes(f, [one, F(2)], "t")
    assert res.f_slopes == (-1, 0)
    assert res.G_r == -1 and res.G_l == 0


def test_torsion_rejects_bad_input():
    f = series({0: -t, 1: one})
    with pytest.raises(ValueError):
        torsion_solve(f, [one, one])
    with pytest.raises(WindowTooSmall):
        torsion_slopes(f, [one], "t", span=5)
    with pytest.raises(UnsupportedCoefficient):
        torsion_solve(series({0: one + t, 1: one}), [one])


@settings(max_examples=25, deadline=None)
@given(rngs(), st.integers(1, 3))
def test_torsion_slopes_are_polygon_slopes(rng, k):
    f, ss = random_split(rng, k)
    res = torsion_slopes(f, random_seed(rng, f.width()), "t")
    assert set(res.f_slopes) == {-x for x in ss}
    assert res.matches_f and res.ordered


@settings(max_examples=25, deadline=None)
@given(rngs())
def test_torsion_solves_the_relation(rng):
    f, _ = random_split(rng, rng.randint(1, 3))
    w = torsion_solve(f, random_seed(rng, f.width()), (-15, 15))
    prod = product_window(f, w)
    assert all(not prod.coeff(i) for i in range(*prod.window))


# -- classification ------------------------------------------------------------


def test_classify_t_x_squared():
    res = classify_generic_unit(series({2: t}))
    assert res.branch == "monomial"
    assert (res.s, res.n, res.m) == (t, 2, 0)


def test_classify_x_plus_t():
    res = classify_generic_unit(series({0: t, 1: one}))
    # x + t = x (1 + y)
    assert res.branch == "monomial" and (res.s, res.n, res.m) == (one, 1, 0)
    assert res.u.coeffs == {0: one, -1: t}


def test_classify_x_plus_y():
    res = classify_generic_unit(series({-1: t, 1: one}))
    assert res.branch == "not_a_unit"
    assert res.gradient == F(-1, 2) and res.verified


def test_classify_outside_A():
    with pytest.raises(NotInA):
        classify_generic_unit(series({-2: t, 0: one}))
    with pytest.raises(NotInA):
        check_in_A(series({-1: one}))
    with pytest.raises(ValueError):
        classify_generic_unit(series({0: one}, r=one))


@pytest.mark.parametrize("name,a,branch", classifier_cases(), ids=[c[0] for c in classifier_cases()])
def test_classifier_cases(name, a, branch):
    res = classify_generic_unit(a)
    assert res.branch == branch
    if branch == "monomial":
        assert res.reconstructs and res.u.coeff(0).is_unit_in_R()
        assert verify_inverse(res.u, res.inverse)[0]
        assert all(v.holds for v in res.inverse_in_A.values())
    else:
        assert res.verified


@settings(max_examples=25, deadline=None)
@given(rngs())
def test_units_classify_as_monomial(rng):
    bases = rng.choice([["t"], ["s", "t"]])
    r = rng.choice([t, t ** 2, s * t]) if len(bases) == 2 else rng.choice([t, t ** 2])
    u = LaurentWindow.image(random_unit_terms(rng, bases, rng.randint(1, 3)), r)
    res = classify_generic_unit(u)
    assert res.branch == "monomial"
    assert (res.s, res.n, res.m) == (one, 0, 0)
