"""Polynomial layer and its coefficient-space twin."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from spherestab.homogeneous import field_surface_div, pv_from_poly
from spherestab.polynomials import Poly, monomial_exponents


def _random_poly(rng, n=3, deg=3):
    coeffs = {}
    for d in range(deg + 1):
        for e in monomial_exponents(n, d):
            coeffs[e] = rng.normal()
    return Poly(n, coeffs)


def test_monomial_counts():
    assert len(monomial_exponents(3, 2)) == 6
    assert len(monomial_exponents(4, 3)) == 20
    assert monomial_exponents(2, 0) == [(0, 0)]


def test_product_eval_consistency(rng):
    p, q = _random_poly(rng), _random_poly(rng)
    X = rng.normal(size=(25, 3))
    assert np.max(np.abs((p * q)(X) - p(X) * q(X))) < 1e-10


def test_derivative_of_product(rng):
    p, q = _random_poly(rng, deg=2), _random_poly(rng, deg=2)
    X = rng.normal(size=(10, 3))
    lhs = (p * q).diff(0)(X)
    rhs = (p.diff(0) * q)(X) + (p * q.diff(0))(X)
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_laplacian_examples():
    # x1^2 - x2^2 and x1 x2 are harmonic; |x|^2 is not
    assert Poly(3, {(2, 0, 0): 1.0, (0, 2, 0): -1.0}).laplacian().is_zero()
    assert Poly(3, {(1, 1, 0): 1.0}).laplacian().is_zero()
    r2 = Poly(3, {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): 1.0})
    assert abs(r2.laplacian().coeffs[(0, 0, 0)] - 6.0) < 1e-14


def test_sphere_integral_matches_pv(rng):
    p = _random_poly(rng)
    pv = pv_from_poly(p)
    assert abs(p.sphere_integral() - pv.sphere_integral()) < 1e-12
    q = _random_poly(rng)
    direct = (p * q).sphere_integral()
    assert abs(pv.pair(pv_from_poly(q)) - direct) < 1e-10


def test_pv_euler_identity(rng):
    # sum_i x_i d_i p has the degree-weighted coefficients of p
    p = _random_poly(rng, deg=4)
    pv = pv_from_poly(p)
    direct = None
    for i in range(3):
        term = pv.diff(i).xmul(i)
        direct = term if direct is None else direct + term
    X = rng.normal(size=(15, 3))
    assert np.max(np.abs(direct.to_poly()(X) - pv.euler().to_poly()(X))) < 1e-9


def test_surface_divergence_pv_vs_pointwise(rng):
    from spherestab.spheremap import poly_map, surface_divergence

    comps = [_random_poly(rng, deg=3) for _ in range(3)]
    u = poly_map(3, comps)
    d = field_surface_div([pv_from_poly(c) for c in comps]).to_poly()
    X = rng.normal(size=(30, 3))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    J = u.jac(X)
    assert np.max(np.abs(d(X) - surface_divergence(J, X))) < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_moment_equals_poly_integral(a, b, c):
    from spherestab.moments import sphere_moment

    p = Poly(3, {(a, b, c): 1.0})
    assert abs(p.sphere_integral() - float(sphere_moment(3, (a, b, c)))) < 1e-15
