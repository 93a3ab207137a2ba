"""Nonlinear deficits: stretches, volumes, Wente chain, bulk identity."""

import numpy as np
import pytest

from spherestab.deficits import (
    bulk_volume,
    combined_deficit,
    deficit_report,
    dirichlet,
    full_isometric_deficit,
    isometric_deficit,
    isoperimetric_deficit,
    perimeter,
    principal_stretches,
    signed_volume,
    stretch_norm,
    volume_expansion_check,
)
from spherestab.errors import UndefinedDeficitError
from spherestab.forms import q_vol, tangential_energy
from spherestab.moebius import as_sphere_map, random_moebius
from spherestab.operator import random_eigenfield, random_h_field
from spherestab.polynomials import Poly
from spherestab.spheremap import identity_map, linear_map, poly_map

SKEW = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def test_principal_stretches_examples():
    P = np.eye(3) - np.outer([0, 0, 1.0], [0, 0, 1.0])
    assert np.allclose(principal_stretches(P), [1.0, 1.0])
    assert np.allclose(principal_stretches(2 * P), [2.0, 2.0])
    # diag(1,1,2) at the north pole acts as the identity on the tangent plane
    A = np.diag([1.0, 1.0, 2.0])
    G = A @ P
    assert np.allclose(principal_stretches(G), [1.0, 1.0])


def test_isometric_deficit_vanishes_on_rotations(rng):
    R = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    assert isometric_deficit(linear_map(R)) < 1e-12
    assert full_isometric_deficit(linear_map(R)) < 1e-12


def test_short_homothety():
    u = linear_map(0.5 * np.eye(3))
    assert isometric_deficit(u) < 1e-12       # short: no stretches above 1
    assert abs(isoperimetric_deficit(u) - 7.0 / 8.0) < 1e-12
    assert full_isometric_deficit(u) > 0


def test_deficit_chain_orderings(rng):
    # delta <= ||sigma_top - 1|| <= delta_isom pointwise, always
    for _ in range(5):
        w = random_h_field(3, 3, rng)
        u = identity_map(3) + w.scale(0.3 / np.sqrt(tangential_energy(w)))
        d, s, di = isometric_deficit(u), stretch_norm(u), full_isometric_deficit(u)
        assert d <= s + 1e-12
        assert s <= di + 1e-12
    # conformal maps meet the sqrt(2) bound with equality
    phi = random_moebius(rng)
    u = as_sphere_map(phi)
    assert abs(full_isometric_deficit(u) - np.sqrt(2) * stretch_norm(u)) < 1e-9


def test_signed_volume_examples(rng):
    assert abs(signed_volume(identity_map(3)) - 1.0) < 1e-14
    assert abs(signed_volume(linear_map(np.diag([1.0, 1.0, 2.0]))) - 2.0) < 1e-12
    assert abs(signed_volume(identity_map(4)) - 1.0) < 1e-12
    A = rng.normal(size=(3, 3))
    assert abs(signed_volume(linear_map(A)) - np.linalg.det(A)) < 1e-10


def test_signed_volume_orthogonal_covariance(rng):
    w = random_h_field(3, 3, rng)
    u = identity_map(3) + w.scale(0.2)
    R = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    comps = [sum((u.components[j].scale(R[i, j]) for j in range(3)), Poly(3)) for i in range(3)]
    Ru = poly_map(3, comps)
    assert abs(signed_volume(Ru) - np.linalg.det(R) * signed_volume(u)) < 1e-9


def test_moebius_volume_and_degree(grid3, rng):
    for _ in range(3):
        phi = random_moebius(rng, lam_range=(0.5, 2.0))
        u = as_sphere_map(phi)
        rep = deficit_report(u, grid3)
        assert rep.unit_norm
        assert rep.degree_estimate in (-1, 1)
        assert abs(rep.volume - rep.degree_estimate) < 1e-6


def test_dirichlet_perimeter_examples():
    assert abs(dirichlet(identity_map(3)) - 1.0) < 1e-14
    assert abs(perimeter(identity_map(3)) - 1.0) < 1e-12
    u = linear_map(np.diag([1.0, 1.0, 1.1]))
    assert abs(dirichlet(u) - (2 + 1.21) / 3) < 1e-12
    assert abs(dirichlet(identity_map(4)) - 1.0) < 1e-12


def test_combined_deficit_examples(rng):
    u = linear_map(np.diag([1.0, 1.0, 1.1]))
    expect = ((2 + 1.21) / 3) ** 1.5 / 1.1 - 1.0
    E = combined_deficit(u)
    assert abs(E - expect) < 1e-12
    # scaling invariance
    assert abs(combined_deficit(u.scale(2.0)) - E) < 1e-10
    assert abs(combined_deficit(identity_map(3).scale(2.0))) < 1e-12
    # Moebius precomposition invariance at grid tolerance
    from spherestab.moebius import compose_with_map

    phi = random_moebius(rng, lam_range=(0.7, 1.5), rotate=False)
    from spherestab.quadrature import default_sphere_grid

    g = default_sphere_grid(3)
    assert abs(combined_deficit(compose_with_map(u, phi), g) - E) < 1e-6


def test_combined_deficit_undefined():
    # a rank-deficient map with zero signed volume
    u = linear_map(np.diag([1.0, 1.0, 0.0]))
    with pytest.raises(UndefinedDeficitError):
        combined_deficit(u)


@pytest.mark.parametrize("n", [3, 4])
def test_wente_chain_random_maps(n, rng):
    for _ in range(15):
        w = random_h_field(n, 3, rng)
        u = identity_map(n) + w.scale(0.3 / np.sqrt(tangential_energy(w)))
        D, P, V = dirichlet(u), perimeter(u), signed_volume(u)
        p = n / (n - 1)
        assert D**p >= P**p - 1e-9
        assert P**p >= abs(V) - 1e-9


def test_bulk_volume_identity(rng):
    assert abs(bulk_volume(identity_map(3)) - 1.0) < 1e-13
    A = np.diag([1.0, 1.0, 2.0])
    assert abs(bulk_volume(linear_map(A)) - 2.0) < 1e-12
    w = random_eigenfield(3, 2, 3, rng).map
    u = identity_map(3) + w.scale(0.2)
    assert abs(bulk_volume(u) - signed_volume(u)) < 1e-9


def test_volume_expansion_coefficients(rng):
    a0, a1, a2, a3 = volume_expansion_check(poly_map(3, [Poly.zero(3)] * 3))
    assert abs(a0 - 1) < 1e-12 and abs(a1) < 1e-12 and abs(a2) < 1e-12 and abs(a3) < 1e-12
    w = linear_map(SKEW)
    a0, a1, a2, a3 = volume_expansion_check(w)
    assert abs(a0 - 1) < 1e-12
    assert abs(a1) < 1e-12
    assert abs(a2 - q_vol(w, w)) < 1e-10
    assert abs(a3) < 1e-12  # det of odd-dimensional skew matrix
    wf = random_eigenfield(3, 2, 3, rng)
    a0, a1, a2, a3 = volume_expansion_check(wf.map)
    assert abs(a2 - 0.75 * tangential_energy(wf.map)) < 1e-9
    assert abs(a3 - signed_volume(wf.map)) < 1e-9
    # a field with nonzero radial first moment picks up the linear term
    u = poly_map(3, [Poly.coordinate(3, i).scale(0.5) for i in range(3)])
    a0, a1, a2, a3 = volume_expansion_check(u)
    assert abs(a1 - 1.5) < 1e-10  # 3 * avg<w, x> = 3 * 0.5


def test_report_invariance_under_rotation(grid3, rng):
    w = random_h_field(3, 3, rng)
    u = identity_map(3) + w.scale(0.2 / np.sqrt(tangential_energy(w)))
    R = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    comps = [sum((u.components[j].scale(R[i, j]) for j in range(3)), Poly(3)) for i in range(3)]
    Ru = poly_map(3, comps)
    r1, r2 = deficit_report(u, grid3), deficit_report(Ru, grid3)
    for f in ("delta", "delta_isom", "epsilon", "dirichlet", "perimeter"):
        assert abs(getattr(r1, f) - getattr(r2, f)) < 1e-9
    assert abs(abs(r1.volume) - abs(r2.volume)) < 1e-9
    assert r1.combined is not None and abs(r1.combined - r2.combined) < 1e-9


def test_signed_volume_precomposition_covariance(grid3, rng):
    # V(u compose R) = det(R) V(u) for orthogonal R acting on the domain
    from spherestab.spheremap import callable_map

    w = random_h_field(3, 3, rng)
    u = identity_map(3) + w.scale(0.2)
    R = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    uR = callable_map(3, 3, lambda X: u.eval(X @ R.T), lambda X: u.jac(X @ R.T) @ R)
    assert abs(signed_volume(uR, grid3) - np.linalg.det(R) * signed_volume(u)) < 1e-9


def test_moebius_flip_reverses_volume(grid3, rng):
    from spherestab.moebius import MoebiusMap, as_sphere_map, compose, random_moebius

    phi = random_moebius(rng, lam_range=(0.6, 1.8))
    flip = MoebiusMap(3, np.diag([1.0, 1.0, -1.0]), np.array([0.0, 0.0, 1.0]), 1.0)
    assert abs(signed_volume(as_sphere_map(phi), grid3) - 1.0) < 1e-6
    assert abs(signed_volume(as_sphere_map(compose(flip, phi)), grid3) + 1.0) < 1e-6


def test_report_norm_fields(grid3):
    rep = deficit_report(identity_map(3), grid3)
    assert rep.grad_lp_exponent == 2
    assert abs(rep.grad_lp_norm - np.sqrt(2.0)) < 1e-12
    rep4 = deficit_report(identity_map(4))
    assert rep4.grad_lp_exponent == 4
    assert abs(rep4.grad_lp_norm - 3.0 ** 0.5) < 1e-9
