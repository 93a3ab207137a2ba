"""Scalar/vector harmonic bases, analysis, extension estimates."""

import numpy as np
import pytest

from spherestab.harmonics import (
    analyze,
    grad_origin,
    harmonic_dimension,
    harmonic_energy_check,
    harmonic_extension_eval,
    laplace_eigenvalue,
    poincare_deficit,
    scalar_basis,
    scalar_basis_coeffs,
    synthesize,
    vector_basis,
    vector_space_coeffs,
)
from spherestab.homogeneous import field_from_map, field_pair, gram, gram_rect
from spherestab.polynomials import Poly
from spherestab.spheremap import identity_map, linear_map, poly_map


@pytest.mark.parametrize("n,k,dim", [(3, 1, 3), (3, 2, 5), (2, 3, 2), (4, 2, 9), (2, 1, 2), (3, 0, 1)])
def test_scalar_dimensions(n, k, dim):
    assert harmonic_dimension(n, k) == dim
    assert len(scalar_basis(n, k)) == dim


def test_scalar_basis_k1_spans_coordinates(sphere_points):
    basis = scalar_basis(3, 1)
    # each basis function is a linear polynomial; their span is {x1,x2,x3}
    M = np.stack([b(sphere_points) for b in basis])
    C = np.stack([sphere_points[:, i] for i in range(3)])
    resid = np.linalg.lstsq(M.T, C.T, rcond=None)[1]
    assert np.max(resid) < 1e-20


def test_scalar_basis_n2_k3_is_cos_sin(sphere_points):
    theta = np.linspace(0.1, 6.0, 17)
    pts = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    M = np.stack([b(pts) for b in scalar_basis(2, 3)])
    C = np.stack([np.cos(3 * theta), np.sin(3 * theta)])
    resid = np.linalg.lstsq(M.T, C.T, rcond=None)[1]
    assert np.max(resid) < 1e-18


@pytest.mark.parametrize("n,k", [(3, 2), (3, 5), (4, 3), (2, 4)])
def test_gram_identity_and_harmonicity(n, k):
    B = scalar_basis_coeffs(n, k)
    G = B @ gram(n, k) @ B.T
    assert np.max(np.abs(G - np.eye(B.shape[0]))) < 1e-10
    for b in scalar_basis(n, k):
        assert b.poly.laplacian().is_zero(tol=1e-12)


def test_cross_degree_orthogonality():
    B2 = scalar_basis_coeffs(3, 2)
    B4 = scalar_basis_coeffs(3, 4)
    assert np.max(np.abs(B2 @ gram_rect(3, 2, 4) @ B4.T)) < 1e-10


@pytest.mark.parametrize("n,k", [(3, 1), (3, 3), (4, 2), (2, 5)])
def test_laplace_beltrami_eigenvalue(n, k):
    lam = laplace_eigenvalue(n, k)
    for b in scalar_basis(n, k)[:3]:
        u = poly_map(n, [b.poly])
        from spherestab.forms import tangential_energy

        e = tangential_energy(u)
        m = field_pair(field_from_map(u), field_from_map(u))
        assert abs(e - lam * m) < 1e-10


@pytest.mark.parametrize("n,k,dim", [(3, 1, 8), (3, 2, 15), (4, 1, 15), (4, 2, 36)])
def test_vector_space_dimensions(n, k, dim):
    assert vector_space_coeffs(n, k).shape[0] == dim
    assert vector_basis(n, k).dim == dim


def test_analyze_identity_map():
    e = analyze(identity_map(3), 2)
    assert np.max(np.abs(e.blocks[0])) < 1e-12
    assert np.max(np.abs(e.blocks[2])) < 1e-12
    assert e.block_norm_sq(1) > 0


def test_analyze_x1_squared():
    u = poly_map(3, [Poly(3, {(2, 0, 0): 1.0})])
    e = analyze(u, 2)
    assert abs(e.blocks[0][0, 0] - 1.0 / 3.0) < 1e-12
    assert np.max(np.abs(e.blocks[1])) < 1e-12
    assert e.block_norm_sq(2) > 0


def test_analyze_orthonormality_roundtrip(sphere_points):
    psi = scalar_basis(3, 2)[2]
    u = poly_map(3, [psi.poly])
    e = analyze(u, 3)
    blk = e.blocks[2][0]
    assert abs(np.linalg.norm(blk) - 1.0) < 1e-10
    assert np.max(np.abs(e.blocks[1])) < 1e-10
    v = synthesize(e)
    assert np.max(np.abs(u.eval(sphere_points) - v.eval(sphere_points))) < 1e-10


def test_analyze_quadrature_path(grid3, sphere_points):
    from spherestab.spheremap import sampled_map

    u = poly_map(3, [Poly(3, {(1, 1, 0): 1.0})])
    U = u.eval(grid3.nodes)
    us = sampled_map(grid3, U, None)
    e = analyze(us, 2, grid=grid3)
    ep = analyze(u, 2)
    for k in range(3):
        assert np.max(np.abs(e.blocks[k] - ep.blocks[k])) < 1e-12


def test_analyze_warns_beyond_exactness():
    from spherestab.quadrature import build_sphere_grid
    from spherestab.spheremap import sampled_map

    g = build_sphere_grid(3, 4)
    us = sampled_map(g, np.ones((g.size, 1)), None)
    with pytest.warns(UserWarning):
        e = analyze(us, 6, grid=g)
    assert e.quadrature_warning


def test_grad_origin_examples(sphere_points):
    assert np.allclose(grad_origin(identity_map(3)), np.eye(3), atol=1e-12)
    A = np.diag([1.0, 1.0, 2.0])
    assert np.allclose(grad_origin(linear_map(A)), A, atol=1e-12)
    # psi * x with psi = x1 x2: the degree-1 harmonic parts of x1^2 x2 and
    # x1 x2^2 are x2/5 and x1/5, so the matrix is (E12 + E21)/5
    psi = Poly(3, {(1, 1, 0): 1.0})
    u = poly_map(3, [psi * Poly.coordinate(3, i) for i in range(3)])
    expect = np.zeros((3, 3))
    expect[0, 1] = expect[1, 0] = 0.2
    assert np.allclose(grad_origin(u), expect, atol=1e-12)


def test_grad_origin_is_degree1_block(rng):
    comps = [Poly(3, {(1, 0, 0): rng.normal(), (1, 1, 1): rng.normal(), (3, 0, 0): rng.normal()}) for _ in range(3)]
    u = poly_map(3, comps)
    B = grad_origin(u)
    e = analyze(u, 1)
    v = synthesize(e)
    # degree-1 part of the synthesis is exactly B x
    X = rng.normal(size=(20, 3))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    deg1 = v.eval(X) - e.blocks[0][:, 0]
    assert np.max(np.abs(deg1 - X @ B.T)) < 1e-10


def test_harmonic_extension_eval():
    e = analyze(identity_map(3), 2)
    assert np.max(np.abs(harmonic_extension_eval(e, np.zeros(3)))) < 1e-14
    u = poly_map(3, [Poly.coordinate(3, 0)])
    e = analyze(u, 1)
    assert abs(harmonic_extension_eval(e, np.array([0.5, 0, 0]))[0] - 0.5) < 1e-12
    u = poly_map(3, [Poly(3, {(1, 1, 0): 1.0})])
    e = analyze(u, 2)
    assert abs(harmonic_extension_eval(e, np.array([0.5, 0.5, 0.0]))[0] - 0.25) < 1e-12
    with pytest.raises(ValueError):
        harmonic_extension_eval(e, np.array([1.5, 0, 0]))


def test_poincare_deficit_examples(rng):
    A = rng.normal(size=(3, 3))
    assert abs(poincare_deficit(linear_map(A))) < 1e-10
    const = poly_map(3, [Poly.constant(3, 2.0)])
    assert abs(poincare_deficit(const)) < 1e-14
    w = vector_basis(3, 2).maps[0]
    from spherestab.forms import tangential_energy

    assert abs(poincare_deficit(w) - tangential_energy(w) / 3.0) < 1e-10
    # nonnegative on random fields
    for _ in range(5):
        comps = [Poly(3, {(2, 1, 0): rng.normal(), (0, 0, 1): rng.normal()}) for _ in range(2)]
        assert poincare_deficit(poly_map(3, comps)) >= -1e-10


def test_harmonic_energy_check():
    rep = harmonic_energy_check(poly_map(3, [Poly.zero(3)] * 3))
    assert rep.ball_energy == rep.surface_energy == rep.tangential_energy == 0.0
    A = np.diag([1.0, 2.0, 0.5])
    rep = harmonic_energy_check(linear_map(A))
    assert rep.bounds_ok
    assert abs(rep.ball_energy - rep.surface_energy) < 1e-12
    assert abs(rep.surface_energy - 1.5 * rep.tangential_energy) < 1e-12
    # single degree-k harmonic: surface = (1 + k/(k+n-2)) tangential
    k, n = 3, 3
    psi = scalar_basis(n, k)[1]
    rep = harmonic_energy_check(poly_map(n, [psi.poly]))
    assert rep.bounds_ok
    factor = 1 + k / (k + n - 2)
    assert abs(rep.surface_energy - factor * rep.tangential_energy) < 1e-10
    assert abs(rep.ball_energy - n * k / laplace_eigenvalue(n, k) * rep.tangential_energy) < 1e-10
