"""Volume-form operator: spectrum, Helmholtz split, kernel projection."""

import numpy as np
import pytest

from spherestab.harmonics import analyze
from spherestab.homogeneous import field_from_map, field_pair
from spherestab.operator import (
    apply_A,
    eigenspaces,
    helmholtz_split,
    kernel_characterization_residual,
    kernel_subspaces,
    project_h_n,
    project_kernel,
    random_eigenfield,
    random_h_field,
    self_adjointness_residual,
    subspace_angle,
)
from spherestab.polynomials import Poly
from spherestab.spheremap import linear_map, poly_map, surface_divergence

SKEW = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
SYM = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def test_apply_A_on_linear_fields(sphere_points):
    w = linear_map(SKEW)
    aw = apply_A(w)
    assert np.max(np.abs(aw.eval(sphere_points) - w.eval(sphere_points))) < 1e-12
    w = linear_map(SYM)
    aw = apply_A(w)
    assert np.max(np.abs(aw.eval(sphere_points) + w.eval(sphere_points))) < 1e-12
    z = poly_map(3, [Poly.zero(3)] * 3)
    assert np.max(np.abs(apply_A(z).eval(sphere_points))) == 0.0


def test_apply_A_dimension_guard():
    with pytest.raises(ValueError):
        apply_A(poly_map(3, [Poly.coordinate(3, 0)]))


def test_apply_A_pointwise_matches_poly(grid3, rng):
    from spherestab.spheremap import sampled_map

    w = random_eigenfield(3, 3, 1, rng).map
    X = grid3.nodes
    ws = sampled_map(grid3, w.eval(X), w.jac(X))
    a1 = apply_A(w).eval(X)
    a2 = apply_A(ws).sample(grid3)[1]
    assert np.max(np.abs(a1 - a2)) < 1e-11


@pytest.mark.parametrize("n,k,expected", [
    (3, 1, {-1, 1}), (3, 2, {-2, 1, 3}), (3, 4, {-4, 1, 5}),
    (4, 1, {-1, 1}), (4, 3, {-3, 1, 5}), (2, 1, {-1, 1}), (2, 3, {-3, 3}),
])
def test_spectrum_clusters(n, k, expected):
    spaces = eigenspaces(n, k)
    got = {int(round(s.eigenvalue)) for s in spaces if s.dim > 0}
    assert got == expected


def test_eigenvalue_residuals(rng):
    for (n, k, i) in [(3, 2, 1), (3, 4, 2), (3, 3, 3), (4, 2, 3), (4, 4, 1)]:
        ef = random_eigenfield(n, k, i, rng)
        sig = {1: -k, 2: 1.0, 3: k + n - 2}[i]
        aw = apply_A(ef.map)
        diff = [a - b for a, b in zip(field_from_map(aw), field_from_map(ef.map.scale(sig)))]
        assert np.sqrt(field_pair(diff, diff)) < 1e-9


def test_helmholtz_dimensions():
    sol, perp = helmholtz_split(3, 1)
    assert sol.dim == 8 and perp.dim == 0
    assert helmholtz_split(3, 2)[1].dim == 3
    assert helmholtz_split(4, 2)[1].dim == 4
    for n, k in [(3, 3), (4, 3)]:
        sol, perp = helmholtz_split(n, k)
        from spherestab.harmonics import vector_space_coeffs

        assert sol.dim + perp.dim == vector_space_coeffs(n, k).shape[0]


def test_sol_fields_have_divergence_free_extension(rng):
    sol, _ = helmholtz_split(3, 3)
    c = rng.normal(size=sol.dim)
    w = sol.element(c / np.linalg.norm(c))
    div = None
    for i, comp in enumerate(w.components):
        d = comp.diff(i)
        div = d if div is None else div + d
    assert div.is_zero(tol=1e-10)


def test_eig3_equals_sol_complement():
    for n, k in [(3, 2), (3, 4), (4, 2), (4, 3)]:
        eig3 = eigenspaces(n, k)[2]
        perp = helmholtz_split(n, k)[1]
        assert eig3.dim == perp.dim
        assert subspace_angle(eig3, perp) < 1e-8


@pytest.mark.parametrize("n,ks", [(3, range(1, 6)), (4, range(1, 5)), (2, range(1, 6))])
def test_self_adjointness(n, ks):
    for k in ks:
        assert self_adjointness_residual(n, k) < 1e-10


def test_degree_preservation(rng):
    w = random_eigenfield(3, 3, 1, rng).map
    aw = apply_A(w)
    e = analyze(aw, 5)
    for k, blk in e.blocks.items():
        if k != 3 and blk.size:
            assert np.max(np.abs(blk)) < 1e-10


def test_eig2_tangential_divergence_free(grid3, rng):
    X = grid3.nodes[::40]
    for k in (2, 4):
        ef = random_eigenfield(3, k, 2, rng)
        U, J = ef.map.eval(X), ef.map.jac(X)
        assert np.max(np.abs(np.einsum("ai,ai->a", U, X))) < 1e-9
        assert np.max(np.abs(surface_divergence(J, X))) < 1e-9


def test_kernel_dimensions():
    k12, k23 = kernel_subspaces(3)
    assert k12.dim == 3 and k23.dim == 3
    k12, k23 = kernel_subspaces(4)
    assert k12.dim == 6 and k23.dim == 4


def test_project_kernel_examples(sphere_points, rng):
    pk = project_kernel(linear_map(SKEW))
    assert np.max(np.abs(pk.eval(sphere_points) - sphere_points @ SKEW.T)) < 1e-10
    assert np.max(np.abs(project_kernel(linear_map(SYM)).eval(sphere_points))) < 1e-10
    w3 = random_eigenfield(3, 3, 2, rng).map
    assert np.max(np.abs(project_kernel(w3).eval(sphere_points))) < 1e-10


def test_project_kernel_residual_characterization(rng):
    for n in (3, 4):
        w = random_h_field(n, 3, rng)
        resid = w + project_kernel(w).scale(-1.0)
        skew, divmom = kernel_characterization_residual(resid)
        assert skew < 1e-8
        assert divmom < 1e-8


def test_projection_idempotent_symmetric(rng):
    w = random_h_field(3, 3, rng)
    v = random_h_field(3, 3, rng)
    p1 = project_kernel(w)
    p2 = project_kernel(p1)
    d = [a - b for a, b in zip(field_from_map(p1), field_from_map(p2))]
    assert np.sqrt(field_pair(d, d)) < 1e-10
    s1 = field_pair(field_from_map(project_kernel(v)), field_from_map(w))
    s2 = field_pair(field_from_map(v), field_from_map(p1))
    assert abs(s1 - s2) < 1e-10


def test_project_h_n_reports(rng):
    n = 3
    comps = [Poly.constant(n, 1.5) + Poly.coordinate(n, i).scale(2.0) for i in range(n)]
    w = poly_map(n, comps)
    w2, report = project_h_n(w)
    assert np.allclose(report["removed_mean"], 1.5)
    assert abs(report["removed_radial"] - 2.0) < 1e-12
    from spherestab.homogeneous import field_inner_x, field_mean

    f = field_from_map(w2)
    assert np.max(np.abs(field_mean(f))) < 1e-12
    assert abs(field_inner_x(f).sphere_integral()) < 1e-12


def test_trivial_eigenspace_raises(rng):
    with pytest.raises(ValueError):
        random_eigenfield(3, 1, 3, rng)
