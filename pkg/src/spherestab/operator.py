"""The first-order volume-form operator on vector spherical harmonics.

A(w) = (div_S w) x - sum_j x_j grad_T w^j maps each degree-k block H_{n,k}
into itself and is self-adjoint there.  Its spectrum on H_{n,k} is exactly
{-k, 1, k+n-2}: the solenoidal part splits into the -k and +1 eigenspaces,
and the complement of the solenoidal part is the (k+n-2)-eigenspace.  The
kernel of the conformal-isoperimetric form is the span of the skew linear
fields (degree 1, eigenvalue 1) and the degree-2 complement.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import IntegrityError
from .harmonics import Subspace, laplace_eigenvalue, vector_space_coeffs
from .homogeneous import (
    diff_matrix,
    exps,
    field_a_operator,
    field_from_map,
    field_inner_x,
    field_mean,
    field_pair,
    gram,
    xmul_matrix,
)
from .spheremap import (
    SphereMap,
    a_operator_values,
    poly_map,
    sampled_map,
)

__all__ = [
    "apply_A",
    "a_matrix",
    "helmholtz_split",
    "eigenspaces",
    "self_adjointness_residual",
    "kernel_subspaces",
    "project_kernel",
    "project_h_n",
    "subspace_angle",
    "EigenField",
    "random_eigenfield",
    "random_h_field",
]

_CLUSTER_TOL = 1e-8


def apply_A(w: SphereMap) -> SphereMap:
    """Apply the volume-form operator pointwise (sampled) or exactly (poly)."""
    if w.m != w.n:
        raise ValueError("operator needs a map into R^n")
    if w.is_poly:
        f = field_from_map(w)
        av = field_a_operator(f)
        return poly_map(w.n, [a.to_poly() for a in av])
    X, U, J = w.sample(w.grid)
    vals = a_operator_values(U, J, X)
    return sampled_map(w.grid, vals, None)


@lru_cache(maxsize=None)
def _a_coefficient_matrix(n: int, k: int) -> np.ndarray:
    """A on degree-k harmonic coefficient space, block (i,j) = X_i D_j - X_j D_i.

    Valid because harmonic components coincide with their harmonic
    extensions, where A(w) = (div w_h) x - sum_j x_j grad w_h^j.
    """
    M = len(exps(n, k))
    A = np.zeros((n * M, n * M))
    for i in range(n):
        for j in range(n):
            blk = xmul_matrix(n, k - 1, i) @ diff_matrix(n, k, j) - xmul_matrix(n, k - 1, j) @ diff_matrix(n, k, i)
            A[i * M : (i + 1) * M, j * M : (j + 1) * M] = blk
    return A


@lru_cache(maxsize=None)
def a_matrix(n: int, k: int) -> np.ndarray:
    """Matrix of A on the orthonormal basis of H_{n,k} (L2 inner products)."""
    B = vector_space_coeffs(n, k)          # (dim, n, M)
    dim, _, M = B.shape
    Aco = _a_coefficient_matrix(n, k)
    AB = (Aco @ B.reshape(dim, n * M).T).T.reshape(dim, n, M)
    G = gram(n, k)
    return np.einsum("aim,mp,bip->ab", B, G, AB)


def self_adjointness_residual(n: int, k: int) -> float:
    """Max-abs asymmetry of the A matrix on H_{n,k}."""
    M = a_matrix(n, k)
    return float(np.max(np.abs(M - M.T)))


@lru_cache(maxsize=None)
def helmholtz_split(n: int, k: int) -> tuple[Subspace, Subspace]:
    """Split H_{n,k} into fields with divergence-free extension and complement.

    Divergence-free is detected on exact polynomial coefficients (rank
    threshold 1e-10), never by sampling.
    """
    B = vector_space_coeffs(n, k)
    dim, _, M = B.shape
    Mdiv = len(exps(n, k - 1))
    Dmap = np.zeros((Mdiv, dim))
    for a in range(dim):
        for i in range(n):
            Dmap[:, a] += diff_matrix(n, k, i) @ B[a, i]
    u, s, vh = np.linalg.svd(Dmap)
    rank = int(np.sum(s > 1e-10))  # basis coefficients are O(1)
    sol_combos = vh[rank:]
    perp_combos = vh[:rank]
    sol = Subspace(n, k, "sol", np.einsum("ab,bim->aim", sol_combos, B))
    perp = Subspace(n, k, "sol_perp", np.einsum("ab,bim->aim", perp_combos, B),
                    eigenvalue=float(k + n - 2))
    return sol, perp


@lru_cache(maxsize=None)
def eigenspaces(n: int, k: int) -> tuple[Subspace, Subspace, Subspace]:
    """Eigenspaces of A on H_{n,k} for the eigenvalues (-k, 1, k+n-2).

    The matrix of A is assembled on the orthonormal basis, symmetrized and
    diagonalized; every eigenvalue must land within 1e-8 of one of the
    three predicted values, and the top eigenspace must coincide with the
    complement of the divergence-free part.
    """
    B = vector_space_coeffs(n, k)
    M = a_matrix(n, k)
    M = 0.5 * (M + M.T)
    evals, evecs = np.linalg.eigh(M)
    centers = [float(-k), 1.0, float(k + n - 2)]
    groups: list[list[int]] = [[], [], []]
    for idx, ev in enumerate(evals):
        dists = [abs(ev - c) for c in centers]
        j = int(np.argmin(dists))
        if dists[j] > _CLUSTER_TOL:
            raise IntegrityError(
                f"eigenvalue {ev} of A on H_({n},{k}) is not near any of {centers}"
            )
        if j == 2 and k == 1:
            # H_{n,1,3} is trivial; for n=2, k=1 the centers 1 and k+n-2 collide
            j = 1
        groups[j].append(idx)
    out = []
    labels = ["eig1", "eig2", "eig3"]
    for j, (label, center) in enumerate(zip(labels, centers)):
        idxs = groups[j]
        combos = evecs[:, idxs].T
        coeffs = np.einsum("ab,bim->aim", combos, B) if len(idxs) else np.zeros((0, n, B.shape[2]))
        out.append(Subspace(n, k, label, coeffs, eigenvalue=center))
    eig1, eig2, eig3 = out
    sol, perp = helmholtz_split(n, k)
    if eig3.dim != perp.dim:
        raise IntegrityError(f"sol-complement dim {perp.dim} != eigenvalue-{centers[2]} dim {eig3.dim}")
    if eig3.dim:
        ang = subspace_angle(eig3, perp)
        if ang > _CLUSTER_TOL:
            raise IntegrityError(f"top eigenspace deviates from sol-complement by {ang}")
    return eig1, eig2, eig3


def subspace_angle(S1: Subspace, S2: Subspace) -> float:
    """Deviation of two same-degree subspaces: 1 - smallest principal cosine."""
    if S1.k != S2.k or S1.n != S2.n:
        raise ValueError("subspace angle needs same (n, k)")
    if S1.dim != S2.dim:
        return 1.0
    if S1.dim == 0:
        return 0.0
    G = gram(S1.n, S1.k)
    C = np.einsum("aim,mp,bip->ab", S1.coeffs, G, S2.coeffs)
    s = np.linalg.svd(C, compute_uv=False)
    return float(np.max(np.abs(1.0 - s)))


@lru_cache(maxsize=None)
def kernel_subspaces(n: int) -> tuple[Subspace, Subspace]:
    """The two blocks of the conformal kernel: skew degree-1 fields and the
    degree-2 complement of the divergence-free part."""
    k12 = eigenspaces(n, 1)[1]
    k23 = eigenspaces(n, 2)[2]
    if k12.dim != n * (n - 1) // 2:
        raise IntegrityError(f"dim of skew block is {k12.dim}, want n(n-1)/2")
    if k23.dim != n:
        raise IntegrityError(f"dim of degree-2 complement is {k23.dim}, want n")
    return k12, k23


def project_h_n(w: SphereMap, grid=None) -> tuple[SphereMap, dict]:
    """Remove the mean and the radial first moment so the map lies in H_n.

    Returns the projected map and a report of what was removed.
    """
    n = w.n
    if w.is_poly:
        f = field_from_map(w)
        mean = field_mean(f)
        radial = field_inner_x(f).sphere_integral()
    else:
        g = grid or w.grid
        X, U, _ = w.sample(g)
        mean = g.weights @ U
        radial = float(g.weights @ np.einsum("ai,ai->a", U, X))
    report = {"removed_mean": np.asarray(mean), "removed_radial": float(radial)}
    if np.max(np.abs(mean)) < 1e-15 and abs(radial) < 1e-15:
        return w, report
    if w.is_poly:
        from .polynomials import Poly

        comps = []
        for i, c in enumerate(w.components):
            p = c + Poly.constant(n, -float(mean[i])) + Poly.coordinate(n, i).scale(-radial)
            comps.append(p)
        return poly_map(n, comps), report
    g = grid or w.grid
    X, U, J = w.sample(g)
    U2 = U - mean - radial * X
    J2 = None if J is None else J - radial * np.eye(n)
    return sampled_map(g, U2, J2), report


def project_kernel(w: SphereMap, grid=None) -> SphereMap:
    """L2/W12 projection onto the kernel block (skew + degree-2 complement)."""
    n = w.n
    w, _ = project_h_n(w, grid=grid)
    k12, k23 = kernel_subspaces(n)
    if w.is_poly:
        from .harmonics import _poly_from_coeffs

        f = field_from_map(w)
        acc = []
        for S in (k12, k23):
            block = np.zeros_like(S.coeffs[0])
            for a in range(S.dim):
                c = field_pair(f, field_from_map(S.maps[a]))
                block += c * S.coeffs[a]
            acc.append(block)
        comps = [
            _poly_from_coeffs(n, 1, acc[0][i]) + _poly_from_coeffs(n, 2, acc[1][i])
            for i in range(n)
        ]
        return poly_map(n, comps)
    g = grid or w.grid
    X, U, J = w.sample(g)
    vals = np.zeros_like(U)
    jac = np.zeros((X.shape[0], n, n)) if J is not None else None
    for S in kernel_subspaces(n):
        for bmap in S.maps:
            BV = bmap.eval(X)
            c = float(g.weights @ np.einsum("ai,ai->a", U, BV))
            vals += c * BV
            if jac is not None:
                jac += c * bmap.jac(X)
    return sampled_map(g, vals, jac)


def kernel_characterization_residual(w: SphereMap) -> tuple[float, float]:
    """Moment characterizations of a vanishing kernel projection.

    Returns (max |skew part of grad w_h(0)|, max |avg (div w_h) x_k|);
    both vanish iff the projection of w onto the kernel block is zero.
    Exact for poly maps.
    """
    from .harmonics import grad_origin, harmonicize

    if not w.is_poly:
        raise TypeError("characterization implemented for poly maps")
    B = grad_origin(w)
    skew = float(np.max(np.abs(B - B.T)))
    wh = harmonicize(w)
    from .homogeneous import pv_from_poly

    div = None
    for i, c in enumerate(wh.components):
        d = pv_from_poly(c).diff(i)
        div = d if div is None else div + d
    divmom = max(abs(div.xmul(k).sphere_integral()) for k in range(w.n))
    return skew, divmom


@dataclass(frozen=True)
class EigenField:
    """A sampled element of one A-eigenspace, with its labels."""

    map: SphereMap
    n: int
    k: int
    i: int  # 1, 2 or 3


def random_eigenfield(n: int, k: int, i: int, rng: np.random.Generator,
                      normalize: str = "energy") -> EigenField:
    """Random unit element of the (k, i) eigenspace of A.

    normalize = "energy" scales to unit tangential energy, "l2" to unit L2.
    """
    S = eigenspaces(n, k)[i - 1]
    if S.dim == 0:
        raise ValueError(f"eigenspace ({n},{k},{i}) is trivial")
    c = rng.normal(size=S.dim)
    c /= np.linalg.norm(c)
    if normalize == "energy":
        c /= np.sqrt(laplace_eigenvalue(n, k))
    return EigenField(S.element(c), n, k, i)


def random_h_field(n: int, kmax: int, rng: np.random.Generator,
                   exclude_kernel: bool = False) -> SphereMap:
    """Random element of the degree-truncated H_n with N(0,1) block weights."""
    total = None
    for k in range(1, kmax + 1):
        for i in (1, 2, 3):
            S = eigenspaces(n, k)[i - 1]
            if S.dim == 0:
                continue
            if exclude_kernel and ((k, i) == (1, 2) or (k, i) == (2, 3)):
                continue
            piece = S.element(rng.normal(size=S.dim))
            total = piece if total is None else total + piece
    return total
