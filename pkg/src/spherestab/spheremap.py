"""Maps from S^{n-1} into R^m and their pointwise surface calculus.

A map is backed either by exact polynomials per component, by sampled
values + ambient Jacobians on a fixed grid, or by callables (used for
Moebius maps and compositions; not serializable).  All geometric
quantities are assembled frame-invariantly from the ambient Jacobian J
and the projector P = I - x x^t:

    tangential Jacobian      J P
    surface divergence       tr(J P)
    principal stretches      singular values of J P (largest n-1)
    volume-form integrand    det(J P + u x^t)

so no local tangent frame is ever chosen.  The determinant convention is
fixed so that the identity map has signed volume +1 in every dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .polynomials import Poly
from .quadrature import SphereGrid

__all__ = [
    "SphereMap",
    "identity_map",
    "poly_map",
    "sampled_map",
    "callable_map",
    "projectors",
    "tangential_jacobians",
    "surface_divergence",
    "principal_stretch_values",
    "volume_integrand",
    "area_integrand",
    "dirichlet_integrand",
    "a_operator_values",
    "sym_tangential_part",
]


@dataclass
class PolyBacking:
    components: tuple[Poly, ...]

    def jacobian_polys(self) -> list[list[Poly]]:
        return [[c.diff(l) for l in range(c.n)] for c in self.components]


@dataclass
class SampledBacking:
    grid: SphereGrid
    values: np.ndarray              # (N, m)
    jacobians: np.ndarray | None    # (N, m, n) ambient Jacobians


@dataclass
class CallableBacking:
    value_fn: Callable[[np.ndarray], np.ndarray]
    jacobian_fn: Callable[[np.ndarray], np.ndarray] | None


@dataclass
class SphereMap:
    """A map S^{n-1} -> R^m with one of three backings."""

    n: int
    m: int
    backing: PolyBacking | SampledBacking | CallableBacking

    # -- queries -----------------------------------------------------------
    @property
    def is_poly(self) -> bool:
        return isinstance(self.backing, PolyBacking)

    @property
    def is_sampled(self) -> bool:
        return isinstance(self.backing, SampledBacking)

    @property
    def components(self) -> tuple[Poly, ...]:
        if not self.is_poly:
            raise TypeError("components only available for poly-backed maps")
        return self.backing.components

    def eval(self, points: np.ndarray) -> np.ndarray:
        """Values at arbitrary points, shape (N, m)."""
        pts = np.atleast_2d(points)
        if self.is_poly:
            return np.stack([c(pts) for c in self.backing.components], axis=1)
        if isinstance(self.backing, CallableBacking):
            return np.asarray(self.backing.value_fn(pts))
        raise TypeError("sampled maps only carry values at their own grid nodes")

    def jac(self, points: np.ndarray) -> np.ndarray:
        """Ambient Jacobians at arbitrary points, shape (N, m, n)."""
        pts = np.atleast_2d(points)
        if self.is_poly:
            J = np.empty((pts.shape[0], self.m, self.n))
            for i, c in enumerate(self.backing.components):
                for l in range(self.n):
                    J[:, i, l] = c.diff(l)(pts)
            return J
        if isinstance(self.backing, CallableBacking):
            if self.backing.jacobian_fn is None:
                raise TypeError("map has no gradient data")
            return np.asarray(self.backing.jacobian_fn(pts))
        raise TypeError("sampled maps only carry gradients at their own grid nodes")

    def sample(self, grid: SphereGrid) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
        """(nodes, values, jacobians) on the given grid."""
        if self.is_sampled:
            b = self.backing
            if b.grid.size != grid.size or b.grid is not grid:
                if not np.array_equal(b.grid.nodes, grid.nodes):
                    raise ValueError("sampled map is bound to its own grid")
            return b.grid.nodes, b.values, b.jacobians
        X = grid.nodes
        U = self.eval(X)
        try:
            J = self.jac(X)
        except TypeError:
            J = None
        return X, U, J

    @property
    def grid(self) -> SphereGrid | None:
        return self.backing.grid if self.is_sampled else None

    # -- algebra (poly maps) -------------------------------------------------
    def __add__(self, other: "SphereMap") -> "SphereMap":
        if not (self.is_poly and other.is_poly):
            raise TypeError("map addition requires poly backing")
        comps = tuple(a + b for a, b in zip(self.components, other.components))
        return SphereMap(self.n, self.m, PolyBacking(comps))

    def scale(self, a: float) -> "SphereMap":
        if not self.is_poly:
            raise TypeError("scaling requires poly backing")
        return SphereMap(self.n, self.m, PolyBacking(tuple(c.scale(a) for c in self.components)))


def poly_map(n: int, components) -> SphereMap:
    comps = tuple(components)
    return SphereMap(n, len(comps), PolyBacking(comps))


def sampled_map(grid: SphereGrid, values: np.ndarray, jacobians: np.ndarray | None) -> SphereMap:
    values = np.asarray(values, dtype=float)
    return SphereMap(grid.n, values.shape[1], SampledBacking(grid, values, jacobians))


def callable_map(n: int, m: int, value_fn, jacobian_fn=None) -> SphereMap:
    return SphereMap(n, m, CallableBacking(value_fn, jacobian_fn))


def identity_map(n: int) -> SphereMap:
    return poly_map(n, [Poly.coordinate(n, i) for i in range(n)])


def linear_map(A: np.ndarray) -> SphereMap:
    """The map x -> A x as a poly-backed SphereMap."""
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    comps = []
    for i in range(m):
        p = Poly(n)
        for l in range(n):
            if A[i, l] != 0.0:
                p = p + Poly.coordinate(n, l).scale(A[i, l])
        comps.append(p)
    return SphereMap(n, m, PolyBacking(tuple(comps)))


# ---------------------------------------------------------------------------
# pointwise geometry kernels (vectorized over nodes)
# ---------------------------------------------------------------------------

def projectors(X: np.ndarray) -> np.ndarray:
    """P = I - x x^t per node, shape (N, n, n)."""
    n = X.shape[1]
    return np.eye(n)[None, :, :] - np.einsum("ai,aj->aij", X, X)


def tangential_jacobians(J: np.ndarray, X: np.ndarray) -> np.ndarray:
    """J P per node."""
    return J - np.einsum("ail,al,ak->aik", J, X, X)


def surface_divergence(J: np.ndarray, X: np.ndarray) -> np.ndarray:
    """tr(J P) = tr J - x^t J x per node (square J)."""
    return np.einsum("aii->a", J) - np.einsum("ai,ail,al->a", X, J, X)


def principal_stretch_values(J: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Sorted principal stretches (ascending), shape (N, n-1)."""
    TJ = tangential_jacobians(J, X)
    s = np.linalg.svd(TJ, compute_uv=False)  # descending, last one ~ 0
    s = s[:, : X.shape[1] - 1]
    return s[:, ::-1]


def volume_integrand(U: np.ndarray, J: np.ndarray, X: np.ndarray) -> np.ndarray:
    """det(J P + u x^t) per node; integrates to the signed volume V_n."""
    B = tangential_jacobians(J, X) + np.einsum("ai,aj->aij", U, X)
    return np.linalg.det(B)


def area_integrand(J: np.ndarray, X: np.ndarray) -> np.ndarray:
    """sqrt(det of the tangential first fundamental form) per node."""
    TJ = tangential_jacobians(J, X)
    G = np.einsum("aki,akj->aij", TJ, TJ) + np.einsum("ai,aj->aij", X, X)
    d = np.linalg.det(G)
    return np.sqrt(np.clip(d, 0.0, None))


def dirichlet_integrand(J: np.ndarray, X: np.ndarray) -> np.ndarray:
    """(|grad_T u|^2 / (n-1))^((n-1)/2) per node."""
    n = X.shape[1]
    TJ = tangential_jacobians(J, X)
    e = np.einsum("aik,aik->a", TJ, TJ) / (n - 1)
    return e ** ((n - 1) / 2.0)


def a_operator_values(U: np.ndarray, J: np.ndarray, X: np.ndarray) -> np.ndarray:
    """(div_S w) x - sum_j x_j grad_T w^j per node (m == n)."""
    TJ = tangential_jacobians(J, X)
    div = np.einsum("aii->a", TJ)
    return div[:, None] * X - np.einsum("aj,ajl->al", X, TJ)


def sym_tangential_part(J: np.ndarray, X: np.ndarray) -> np.ndarray:
    """(P J P)_sym per node: the symmetrized tangential-tangential block."""
    P = projectors(X)
    PJP = np.einsum("aij,ajk,akl->ail", P, J, P)
    return 0.5 * (PJP + np.transpose(PJP, (0, 2, 1)))
