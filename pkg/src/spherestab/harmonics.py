"""Scalar and vector spherical harmonics as homogeneous harmonic polynomials.

Bases are built once per (n, k) by solving the Laplace constraint on
monomial coefficients and orthonormalizing against the exact moment inner
product, then cached.  Degree-k restrictions satisfy
-Lap_S psi = lambda_{n,k} psi with lambda_{n,k} = k(k+n-2), and the analyze /
synthesize pair is exact on polynomial inputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import IntegrityError
from .homogeneous import diff_matrix, exps, field_from_map, gram, gram_rect, pv_from_poly
from .polynomials import Poly
from .quadrature import SphereGrid
from .spheremap import SphereMap, poly_map

__all__ = [
    "HarmonicPoly",
    "Subspace",
    "harmonic_dimension",
    "laplace_eigenvalue",
    "scalar_basis",
    "scalar_basis_coeffs",
    "vector_basis",
    "vector_space_coeffs",
    "HarmonicExpansion",
    "analyze",
    "synthesize",
    "harmonicize",
    "grad_origin",
    "harmonic_extension_eval",
    "poincare_deficit",
    "harmonic_energy_check",
]

_NULL_TOL = 1e-10


@dataclass(frozen=True)
class HarmonicPoly:
    """A homogeneous harmonic polynomial of degree k in n variables."""

    n: int
    k: int
    poly: Poly

    @property
    def coeffs(self) -> dict:
        return self.poly.coeffs

    def __call__(self, points):
        return self.poly(points)


@dataclass
class Subspace:
    """An L2-orthonormal set of vector-harmonic fields (one degree, or the
    mixed-degree kernel of the conformal form)."""

    n: int
    k: int | None
    label: str
    coeffs: np.ndarray            # (dim, n, M_k); for mixed spaces a block list
    eigenvalue: float | None = None
    _maps: list | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return 0 if self.coeffs is None else self.coeffs.shape[0]

    @property
    def maps(self) -> list[SphereMap]:
        if self._maps is None:
            ms = []
            for a in range(self.dim):
                comps = []
                for i in range(self.n):
                    comps.append(_poly_from_coeffs(self.n, self.k, self.coeffs[a, i]))
                ms.append(poly_map(self.n, comps))
            self._maps = ms
        return self._maps

    def element(self, combo: np.ndarray) -> SphereMap:
        """Linear combination of basis fields with the given coefficients."""
        combo = np.asarray(combo, dtype=float)
        vec = np.einsum("a,aim->im", combo, self.coeffs)
        comps = [_poly_from_coeffs(self.n, self.k, vec[i]) for i in range(self.n)]
        return poly_map(self.n, comps)


def _poly_from_coeffs(n: int, k: int, vec: np.ndarray) -> Poly:
    return Poly(n, {e: c for e, c in zip(exps(n, k), vec) if c != 0.0})


def laplace_eigenvalue(n: int, k: int) -> int:
    return k * (k + n - 2)


def harmonic_dimension(n: int, k: int) -> int:
    """dim of degree-k scalar spherical harmonics: C(n+k-1,k) - C(n+k-3,k-2)."""
    if k == 0:
        return 1
    a = math.comb(n + k - 1, k)
    b = math.comb(n + k - 3, k - 2) if k >= 2 else 0
    return a - b


@lru_cache(maxsize=None)
def scalar_basis_coeffs(n: int, k: int) -> np.ndarray:
    """Orthonormal degree-k scalar harmonics as rows over monomial coefficients."""
    M = len(exps(n, k))
    if k <= 1:
        kernel = np.eye(M)
    else:
        # Laplacian as a (M_{k-2} x M_k) matrix; kernel = harmonic coefficients
        L = np.zeros((len(exps(n, k - 2)), M))
        for i in range(n):
            L += diff_matrix(n, k - 1, i) @ diff_matrix(n, k, i)
        _, s, vh = np.linalg.svd(L)
        ncon = int(np.sum(s > _NULL_TOL * s[0]))
        kernel = vh[ncon:]
    expected = harmonic_dimension(n, k)
    if kernel.shape[0] != expected:
        raise IntegrityError(
            f"harmonic space dim mismatch at (n={n}, k={k}): got {kernel.shape[0]}, want {expected}"
        )
    G = gram(n, k)
    basis = _mgs(kernel, G)
    if basis.shape[0] != expected:
        raise IntegrityError(f"orthonormalization lost rank at (n={n}, k={k})")
    if k == 0:
        basis = np.abs(basis)  # fix the constant to +1
    return basis


def _mgs(rows: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt of row vectors under inner(u,v) = u G v^t."""
    out = []
    for v in rows:
        w = v.copy()
        for b in out:
            w = w - (b @ G @ w) * b
        # second pass for numerical orthogonality
        for b in out:
            w = w - (b @ G @ w) * b
        nrm = math.sqrt(w @ G @ w)
        if nrm > 1e-12:
            out.append(w / nrm)
    return np.array(out)


def scalar_basis(n: int, k: int) -> list[HarmonicPoly]:
    """L2-orthonormal scalar spherical harmonics of degree k (normalized measure)."""
    C = scalar_basis_coeffs(n, k)
    return [HarmonicPoly(n, k, _poly_from_coeffs(n, k, row)) for row in C]


@lru_cache(maxsize=None)
def vector_space_coeffs(n: int, k: int) -> np.ndarray:
    """Orthonormal basis of H_{n,k} as a (dim, n, M_k) coefficient tensor.

    Candidates are e_i (x) psi_j; the mean-zero condition is automatic for
    k >= 1 and the radial moment constraint <w, x> integrating to zero only
    removes one dimension at k = 1.
    """
    if k < 1:
        raise ValueError("vector harmonics need k >= 1")
    S = scalar_basis_coeffs(n, k)   # (G, M)
    G_cnt, M = S.shape
    cand = np.zeros((n * G_cnt, n, M))
    for i in range(n):
        for j in range(G_cnt):
            cand[i * G_cnt + j, i] = S[j]
    if k == 1:
        # constraint: sum_i integral(w^i x_i) = 0
        from .moments import sphere_moment

        e1 = exps(n, 1)
        con = np.zeros(n * G_cnt)
        for i in range(n):
            unit = tuple(1 if l == i else 0 for l in range(n))
            mom = np.array([float(sphere_moment(n, tuple(a + b for a, b in zip(e, unit)))) for e in e1])
            for j in range(G_cnt):
                con[i * G_cnt + j] = mom @ S[j]
        _, s, vh = np.linalg.svd(con[None, :])
        null = vh[1:]
        combo = np.einsum("ab,bim->aim", null, cand)
        flat = combo.reshape(combo.shape[0], -1)
        Gblock = np.kron(np.eye(n), gram(n, k))
        ortho = _mgs(flat, Gblock)
        return ortho.reshape(-1, n, M)
    return cand


def vector_basis(n: int, k: int) -> Subspace:
    """The space H_{n,k} of degree-k vector harmonics inside H_n."""
    return Subspace(n, k, "full", vector_space_coeffs(n, k))


# ---------------------------------------------------------------------------
# analysis / synthesis
# ---------------------------------------------------------------------------

@dataclass
class HarmonicExpansion:
    """Blocks of coefficients against the cached orthonormal scalar bases."""

    n: int
    m: int
    kmax: int
    blocks: dict[int, np.ndarray]   # k -> (m, G_{n,k})
    quadrature_warning: bool = False

    def block_norm_sq(self, k: int) -> float:
        b = self.blocks.get(k)
        return 0.0 if b is None else float(np.sum(b * b))


def analyze(u: SphereMap, kmax: int, grid: SphereGrid | None = None) -> HarmonicExpansion:
    """Expand u in spherical harmonics up to degree kmax.

    Exact (moment-based) for poly maps; quadrature otherwise, flagging the
    result when the grid's exactness cannot support degree kmax products.
    """
    n, m = u.n, u.m
    blocks: dict[int, np.ndarray] = {}
    warn_flag = False
    if u.is_poly:
        comps = [pv_from_poly(c) for c in u.components]
        for k in range(kmax + 1):
            S = scalar_basis_coeffs(n, k)
            blk = np.zeros((m, S.shape[0]))
            for i, pv in enumerate(comps):
                for d, v in pv.parts.items():
                    if (d + k) % 2 == 0:
                        blk[i] += S @ gram_rect(n, k, d) @ v
            blocks[k] = blk
    else:
        if grid is None:
            grid = u.grid
        if grid is None:
            raise ValueError("non-poly map needs a grid for analysis")
        X, U, _ = u.sample(grid)
        deg_needed = 2 * kmax
        if grid.exactness and grid.exactness < deg_needed:
            warn_flag = True
            warnings.warn(
                f"grid exactness {grid.exactness} below 2*kmax={deg_needed}; "
                "coefficients carry quadrature error",
                stacklevel=2,
            )
        w = grid.weights
        for k in range(kmax + 1):
            basis = scalar_basis(n, k)
            vals = np.stack([b(X) for b in basis], axis=0)  # (G, N)
            blocks[k] = (U.T * w) @ vals.T
    return HarmonicExpansion(n, m, kmax, blocks, warn_flag)


def synthesize(e: HarmonicExpansion) -> SphereMap:
    """Poly-backed map whose components are the expansion's harmonic sums."""
    comps = []
    for i in range(e.m):
        p = Poly(e.n)
        for k, blk in e.blocks.items():
            S = scalar_basis_coeffs(e.n, k)
            vec = blk[i] @ S
            p = p + _poly_from_coeffs(e.n, k, vec)
        comps.append(p)
    return poly_map(e.n, comps)


def harmonicize(u: SphereMap) -> SphereMap:
    """The componentwise harmonic extension of a poly map's restriction,
    itself represented as a polynomial map (exact)."""
    if not u.is_poly:
        raise TypeError("harmonicize requires a poly-backed map")
    kmax = max(c.degree() for c in u.components)
    return synthesize(analyze(u, kmax))


def grad_origin(u: SphereMap, grid: SphereGrid | None = None) -> np.ndarray:
    """grad u_h(0) = n * integral of u (x) x, an (m, n) matrix."""
    n = u.n
    if u.is_poly:
        out = np.empty((u.m, n))
        for i, c in enumerate(u.components):
            pv = pv_from_poly(c)
            for j in range(n):
                out[i, j] = n * pv.xmul(j).sphere_integral()
        return out
    if grid is None:
        grid = u.grid
    X, U, _ = u.sample(grid)
    return n * np.einsum("a,ai,aj->ij", grid.weights, U, X)


def harmonic_extension_eval(e: HarmonicExpansion, point: np.ndarray) -> np.ndarray:
    """Evaluate the harmonic extension at a point of the closed unit ball."""
    point = np.asarray(point, dtype=float)
    if np.linalg.norm(point) > 1.0 + 1e-12:
        raise ValueError("point outside the closed unit ball")
    out = np.zeros(e.m)
    for k, blk in e.blocks.items():
        if k == 0:
            out += blk[:, 0]  # constant harmonic is identically 1
            continue
        basis = scalar_basis(e.n, k)
        vals = np.array([b.poly(point) for b in basis])
        out += blk @ vals
    return out


# ---------------------------------------------------------------------------
# Poincare deficit and harmonic-extension energies
# ---------------------------------------------------------------------------

def poincare_deficit(u: SphereMap, grid: SphereGrid | None = None) -> float:
    """(1/(n-1)) * tangential energy - variance; nonnegative up to roundoff."""
    n = u.n
    if u.is_poly:
        from .homogeneous import field_tangential_energy

        f = field_from_map(u)
        energy = field_tangential_energy(f)
        var = 0.0
        for c in f:
            mean = c.sphere_integral()
            var += c.pair(c) - mean * mean
        return energy / (n - 1) - var
    if grid is None:
        grid = u.grid
    X, U, J = u.sample(grid)
    from .spheremap import tangential_jacobians

    TJ = tangential_jacobians(J, X)
    energy = float(grid.weights @ np.einsum("aik,aik->a", TJ, TJ))
    mean = grid.weights @ U
    var = float(grid.weights @ np.einsum("ai,ai->a", U - mean, U - mean))
    return energy / (n - 1) - var


@dataclass(frozen=True)
class HarmonicEnergyReport:
    ball_energy: float          # avg over B_1 of |grad u_h|^2
    surface_energy: float       # avg over S of |grad u_h|^2
    tangential_energy: float    # avg over S of |grad_T u|^2
    bounds_ok: bool


def harmonic_energy_check(u: SphereMap, kmax: int | None = None,
                          grid: SphereGrid | None = None, tol: float = 1e-9) -> HarmonicEnergyReport:
    """Energies of the harmonic extension and the extension inequalities.

    ball <= n/(n-1) * tangential <= surface <= 2 * tangential, with
    equalities tight on degree-1 fields.
    """
    n = u.n
    if kmax is None:
        if not u.is_poly:
            raise ValueError("kmax required for non-poly maps")
        kmax = max(c.degree() for c in u.components)
    e = analyze(u, kmax, grid=grid)
    ball = surface = tang = 0.0
    for k, blk in e.blocks.items():
        if k == 0:
            continue
        nrm = float(np.sum(blk * blk))
        lam = laplace_eigenvalue(n, k)
        ball += n * k * nrm
        surface += (lam + k * k) * nrm
        tang += lam * nrm
    c = n / (n - 1)
    ok = (ball <= c * tang + tol) and (c * tang <= surface + tol) and (surface <= 2 * tang + tol)
    return HarmonicEnergyReport(ball, surface, tang, ok)
