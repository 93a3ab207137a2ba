"""The conformal group of S^{n-1}: explicit maps, infinitesimal fields,
recentering, gauge fixing, and nearest-rotation / nearest-Moebius fits.

A group element is O compose phi_{xi,lam}, where phi_{xi,lam} is the
stereographic conjugate of a dilation by lam with pole xi:

    phi(x) = (2 lam x + (c (lam-1)^2 + 1 - lam^2) xi) / (c (1-lam^2) + 1 + lam^2),
    c = <x, xi>,

with analytic Jacobian.  Composition goes through the Lorentz-group
representation (boost of rapidity -log lam along xi), which returns exact
standard-form parameters without any stereographic algebra.

The solvers are damped Newton iterations with finite-difference Jacobians:
`recenter` zeroes the mean of u compose phi over the (xi, log lam) chart;
`gauge_fix` zeroes the six-component first-moment functional (three
antisymmetrized first moments and the first moment of the extension's
divergence) over the full rotation x boost chart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .harmonics import scalar_basis
from .quadrature import SphereGrid, build_sphere_grid, default_sphere_grid
from .spheremap import SphereMap, callable_map, projectors, tangential_jacobians

__all__ = [
    "MoebiusMap",
    "InfMoebius",
    "moebius_apply",
    "moebius_jacobian",
    "as_sphere_map",
    "compose_with_map",
    "identity_moebius",
    "inverse",
    "compose",
    "random_moebius",
    "conformality_residual",
    "dilation_scale",
    "psi_functional",
    "recenter",
    "gauge_fix",
    "nearest_rotation",
    "NearestMoebiusResult",
    "nearest_moebius",
]


@dataclass(frozen=True)
class MoebiusMap:
    """O compose phi_{xi, lam} on S^{n-1}.

    The (xi, lam) chart is two-to-one: phi_{-xi, lam} and phi_{xi, 1/lam}
    are the same map, so solvers may return either representative.
    """

    n: int
    O: np.ndarray
    xi: np.ndarray
    lam: float

    def __post_init__(self):
        O = np.asarray(self.O, dtype=float)
        xi = np.asarray(self.xi, dtype=float)
        object.__setattr__(self, "O", O)
        object.__setattr__(self, "xi", xi)
        if O.shape != (self.n, self.n):
            raise ValueError("orthogonal part has wrong shape")
        if np.max(np.abs(O.T @ O - np.eye(self.n))) > 1e-12:
            raise ValueError("orthogonal part is not orthogonal to 1e-12")
        if abs(np.linalg.norm(xi) - 1.0) > 1e-12:
            raise ValueError("pole must be a unit vector")
        if not self.lam > 0:
            raise ValueError("dilation must be positive")

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return moebius_apply(self, X)


def identity_moebius(n: int = 3) -> MoebiusMap:
    xi = np.zeros(n)
    xi[-1] = 1.0
    return MoebiusMap(n, np.eye(n), xi, 1.0)


def moebius_apply(phi: MoebiusMap, X: np.ndarray) -> np.ndarray:
    """Apply the map to unit vectors, rows of X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    lam, xi = phi.lam, phi.xi
    c = X @ xi
    D = c * (1.0 - lam**2) + (1.0 + lam**2)
    if np.any(np.abs(D) <= 1e-14):
        raise ValueError("degenerate denominator (point off the sphere?)")
    g = c * (lam - 1.0) ** 2 + (1.0 - lam**2)
    Y = (2.0 * lam * X + g[:, None] * xi) / D[:, None]
    return Y @ phi.O.T


def moebius_jacobian(phi: MoebiusMap, X: np.ndarray) -> np.ndarray:
    """Analytic ambient Jacobians at unit vectors, shape (N, n, n)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n, lam, xi = phi.n, phi.lam, phi.xi
    c = X @ xi
    D = c * (1.0 - lam**2) + (1.0 + lam**2)
    g = c * (lam - 1.0) ** 2 + (1.0 - lam**2)
    N = 2.0 * lam * X + g[:, None] * xi
    JN = 2.0 * lam * np.eye(n)[None, :, :] + (lam - 1.0) ** 2 * np.einsum("i,j->ij", xi, xi)[None, :, :]
    J = JN / D[:, None, None] - np.einsum("ai,j->aij", N, (1.0 - lam**2) * xi) / (D**2)[:, None, None]
    return np.einsum("ij,ajk->aik", phi.O, J)


def as_sphere_map(phi: MoebiusMap) -> SphereMap:
    return callable_map(phi.n, phi.n, lambda X: moebius_apply(phi, X), lambda X: moebius_jacobian(phi, X))


def compose_with_map(u: SphereMap, phi: MoebiusMap) -> SphereMap:
    """u compose phi as a callable-backed map (chain rule on Jacobians)."""
    def value(X):
        return u.eval(moebius_apply(phi, X))

    def jac(X):
        Y = moebius_apply(phi, X)
        return np.einsum("aij,ajk->aik", u.jac(Y), moebius_jacobian(phi, X))

    return callable_map(u.n, u.m, value, jac)


# ---------------------------------------------------------------------------
# group structure through the Lorentz representation
# ---------------------------------------------------------------------------

def _boost(xi: np.ndarray, s: float, n: int) -> np.ndarray:
    B = np.eye(n + 1)
    B[:n, :n] += (np.cosh(s) - 1.0) * np.outer(xi, xi)
    B[:n, n] = np.sinh(s) * xi
    B[n, :n] = np.sinh(s) * xi
    B[n, n] = np.cosh(s)
    return B


def _lorentz(phi: MoebiusMap) -> np.ndarray:
    n = phi.n
    L = _boost(phi.xi, -np.log(phi.lam), n)
    R = np.eye(n + 1)
    R[:n, :n] = phi.O
    return R @ L


def _from_lorentz(L: np.ndarray, n: int) -> MoebiusMap:
    gamma = L[n, n]
    a = L[:n, n]
    na = np.linalg.norm(a)
    if na < 1e-14:
        O = _orthonormalize(L[:n, :n])
        return MoebiusMap(n, O, _default_pole(n), 1.0)
    ahat = a / na
    s = np.arcsinh(na)
    Rfull = _boost(ahat, -s, n) @ L
    O = _orthonormalize(Rfull[:n, :n])
    xi = O.T @ ahat
    xi = xi / np.linalg.norm(xi)
    return MoebiusMap(n, O, xi, float(np.exp(-s)))


def _orthonormalize(O: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(O)
    return u @ vt


def _default_pole(n: int) -> np.ndarray:
    xi = np.zeros(n)
    xi[-1] = 1.0
    return xi


def inverse(phi: MoebiusMap) -> MoebiusMap:
    """(O phi_{xi,lam})^{-1} = O^t phi_{O xi, 1/lam}."""
    return MoebiusMap(phi.n, phi.O.T, phi.O @ phi.xi, 1.0 / phi.lam)


def compose(phi1: MoebiusMap, phi2: MoebiusMap) -> MoebiusMap:
    """Standard-form parameters of phi1 compose phi2."""
    if phi1.n != phi2.n:
        raise ValueError("dimension mismatch")
    return _from_lorentz(_lorentz(phi1) @ _lorentz(phi2), phi1.n)


def random_moebius(rng: np.random.Generator, n: int = 3, lam_range=(0.5, 2.0),
                   rotate: bool = True) -> MoebiusMap:
    xi = rng.normal(size=n)
    xi /= np.linalg.norm(xi)
    lam = float(np.exp(rng.uniform(np.log(lam_range[0]), np.log(lam_range[1]))))
    if rotate:
        O = _orthonormalize(rng.normal(size=(n, n)))
        if np.linalg.det(O) < 0:
            O[:, 0] = -O[:, 0]
    else:
        O = np.eye(n)
    return MoebiusMap(n, O, xi, lam)


def conformality_residual(phi: MoebiusMap, grid: SphereGrid | None = None) -> float:
    """Max-node deviation of grad^t grad from (|grad|^2/(n-1)) I on T_xS."""
    g = grid or default_sphere_grid(phi.n)
    X = g.nodes
    J = moebius_jacobian(phi, X)
    TJ = tangential_jacobians(J, X)
    P = projectors(X)
    G = np.einsum("aki,akj->aij", TJ, TJ)
    e = np.einsum("aik,aik->a", TJ, TJ) / (phi.n - 1)
    R = G - e[:, None, None] * P
    return float(np.max(np.sqrt(np.einsum("aij,aij->a", R, R))))


# ---------------------------------------------------------------------------
# infinitesimal Moebius fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InfMoebius:
    """Tangent vector S x + mu (<x, xi> x - xi) of the conformal group at id."""

    S: np.ndarray
    mu: float
    xi: np.ndarray

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float)
        xi = np.asarray(self.xi, dtype=float)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "xi", xi)
        if np.max(np.abs(S + S.T)) > 1e-12:
            raise ValueError("rotation part must be skew")
        if abs(np.linalg.norm(xi) - 1.0) > 1e-12:
            raise ValueError("pole must be unit")

    def field_map(self) -> SphereMap:
        from .polynomials import Poly
        from .spheremap import poly_map

        n = self.S.shape[0]
        comps = []
        for i in range(n):
            p = Poly(n)
            for l in range(n):
                if self.S[i, l] != 0.0:
                    p = p + Poly.coordinate(n, l).scale(self.S[i, l])
            inner = Poly(n)
            for l in range(n):
                inner = inner + Poly.coordinate(n, l).scale(self.mu * self.xi[l])
            p = p + inner * Poly.coordinate(n, i)
            p = p + Poly.constant(n, -self.mu * self.xi[i])
            comps.append(p)
        return poly_map(n, comps)


# ---------------------------------------------------------------------------
# gauge functionals and solvers
# ---------------------------------------------------------------------------

def dilation_scale(u: SphereMap, grid: SphereGrid | None = None) -> float:
    """lambda_u = avg <u, x>, the linearization-compatible scale."""
    g = grid or u.grid or default_sphere_grid(u.n)
    X, U, _ = u.sample(g)
    return float(g.weights @ np.einsum("ai,ai->a", U, X))


def _psi_parts(n: int):
    """Cache degree-2 basis values on a grid plus divergence coefficient maps."""
    basis = scalar_basis(n, 2)
    # divergence of the extension of alpha_{i,g} psi_g e_i is
    # sum_i d_i(alpha_{i,g} psi_g); psi_g quadratic => d_i psi_g linear:
    # coefficient of x_l in d_i psi_g:
    G2 = len(basis)
    dcoef = np.zeros((n, G2, n))  # (i, g, l)
    for gidx, b in enumerate(basis):
        for i in range(n):
            dp = b.poly.diff(i)
            for e, cc in dp.coeffs.items():
                l = list(e).index(1)
                dcoef[i, gidx, l] = cc
    return basis, dcoef


_PSI_CACHE: "weakref.WeakKeyDictionary" = None


def psi_functional(v: SphereMap, grid: SphereGrid) -> np.ndarray:
    """Six-component gauge residual of a map v: S^2 -> R^3.

    First three entries: antisymmetrized first moments avg(v^i x_j - v^j x_i),
    (i,j) in ((1,2),(1,3),(2,3)); last three: avg (div v_h) x, evaluated from
    the degree-2 block in closed form.
    """
    global _PSI_CACHE
    if _PSI_CACHE is None:
        import weakref

        _PSI_CACHE = weakref.WeakKeyDictionary()
    n = v.n
    if grid not in _PSI_CACHE:
        basis, dcoef = _psi_parts(n)
        vals = np.stack([b(grid.nodes) for b in basis], axis=0)
        _PSI_CACHE[grid] = (vals, dcoef)
    vals, dcoef = _PSI_CACHE[grid]
    X = grid.nodes
    w = grid.weights
    U = v.eval(X) if not v.is_sampled else v.sample(grid)[1]
    M = np.einsum("a,ai,aj->ij", w, U, X)
    skew = np.array([M[0, 1] - M[1, 0], M[0, 2] - M[2, 0], M[1, 2] - M[2, 1]])
    alpha = (U.T * w) @ vals.T               # (n, G2)
    c = np.einsum("ig,igl->l", alpha, dcoef)  # div of extension = sum_l c_l x_l
    divmom = c / n
    return np.concatenate([skew, divmom])


def _damped_newton(F, x0: np.ndarray, tol: float, max_iter: int = 40,
                   fd_step: float = 1e-6):
    """Damped Newton with forward-difference Jacobian; returns (x, |F|, ok)."""
    x = np.asarray(x0, dtype=float).copy()
    fx = F(x)
    norm = np.linalg.norm(fx)
    for _ in range(max_iter):
        if norm <= tol:
            return x, norm, True
        J = np.empty((len(fx), len(x)))
        for j in range(len(x)):
            xp = x.copy()
            xp[j] += fd_step
            J[:, j] = (F(xp) - fx) / fd_step
        try:
            step = np.linalg.solve(J, -fx)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(J, fx, rcond=None)[0]
        t = 1.0
        for _ in range(12):
            xn = x + t * step
            fn = F(xn)
            nn = np.linalg.norm(fn)
            if nn < norm:
                x, fx, norm = xn, fn, nn
                break
            t *= 0.5
        else:
            return x, norm, norm <= tol
    return x, norm, norm <= tol


def recenter(u: SphereMap, grid: SphereGrid | None = None, tol: float = 1e-8,
             require_unit_norm: bool = True) -> MoebiusMap:
    """Find phi_{xi, lam} with avg u compose phi = 0.

    For unit-norm degree +-1 maps a zero exists; the solver runs damped
    Newton over the (pole chart, log lam) parameters from a heuristic
    start, falling back to a coarse pole x dilation sweep.
    """
    n = u.n
    if n != 3:
        raise ValueError("recentering implemented on S^2")
    g = grid or u.grid or default_sphere_grid(3)
    X, w = g.nodes, g.weights
    if require_unit_norm:
        U = u.eval(X)
        if np.max(np.abs(np.linalg.norm(U, axis=1) - 1.0)) > 1e-6:
            raise ValueError("recentering expects a unit-norm map")

    def mean_of(xi, s):
        phi = MoebiusMap(3, np.eye(3), xi, float(np.exp(s)))
        return w @ u.eval(moebius_apply(phi, X))

    b = w @ u.eval(X)
    if np.linalg.norm(b) <= tol:
        return identity_moebius(3)

    def solve_from(xi0, s0):
        # Newton in a pole chart re-centered after every solve, so the
        # chart stays a local diffeomorphism even for large pole moves
        xi = np.asarray(xi0, dtype=float) / np.linalg.norm(xi0)
        s = s0
        nrm = np.inf
        for _ in range(6):
            t1, t2 = _tangent_frame(xi)

            def F(p, xi=xi, t1=t1, t2=t2, s=s):
                xin = xi + p[0] * t1 + p[1] * t2
                xin /= np.linalg.norm(xin)
                return mean_of(xin, s + p[2])

            p, nrm, ok = _damped_newton(F, np.zeros(3), tol, max_iter=15)
            xin = xi + p[0] * t1 + p[1] * t2
            xi = xin / np.linalg.norm(xin)
            s = s + p[2]
            if ok:
                break
        return MoebiusMap(3, np.eye(3), xi, float(np.exp(s))), nrm

    bhat = b / np.linalg.norm(b)
    candidates = []
    for xi0 in (-bhat, bhat):
        for s0 in np.log(np.geomspace(0.15, 6.0, 9)):
            candidates.append((np.linalg.norm(mean_of(xi0, s0)), xi0, s0))
    candidates.sort(key=lambda t: t[0])
    for _, xi0, s0 in candidates[:4]:
        phi, nrm = solve_from(xi0, s0)
        if nrm <= tol:
            return phi
    # full coarse sweep fallback
    coarse = build_sphere_grid(3, 8)
    best = None
    for xi0 in coarse.nodes[:: max(1, coarse.size // 64)]:
        for s0 in np.log(np.geomspace(0.1, 10.0, 11)):
            r = np.linalg.norm(mean_of(xi0, s0))
            if best is None or r < best[0]:
                best = (r, xi0.copy(), s0)
    phi, nrm = solve_from(best[1], best[2])
    if nrm <= tol:
        return phi
    raise SolverError(
        f"recentering failed (residual {nrm:.2e}); is the map degree +-1 unit-norm?"
    )


def _tangent_frame(xi: np.ndarray):
    a = np.zeros_like(xi)
    a[int(np.argmin(np.abs(xi)))] = 1.0
    t1 = np.cross(xi, a)
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(xi, t1)
    return t1, t2


def _rotation_from_axis_angle(r: np.ndarray) -> np.ndarray:
    theta = np.linalg.norm(r)
    if theta < 1e-14:
        K = _skew_of(r)
        return np.eye(3) + K
    k = r / theta
    K = _skew_of(k)
    return np.eye(3) + np.sin(theta) * K + (1.0 - np.cos(theta)) * (K @ K)


def _skew_of(r: np.ndarray) -> np.ndarray:
    return np.array([[0.0, -r[2], r[1]], [r[2], 0.0, -r[0]], [-r[1], r[0], 0.0]])


def _param_moebius(theta: np.ndarray) -> MoebiusMap:
    """(axis-angle, boost vector) chart of the identity component."""
    R = _rotation_from_axis_angle(theta[:3])
    v = theta[3:]
    nv = np.linalg.norm(v)
    if nv < 1e-14:
        return MoebiusMap(3, R, _default_pole(3), 1.0)
    return MoebiusMap(3, R, v / nv, float(np.exp(nv)))


def gauge_fix(u: SphereMap, grid: SphereGrid | None = None, tol: float = 1e-7) -> MoebiusMap:
    """Find phi in the identity component with Psi_{u}(phi) = 0.

    Zeroing the six first-moment components is equivalent to killing the
    projection of u compose phi onto the kernel block (skew fields plus the
    degree-2 complement).  Needs u reasonably W^{1,2}-close to the
    identity; the initial distance is reported on failure.
    """
    if u.n != 3 or u.m != 3:
        raise ValueError("gauge fixing implemented for maps of S^2 into R^3")
    g = grid or u.grid or default_sphere_grid(3)

    def F(theta):
        return psi_functional(compose_with_map(u, _param_moebius(theta)), g)

    theta, nrm, ok = _damped_newton(F, np.zeros(6), tol, max_iter=40)
    if not ok:
        X = g.nodes
        J = u.jac(X)
        P = projectors(X)
        dist = float(
            np.sqrt(g.weights @ np.einsum("aik,aik->a", tangential_jacobians(J, X) - P, tangential_jacobians(J, X) - P))
        )
        raise SolverError(
            f"gauge Newton stalled at residual {nrm:.2e}; "
            f"initial W12 gradient distance to the identity was {dist:.3f}"
        )
    return _param_moebius(theta)


# ---------------------------------------------------------------------------
# nearest rotation / nearest Moebius
# ---------------------------------------------------------------------------

def nearest_rotation(u: SphereMap, grid: SphereGrid | None = None) -> tuple[np.ndarray, float]:
    """Closed-form minimizer of avg |grad_T u - O P_T|^2 over O(n).

    With M = avg (ambient grad u)(I - x x^t), the optimum is O = U V^t from
    the SVD of M, with value energy + (n-1) - 2 ||M||_*.
    """
    n = u.n
    if u.m != n:
        raise ValueError("nearest rotation needs a map into R^n")
    from .forms import tangential_energy

    if u.is_poly:
        from .homogeneous import field_from_map, field_radials

        f = field_from_map(u)
        radials = field_radials(f)
        M = np.empty((n, n))
        for i in range(n):
            for l in range(n):
                M[i, l] = (f[i].diff(l) - radials[i].xmul(l)).sphere_integral()
        energy = tangential_energy(u)
    else:
        g = grid or u.grid or default_sphere_grid(n)
        X, U, J = u.sample(g)
        TJ = tangential_jacobians(J, X)
        M = np.einsum("a,ail->il", g.weights, TJ)
        energy = float(g.weights @ np.einsum("aik,aik->a", TJ, TJ))
    Um, s, Vt = np.linalg.svd(M)
    O = Um @ Vt
    value = energy + (n - 1) - 2.0 * float(np.sum(s))
    return O, max(value, 0.0)


@dataclass(frozen=True)
class NearestMoebiusResult:
    phi: MoebiusMap
    lam: float
    value: float
    recentred: bool


def nearest_moebius(u: SphereMap, grid: SphereGrid | None = None) -> NearestMoebiusResult:
    """Approximately minimize avg |(1/lam) grad_T u - grad_T phi|^2.

    Pipeline: recenter a norm-normalized copy when possible, read the scale
    from avg <u compose phi, x>, align with the nearest rotation, then
    polish the six group parameters derivative-free.  The result is an
    achieved upper bound, not a certified global minimum.
    """
    from scipy.optimize import minimize

    if u.n != 3 or u.m != 3:
        raise ValueError("nearest Moebius implemented for maps of S^2 into R^3")
    g = grid or u.grid or default_sphere_grid(3)
    X, w = g.nodes, g.weights
    from .deficits import signed_volume

    if abs(signed_volume(u, g)) <= 1e-10:
        raise ValueError("signed volume vanishes; no Moebius fit")

    J_u = u.jac(X) if not u.is_sampled else u.sample(g)[2]
    TJ_u = tangential_jacobians(J_u, X)
    a = float(w @ np.einsum("aik,aik->a", TJ_u, TJ_u))

    def value_of(phi: MoebiusMap):
        Jp = moebius_jacobian(phi, X)
        TJp = tangential_jacobians(Jp, X)
        b = float(w @ np.einsum("aik,aik->a", TJ_u, TJp))
        c = float(w @ np.einsum("aik,aik->a", TJp, TJp))
        if b <= 0:
            return np.inf, np.inf
        return c - b * b / a, a / b

    # step 1: try to recenter a normalized copy of u
    recentred = False
    phi1 = identity_moebius(3)
    U = u.eval(X) if not u.is_sampled else u.sample(g)[1]
    radius = np.linalg.norm(U, axis=1)
    r0 = float(w @ radius)
    if r0 > 1e-10 and np.max(np.abs(radius / r0 - 1.0)) < 0.3:
        try:
            scaled = callable_map(3, 3, lambda P: u.eval(P) / r0, None)
            phi1 = recenter(scaled, g, tol=1e-8, require_unit_norm=False)
            recentred = True
        except SolverError:
            phi1 = identity_moebius(3)
    v = compose_with_map(u, phi1)
    lam0 = dilation_scale(v, g)
    if lam0 <= 0:
        lam0 = r0 if r0 > 0 else 1.0
    O, _ = nearest_rotation(callable_map(3, 3, lambda P: v.eval(P) / lam0, lambda P: v.jac(P) / lam0), g)
    if np.linalg.det(O) < 0:
        # keep the candidate in the identity component; the polish handles the rest
        O = O @ np.diag([1.0, 1.0, -1.0])
    phi_star = compose(MoebiusMap(3, _orthonormalize(O), _default_pole(3), 1.0), inverse(phi1))

    def objective(theta):
        try:
            phi = compose(_param_moebius(theta), phi_star)
        except ValueError:
            return np.inf
        val, _ = value_of(phi)
        return val

    res = minimize(objective, np.zeros(6), method="Nelder-Mead",
                   options={"maxiter": 400, "xatol": 1e-9, "fatol": 1e-12})
    theta = res.x if res.fun <= objective(np.zeros(6)) else np.zeros(6)
    phi_best = compose(_param_moebius(theta), phi_star)
    val, lam = value_of(phi_best)
    return NearestMoebiusResult(phi_best, float(lam), float(val), recentred)
