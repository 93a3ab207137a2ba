"""Dense-dict polynomials in n ambient variables.

A polynomial is a map from exponent multi-indices (length-n tuples) to real
coefficients.  Products, derivatives and Laplacians stay in this
representation; integrals over S^{n-1} / B_1 reduce to the exact moments of
:mod:`spherestab.moments`.  Two polynomials that agree on the sphere (e.g.
representatives differing by a multiple of |x|^2 - 1) have equal sphere
integrals, so any smooth extension may be used as a representative.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .moments import ball_moment, sphere_moment

__all__ = ["Poly", "monomial_exponents", "moment_gram"]

Exponent = tuple[int, ...]


class Poly:
    """Polynomial in n variables stored as {exponent tuple: coefficient}."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict[Exponent, float] | None = None):
        self.n = n
        self.coeffs: dict[Exponent, float] = {}
        if coeffs:
            for e, c in coeffs.items():
                if c != 0.0:
                    self.coeffs[tuple(e)] = self.coeffs.get(tuple(e), 0.0) + c

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(n: int) -> "Poly":
        return Poly(n)

    @staticmethod
    def constant(n: int, c: float) -> "Poly":
        return Poly(n, {(0,) * n: float(c)})

    @staticmethod
    def coordinate(n: int, i: int) -> "Poly":
        e = [0] * n
        e[i] = 1
        return Poly(n, {tuple(e): 1.0})

    # -- algebra -------------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0.0) + c
        return Poly(self.n, out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0.0) - c
        return Poly(self.n, out)

    def __neg__(self) -> "Poly":
        return Poly(self.n, {e: -c for e, c in self.coeffs.items()})

    def scale(self, a: float) -> "Poly":
        if a == 0.0:
            return Poly(self.n)
        return Poly(self.n, {e: a * c for e, c in self.coeffs.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[Exponent, float] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return Poly(self.n, out)

    def diff(self, i: int) -> "Poly":
        out: dict[Exponent, float] = {}
        for e, c in self.coeffs.items():
            if e[i] > 0:
                e2 = list(e)
                e2[i] -= 1
                key = tuple(e2)
                out[key] = out.get(key, 0.0) + c * e[i]
        return Poly(self.n, out)

    def laplacian(self) -> "Poly":
        out = Poly(self.n)
        for i in range(self.n):
            out = out + self.diff(i).diff(i)
        return out

    def gradient(self) -> list["Poly"]:
        return [self.diff(i) for i in range(self.n)]

    # -- queries ---------------------------------------------------------
    def degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(sum(e) for e in self.coeffs)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.coeffs.values())

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at points, shape (N, n) or (n,)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(pts.shape[0])
        for e, c in self.coeffs.items():
            term = np.full(pts.shape[0], c)
            for i, ei in enumerate(e):
                if ei:
                    term = term * pts[:, i] ** ei
            out += term
        if np.ndim(points) == 1:
            return out[0]
        return out

    # -- exact integrals ---------------------------------------------------
    def sphere_integral(self) -> float:
        """Normalized integral over S^{n-1}, exact moment sum."""
        return float(sum(c * float(sphere_moment(self.n, e)) for e, c in self.coeffs.items()))

    def ball_integral(self) -> float:
        """Normalized integral over B_1, exact moment sum."""
        return float(sum(c * float(ball_moment(self.n, e)) for e, c in self.coeffs.items()))

    def __repr__(self) -> str:  # pragma: no cover
        terms = sorted(self.coeffs.items())
        return f"Poly(n={self.n}, {dict(terms)})"


def monomial_exponents(n: int, k: int) -> list[Exponent]:
    """All exponent multi-indices of total degree exactly k, in a fixed order."""
    out = []
    for combo in combinations_with_replacement(range(n), k):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort()
    return out


@lru_cache(maxsize=None)
def moment_gram(n: int, k: int) -> np.ndarray:
    """Gram matrix of degree-k monomials under the normalized sphere measure.

    Entry (a, b) is the exact moment of x^(p_a + p_b), with the monomial
    order of :func:`monomial_exponents`.
    """
    exps = monomial_exponents(n, k)
    m = len(exps)
    G = np.empty((m, m))
    for a in range(m):
        for b in range(a, m):
            e = tuple(pa + pb for pa, pb in zip(exps[a], exps[b]))
            G[a, b] = G[b, a] = float(sphere_moment(n, e))
    return G
