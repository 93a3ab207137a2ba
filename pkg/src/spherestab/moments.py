"""Exact normalized monomial moments on the unit sphere and unit ball.

All integrals in this package are taken with respect to the *normalized*
measure (total mass 1) on S^{n-1} or B_1.  For a multi-index p the moment

    m(n, p) = avg over S^{n-1} of  prod_i x_i^{p_i}

vanishes if any p_i is odd, and otherwise equals

    prod_i (p_i - 1)!!  /  prod_{j=0}^{|p|/2 - 1} (n + 2j),

an exact rational number.  Ball moments carry the extra radial factor
n / (n + |p|).  These moments are the oracle for every polynomial identity
checked by the rest of the package.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

__all__ = ["sphere_moment", "ball_moment"]


def _double_factorial(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


@lru_cache(maxsize=None)
def _sphere_moment_cached(n: int, p: tuple[int, ...]) -> Fraction:
    if any(pi % 2 == 1 for pi in p):
        return Fraction(0)
    total = sum(p)
    num = 1
    for pi in p:
        num *= _double_factorial(pi - 1)
    den = 1
    for j in range(total // 2):
        den *= n + 2 * j
    return Fraction(num, den)


def sphere_moment(n: int, p: tuple[int, ...]) -> Fraction:
    """Normalized moment of the monomial x^p over S^{n-1}, exact.

    Parameters
    ----------
    n : int
        Ambient dimension, n >= 2.
    p : tuple of nonnegative ints
        Multi-index; shorter tuples are padded with zeros.

    Returns
    -------
    Fraction
        avg_{S^{n-1}} prod x_i^{p_i}; zero when any exponent is odd.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    p = tuple(int(pi) for pi in p)
    if len(p) > n:
        if any(pi != 0 for pi in p[n:]):
            raise ValueError("multi-index longer than dimension")
        p = p[:n]
    if any(pi < 0 for pi in p):
        raise ValueError("negative exponent")
    # trailing zeros do not change the value; strip for cache hits
    while p and p[-1] == 0:
        p = p[:-1]
    return _sphere_moment_cached(n, p)


def ball_moment(n: int, p: tuple[int, ...]) -> Fraction:
    """Normalized moment of x^p over the unit ball: (n/(n+|p|)) * sphere moment."""
    m = sphere_moment(n, p)
    if m == 0:
        return m
    total = sum(int(pi) for pi in p)
    return m * Fraction(n, n + total)
