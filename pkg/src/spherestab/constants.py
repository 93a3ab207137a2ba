"""Exact rational diagonalization constants of the quadratic forms.

On the A-eigenspace with spectrum value sigma in {-k, 1, k+n-2} and
Laplace eigenvalue lambda = k(k+n-2), the volume form contributes

    c = n sigma / (2 lambda)            (ratio Q_V / tangential energy)

the squared surface divergence contributes the ratio alpha (zero on the
tangential divergence-free spaces), and the conformal-isoperimetric form
the ratio C.  The primed constants belong to the isometric-isoperimetric
combination at weight n/(n-1), and the tilde constants absorb the
divergence cross terms that appear for n >= 4, with the k >= 5 correction
on the first family.  All values are kept as Fractions; the sharp minimum
1/4 for n = 3 is asserted rationally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "sigma_value",
    "laplace_eig",
    "c_ratio",
    "alpha_ratio",
    "C_ratio",
    "C_prime_ratio",
    "C_tilde_ratio",
    "constants",
    "valid_rows",
    "CoercivityMin",
    "min_constant",
]


def _check(n: int, k: int, i: int) -> None:
    if n < 2 or k < 1 or i not in (1, 2, 3):
        raise ValueError(f"invalid row (n={n}, k={k}, i={i})")
    if i == 3 and k < 2:
        raise ValueError("the complement eigenspace is trivial at k = 1")


def sigma_value(n: int, k: int, i: int) -> int:
    _check(n, k, i)
    return {1: -k, 2: 1, 3: k + n - 2}[i]


def laplace_eig(n: int, k: int) -> int:
    return k * (k + n - 2)


def c_ratio(n: int, k: int, i: int) -> Fraction:
    return Fraction(n * sigma_value(n, k, i), 2 * laplace_eig(n, k))


def alpha_ratio(n: int, k: int, i: int) -> Fraction:
    _check(n, k, i)
    if i == 2:
        return Fraction(0)
    if i == 1:
        return Fraction(k * (k + 1), (k + n - 2) * (2 * k + n))
    return Fraction((k + n - 2) * (k + n - 3), k * (2 * k + n - 4))


def C_ratio(n: int, k: int, i: int) -> Fraction:
    return (
        Fraction(n, 2 * (n - 1))
        + Fraction(n * (n - 3), 2 * (n - 1) ** 2) * alpha_ratio(n, k, i)
        - c_ratio(n, k, i)
    )


def C_prime_ratio(n: int, k: int, i: int) -> Fraction:
    return (
        Fraction(n, 2 * (n - 1))
        + Fraction(n, 2 * (n - 1)) * alpha_ratio(n, k, i)
        - c_ratio(n, k, i)
    )


def C_tilde_ratio(n: int, k: int, i: int) -> Fraction:
    """Cross-term-adjusted coercivity constants; defined for
    (i=1, k>=1), (i=2, k>=2), (i=3, k>=3)."""
    _check(n, k, i)
    C = C_ratio(n, k, i)
    if i == 2:
        if k < 2:
            raise ValueError("tilde row (k,2) needs k >= 2")
        return C
    if i == 1:
        extra = Fraction(k * (k + n - 4), k - 4) if k >= 5 else Fraction(0)
        corr = Fraction(n * (n - 3) * (k + 1), 4 * (n - 1) ** 2 * (k + n - 2) * (2 * k + n))
        return C - corr * (extra + (k + n))
    if k < 3:
        raise ValueError("tilde row (k,3) needs k >= 3")
    corr = Fraction(n * (n - 3), 2 * (n - 1) ** 2) * Fraction((k - 2) * (k + n - 3), k * (2 * k + n - 4))
    return C - corr


def constants(n: int, k: int, i: int) -> tuple[Fraction, Fraction, Fraction, Fraction, Fraction | None]:
    """(c, alpha, C, C', C~) for one (n, k, i) row; C~ is None where undefined."""
    c = c_ratio(n, k, i)
    a = alpha_ratio(n, k, i)
    C = C_ratio(n, k, i)
    Cp = C_prime_ratio(n, k, i)
    try:
        Ct = C_tilde_ratio(n, k, i)
    except ValueError:
        Ct = None
    return c, a, C, Cp, Ct


def valid_rows(kmax: int) -> list[tuple[int, int]]:
    """(k, i) rows entering the coercivity minimum: the kernel rows (1,2),
    (2,3) and the trivial (1,3) are excluded."""
    rows = [(k, 1) for k in range(1, kmax + 1)]
    rows += [(k, 2) for k in range(2, kmax + 1)]
    rows += [(k, 3) for k in range(3, kmax + 1)]
    return rows


@dataclass(frozen=True)
class CoercivityMin:
    n: int
    kmax: int
    value: Fraction
    argmin: tuple[int, int]
    limit: Fraction               # common large-k limit n/(2(n-1))
    tail_gap: Fraction            # limit - largest tilde value among last rows
    tail_monotone: bool           # last 20 rows of each family approach the limit


def min_constant(n: int, kmax: int) -> CoercivityMin:
    """Minimum of the cross-term-adjusted constants over k <= kmax.

    For n = 3 the adjustment vanishes and the minimum is exactly 1/4 at
    (k, i) = (3, 3).  For n >= 4 the minimum is reported together with the
    large-k limit and the monotonicity of the last 20 rows; no claim is
    made about the global minimizer beyond kmax.
    """
    if kmax < 10:
        raise ValueError("kmax >= 10 required for a meaningful minimum")
    best: Fraction | None = None
    arg = (0, 0)
    series: dict[int, list[Fraction]] = {1: [], 2: [], 3: []}
    for k, i in valid_rows(kmax):
        v = C_tilde_ratio(n, k, i)
        series[i].append(v)
        if best is None or v < best:
            best, arg = v, (k, i)
    limit = Fraction(n, 2 * (n - 1))
    tail_mono = True
    worst_gap = Fraction(0)
    for i, vals in series.items():
        tail = vals[-20:]
        gaps = [abs(limit - v) for v in tail]
        if any(g2 > g1 for g1, g2 in zip(gaps, gaps[1:])):
            tail_mono = False
        worst_gap = max(worst_gap, gaps[-1])
    return CoercivityMin(n, kmax, best, arg, limit, worst_gap, tail_mono)
