"""Gauss-Legendre collocation tableaux and the symplecticity check."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import NumericalError, UnsupportedError

# Beyond ten stages the double-precision collocation solves lose accuracy.
MAX_STAGES = 10
_DPS = 40


@dataclass(frozen=True, eq=False)
class ButcherTableau:
    s: int
    c: np.ndarray
    a: np.ndarray
    b: np.ndarray
    order: int

    @property
    def name(self) -> str:
        return f"gauss{self.s}"


def _legendre_roots(s: int, max_iter: int = 100) -> list:
    """Roots of P_s on [-1, 1], Newton on the three-term recurrence in extended precision."""
    tol = mpmath.mpf(10) ** (-(_DPS - 5))
    roots = []
    for i in range(1, s + 1):
        x = mpmath.cos(mpmath.pi * (i - mpmath.mpf(0.25)) / (s + mpmath.mpf(0.5)))
        for _ in range(max_iter):
            p0, p1 = mpmath.mpf(1), x
            for k in range(2, s + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dx = p1 / (s * (x * p1 - p0) / (x**2 - 1))
            x -= dx
            if abs(dx) < tol:
                break
        else:
            raise NumericalError(f"Legendre root finding did not converge for s={s}")
        roots.append(x)
    return sorted(roots)


def _lagrange_integral(c: list, j: int, upper) -> "mpmath.mpf":
    """Integral from 0 to ``upper`` of the j-th Lagrange basis polynomial on nodes c."""
    coeffs = [mpmath.mpf(1)]  # ascending powers
    denom = mpmath.mpf(1)
    for m, cm in enumerate(c):
        if m == j:
            continue
        coeffs = [-cm * coeffs[0]] + [coeffs[k - 1] - cm * coeffs[k] for k in range(1, len(coeffs))] + [coeffs[-1]]
        denom *= c[j] - cm
    return sum(ck * upper ** (k + 1) / (k + 1) for k, ck in enumerate(coeffs)) / denom


def gauss_legendre(s: int) -> ButcherTableau:
    """s-stage Gauss collocation method (order 2s).

    Abscissae are the zeros of the shifted Legendre polynomial
    d^s/dx^s [x^s (x-1)^s].  The coefficients satisfy the collocation
    conditions sum_j a_ij c_j^(k-1) = c_i^k / k and sum_i b_i c_i^(k-1) = 1/k,
    k = 1..s.  They are obtained by integrating the Lagrange basis on the
    nodes (the explicit solution of those Vandermonde systems), carried out
    at 40 digits and rounded once to double precision.
    """
    if int(s) != s or not 1 <= s <= MAX_STAGES:
        raise UnsupportedError(f"stage count must be in 1..{MAX_STAGES}, got s={s}")
    s = int(s)
    with mpmath.workdps(_DPS):
        c_mp = [(x + 1) / 2 for x in _legendre_roots(s)]
        a = np.array([[float(_lagrange_integral(c_mp, j, ci)) for j in range(s)] for ci in c_mp])
        b = np.array([float(_lagrange_integral(c_mp, j, mpmath.mpf(1))) for j in range(s)])
        c = np.array([float(ci) for ci in c_mp])
    for arr in (c, a, b):
        arr.setflags(write=False)
    return ButcherTableau(s=s, c=c, a=a, b=b, order=2 * s)


def symplectic_defect(t: ButcherTableau) -> float:
    """max_ij |b_i a_ij + b_j a_ji - b_i b_j|; zero for symplectic methods."""
    b, a = np.asarray(t.b), np.asarray(t.a)
    m = b[:, None] * a
    return float(np.abs(m + m.T - np.outer(b, b)).max())
