"""
Fourier pseudo-spectral machinery on a periodic 1-D grid.

Mode ordering (the single convention used everywhere in the package) is the
standard DFT layout::

    k = [0, 1, ..., N/2-1, N/2, -N/2+1, ..., -1]

Odd-order derivatives use the symbol ``i*mu*k`` with the Nyquist entry
(index N/2) set to zero; even-order derivatives keep it.  With that rule the
FFT route reproduces the dense collocation matrices exactly, including on
the Nyquist mode.

All state vectors are real.  Every FFT-based operator checks that the
imaginary residue of its output is negligible and drops it; a large residue
means a wrong symbol table and raises ``NumericalError``.

Operators act along the last axis, so a stack of stage vectors of shape
``(s, N)`` can be differentiated in one call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError, NumericalError, UnsupportedError

IMAG_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """Periodic collocation grid with its Fourier derivative symbols."""

    n: int
    x_left: float
    x_right: float
    h: float
    mu: float
    nodes: np.ndarray
    odd_symbol: np.ndarray
    even_symbol: np.ndarray

    @property
    def length(self) -> float:
        return self.x_right - self.x_left

    def symbol(self, r: int) -> np.ndarray:
        """Diagonal of the Fourier representation of ``D_r``."""
        _check_order(r)
        base = self.odd_symbol if r % 2 else self.even_symbol
        return base**r


def build_grid(n: int, x_left: float, x_right: float) -> SpectralGrid:
    if int(n) != n:
        raise ConfigurationError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n % 2:
        raise ConfigurationError(f"n must be even, got n={n}")
    if n < 4:
        raise ConfigurationError(f"n must be >= 4, got n={n}")
    x_left, x_right = float(x_left), float(x_right)
    if not (np.isfinite(x_left) and np.isfinite(x_right)) or not x_left < x_right:
        raise ConfigurationError(
            f"domain must satisfy x_left < x_right, got x_left={x_left}, x_right={x_right}"
        )
    length = x_right - x_left
    h = length / n
    mu = 2.0 * np.pi / length
    nodes = x_left + h * np.arange(n)
    k = np.fft.fftfreq(n, d=1.0 / n)  # [0, 1, ..., N/2-1, -N/2, ..., -1]
    k_even = k.copy()
    k_even[n // 2] = n // 2
    k_odd = k.copy()
    k_odd[n // 2] = 0.0
    odd_symbol = 1j * mu * k_odd
    even_symbol = 1j * mu * k_even
    for arr in (nodes, odd_symbol, even_symbol):
        arr.setflags(write=False)
    return SpectralGrid(n, x_left, x_right, h, mu, nodes, odd_symbol, even_symbol)


def _check_order(r):
    if r not in (1, 2, 3, 4):
        raise UnsupportedError(f"derivative order must be in 1..4, got r={r}")


def _check_length(grid: SpectralGrid, u: np.ndarray):
    if u.shape[-1:] != (grid.n,):
        raise DimensionError(f"expected trailing length {grid.n}, got shape {u.shape}")


def real_part(z: np.ndarray, scale: float | None = None) -> np.ndarray:
    """Drop the imaginary residue of an inverse FFT after checking it is roundoff."""
    imag = np.abs(z.imag).max(initial=0.0)
    if imag:
        ref = np.abs(z.real).max(initial=0.0) if scale is None else scale
        if imag > IMAG_RTOL * max(ref, 1.0):
            raise NumericalError(
                f"non-real FFT output: imaginary residue {imag:.3e} vs scale {ref:.3e}"
            )
    return np.ascontiguousarray(z.real)


def to_fourier(u: np.ndarray) -> np.ndarray:
    return np.fft.fft(u, axis=-1)


def from_fourier(uhat: np.ndarray, scale: float | None = None) -> np.ndarray:
    return real_part(np.fft.ifft(uhat, axis=-1), scale)


def apply_symbol(grid: SpectralGrid, u: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    """Multiply ``u`` by a Fourier-diagonal operator and return the real result."""
    u = np.asarray(u, dtype=float)
    _check_length(grid, u)
    return from_fourier(symbol * to_fourier(u), scale=np.abs(u).max(initial=0.0) * np.abs(symbol).max())


def apply_diff(grid: SpectralGrid, u: np.ndarray, r: int) -> np.ndarray:
    """Spectral derivative ``D_r u`` via the FFT."""
    _check_order(r)
    return apply_symbol(grid, u, grid.symbol(r))


def dense_diff_matrix(grid: SpectralGrid, r: int) -> np.ndarray:
    """Closed-form collocation matrix ``D_r``; a test oracle, O(N^2) memory."""
    _check_order(r)
    n, mu = grid.n, grid.mu
    j = np.arange(n)
    diff = j[:, None] - j[None, :]
    off = diff != 0
    sign = np.where(diff % 2 == 0, 1.0, -1.0)  # (-1)^(j+k) == (-1)^(j-k)
    theta = np.where(off, np.pi * diff / n, 1.0)  # mu (x_j - x_k) / 2
    cot = np.cos(theta) / np.sin(theta)
    csc = 1.0 / np.sin(theta)
    if r == 1:
        mat = 0.5 * mu * sign * cot
        diag = 0.0
    elif r == 2:
        mat = -0.5 * mu**2 * sign * csc**2
        diag = -(mu**2) * (n**2 + 2) / 12.0
    elif r == 3:
        mat = 0.75 * mu**3 * sign * np.cos(theta) * csc**3 - mu**3 * n**2 / 8.0 * sign * cot
        diag = 0.0
    else:
        mat = mu**4 * sign * csc**2 * (n**2 / 4.0 - 0.5 - 1.5 * cot**2)
        diag = mu**4 * (n**4 / 80.0 + n**2 / 12.0 - 1.0 / 30.0)
    mat = np.where(off, mat, 0.0)
    mat[j, j] = diag
    return mat


def helmholtz_symbol(grid: SpectralGrid, delta: float, alpha: float) -> np.ndarray:
    """Per-mode factor of ``I - delta D2 + alpha D4``: real and >= 1."""
    lam2 = (grid.even_symbol**2).real
    return 1.0 - delta * lam2 + alpha * lam2**2


def apply_helmholtz(grid: SpectralGrid, params, u: np.ndarray) -> np.ndarray:
    return apply_symbol(grid, u, helmholtz_symbol(grid, params.delta, params.alpha))


def apply_helmholtz_inverse(grid: SpectralGrid, params, u: np.ndarray) -> np.ndarray:
    return apply_symbol(grid, u, 1.0 / helmholtz_symbol(grid, params.delta, params.alpha))


def discrete_inner(u: np.ndarray, v: np.ndarray, h: float) -> float:
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise DimensionError(f"shape mismatch: {u.shape} vs {v.shape}")
    return float(h * np.dot(u, v))


def discrete_norm2(u: np.ndarray, h: float) -> float:
    return float(np.sqrt(discrete_inner(u, u, h)))


def discrete_norm_inf(u: np.ndarray) -> float:
    return float(np.abs(np.asarray(u, dtype=float)).max(initial=0.0))
