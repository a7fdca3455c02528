"""
Semi-discrete right-hand sides of the generalized Rosenau-type equation

    u_t + kappa u_x - delta u_xxt + b u_xxx + alpha u_xxxxt + beta (u^p)_x = 0

in two forms:

* momentum form  ``A_h dU/dt = F_h(U) U`` with the skew operator
  ``F_h(U) = -[kappa D1 + b D3 + p beta/(p+1) (U^{p-1} D1 + D1 U^{p-1})]``;
* quadratic auxiliary variable (QAV) form ``dU/dt = J_h g(U, Q)`` with
  ``J_h = -A_h^{-1} D1`` and auxiliaries q = u^2 (p = 2, 3) or
  q1 = u^2, q2 = u q1 (p = 5).

Powers are taken pointwise in physical space and derivatives in Fourier space.
No dealiasing is applied: the discrete conservation identities depend on the
plain collocation product.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import spectral
from .errors import ConfigurationError, DimensionError, StateError, UnsupportedError
from .spectral import SpectralGrid

QAV_EXPONENTS = (2, 3, 5)


@dataclass(frozen=True)
class EquationParams:
    kappa: float = 1.0
    delta: float = 1.0
    b_disp: float = 0.0
    alpha: float = 1.0
    beta: float = 1.0
    p: int = 2

    def __post_init__(self):
        if self.delta < 0:
            raise ConfigurationError(f"delta must be >= 0, got {self.delta}")
        if self.alpha < 0:
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha}")
        if int(self.p) != self.p or self.p < 2:
            raise ConfigurationError(f"p must be an integer >= 2, got {self.p}")
        object.__setattr__(self, "p", int(self.p))


@dataclass
class QavState:
    """Solution plus the quadratic auxiliary fields demanded by the exponent.

    Arrays may carry leading axes (stacked Runge-Kutta stages); all fields
    then share the same shape.
    """

    u: np.ndarray
    q: np.ndarray | None = None
    q1: np.ndarray | None = None
    q2: np.ndarray | None = None
    time: float = 0.0

    def require(self, p: int) -> None:
        if p not in QAV_EXPONENTS:
            raise UnsupportedError(f"QAV form supports p in {QAV_EXPONENTS}, got p={p}")
        needed = ("q",) if p in (2, 3) else ("q1", "q2")
        missing = [name for name in needed if getattr(self, name) is None]
        if missing:
            raise StateError(f"p={p} state is missing auxiliary field(s) {missing}")
        extra = [name for name in ("q", "q1", "q2") if name not in needed and getattr(self, name) is not None]
        if extra:
            raise StateError(f"p={p} state carries unexpected field(s) {extra}")

    def aux(self) -> dict[str, np.ndarray]:
        return {k: v for k, v in (("q", self.q), ("q1", self.q1), ("q2", self.q2)) if v is not None}

    def copy(self) -> "QavState":
        return replace(self, u=self.u.copy(), **{k: v.copy() for k, v in self.aux().items()})


def _vec(grid: SpectralGrid, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape[-1:] != (grid.n,):
        raise DimensionError(f"expected trailing length {grid.n}, got shape {u.shape}")
    return u


def nonlinear_flux_hat(grid: SpectralGrid, params: EquationParams, u: np.ndarray) -> np.ndarray:
    """Fourier coefficients of p beta/(p+1) (U^{p-1} . D1 U + D1(U^p))."""
    p, lam = params.p, grid.odd_symbol
    up1 = u ** (p - 1)
    du = spectral.from_fourier(lam * spectral.to_fourier(u), scale=np.abs(u).max(initial=0.0) * grid.mu * grid.n)
    hats = spectral.to_fourier(np.stack([up1 * du, up1 * u]))
    return p * params.beta / (p + 1) * (hats[0] + lam * hats[1])


def nonlinear_flux(grid: SpectralGrid, params: EquationParams, u: np.ndarray) -> np.ndarray:
    """p beta/(p+1) (U^{p-1} . D1 U + D1(U^p))."""
    u = _vec(grid, u)
    if params.beta == 0:
        return np.zeros_like(u)
    return spectral.from_fourier(nonlinear_flux_hat(grid, params, u))


def momentum_rhs(grid: SpectralGrid, params: EquationParams, u: np.ndarray) -> np.ndarray:
    """F_h(U) U, before inversion of A_h."""
    u = _vec(grid, u)
    lin = params.kappa * grid.symbol(1) + params.b_disp * grid.symbol(3)
    out = -spectral.apply_symbol(grid, u, lin)
    if params.beta != 0:
        out -= nonlinear_flux(grid, params, u)
    return out


def stage_velocity_mp(grid: SpectralGrid, params: EquationParams, u_stage: np.ndarray) -> np.ndarray:
    """A_h^{-1} F_h(U) U: the time derivative of the momentum-form system."""
    return spectral.apply_helmholtz_inverse(grid, params, momentum_rhs(grid, params, u_stage))


def qav_nonlinear(params: EquationParams, state: QavState) -> np.ndarray:
    """Nonlinear part of the QAV energy gradient."""
    state.require(params.p)
    u, beta = state.u, params.beta
    if params.p == 2:
        return beta / 3.0 * (state.q + 2.0 * u * u)
    if params.p == 3:
        return beta * u * state.q
    return beta / 3.0 * state.q2 * (state.q1 + 2.0 * u * u)


def ep_gradient(grid: SpectralGrid, params: EquationParams, state: QavState) -> np.ndarray:
    """g with dU/dt = J_h g: kappa U + b D2 U + nonlinear(U, Q)."""
    u = _vec(grid, state.u)
    out = params.kappa * u + params.b_disp * spectral.apply_diff(grid, u, 2)
    return out + qav_nonlinear(params, state)


def j_symbol(grid: SpectralGrid, params: EquationParams) -> np.ndarray:
    """Per-mode factor of J_h = -A_h^{-1} D1."""
    return -grid.odd_symbol / spectral.helmholtz_symbol(grid, params.delta, params.alpha)


def apply_j(grid: SpectralGrid, params: EquationParams, g: np.ndarray) -> np.ndarray:
    return spectral.apply_symbol(grid, _vec(grid, g), j_symbol(grid, params))


def qav_stage_rates(params: EquationParams, u_stage, k_stage, q1_stage=None):
    """Auxiliary rates (L, M): L = 2 U K and, for p = 5, M = K q1 + 2 U^2 K."""
    u_stage, k_stage = np.asarray(u_stage, dtype=float), np.asarray(k_stage, dtype=float)
    if u_stage.shape != k_stage.shape:
        raise DimensionError(f"shape mismatch: {u_stage.shape} vs {k_stage.shape}")
    l_rate = 2.0 * u_stage * k_stage
    if params.p != 5:
        return l_rate, None
    if q1_stage is None:
        raise StateError("p=5 requires the q1 stage values")
    return l_rate, k_stage * q1_stage + 2.0 * u_stage * u_stage * k_stage


def qav_init(u0, p: int, time: float = 0.0) -> QavState:
    """Consistent QAV state: q = u0^2, or q1 = u0^2 and q2 = u0 q1."""
    if p not in QAV_EXPONENTS:
        raise UnsupportedError(f"QAV form supports p in {QAV_EXPONENTS}, got p={p}")
    u = np.array(u0, dtype=float)
    if p in (2, 3):
        return QavState(u=u, q=u * u, time=time)
    q1 = u * u
    return QavState(u=u, q1=q1, q2=u * q1, time=time)


def qav_defect(state: QavState) -> float:
    """max |q - u^2| (and |q2 - u q1| for the p = 5 chain)."""
    u = state.u
    if state.q is not None:
        return float(np.abs(state.q - u * u).max(initial=0.0))
    if state.q1 is None or state.q2 is None:
        raise StateError("state carries no auxiliary fields")
    return float(max(np.abs(state.q1 - u * u).max(initial=0.0),
                     np.abs(state.q2 - u * state.q1).max(initial=0.0)))
