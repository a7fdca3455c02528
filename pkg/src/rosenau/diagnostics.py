"""Discrete invariants, error norms and observed convergence orders."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import spectral
from .dynamics import EquationParams, QavState, qav_defect
from .errors import ConfigurationError, DimensionError
from .spectral import SpectralGrid, discrete_inner


@dataclass(frozen=True)
class InvariantRecord:
    time: float
    mass: float
    momentum: float
    hamiltonian: float
    quad_energy: float | None = None
    qav_defect: float | None = None


def quad_energy(grid: SpectralGrid, params: EquationParams, state: QavState) -> float:
    """Energy written with the auxiliary fields; quadratic in (U, Q)."""
    state.require(params.p)
    u, h = state.u, grid.h
    quad = 0.5 * params.kappa * discrete_inner(u, u, h)
    quad += 0.5 * params.b_disp * discrete_inner(spectral.apply_diff(grid, u, 2), u, h)
    if params.p == 2:
        return quad + params.beta / 3.0 * discrete_inner(u, state.q, h)
    if params.p == 3:
        return quad + params.beta / 4.0 * discrete_inner(state.q, state.q, h)
    return quad + params.beta / 6.0 * discrete_inner(state.q2, state.q2, h)


def invariants(grid: SpectralGrid, params: EquationParams, state, time: float | None = None) -> InvariantRecord:
    """Mass, momentum and Hamiltonian of a state (plus QAV energy and defect for QAV states).

    ``hamiltonian`` uses <D2 U, U>_h rather than -||D1 U||_h^2; the two
    differ by the Nyquist-mode content of U.
    """
    if isinstance(state, QavState):
        u = state.u
        time = state.time if time is None else time
    else:
        u = state
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.n,):
        raise DimensionError(f"expected length {grid.n}, got shape {u.shape}")
    h, p = grid.h, params.p
    mass = h * float(u.sum())
    momentum = 0.5 * discrete_inner(u, spectral.apply_helmholtz(grid, params, u), h)
    hamiltonian = (
        0.5 * params.kappa * discrete_inner(u, u, h)
        + 0.5 * params.b_disp * discrete_inner(spectral.apply_diff(grid, u, 2), u, h)
        + params.beta / (p + 1) * discrete_inner(u, u**p, h)
    )
    record = InvariantRecord(0.0 if time is None else float(time), mass, momentum, hamiltonian)
    if isinstance(state, QavState):
        record = replace(record, quad_energy=quad_energy(grid, params, state), qav_defect=qav_defect(state))
    return record


def error_norms(grid: SpectralGrid, numeric, exact_fn, t: float) -> tuple[float, float]:
    """(h-weighted l2, max) norms of numeric - exact at the grid nodes."""
    numeric = np.asarray(numeric, dtype=float)
    if numeric.shape != (grid.n,):
        raise DimensionError(f"expected length {grid.n}, got shape {numeric.shape}")
    err = numeric - np.asarray(exact_fn(grid.nodes, t), dtype=float)
    return spectral.discrete_norm2(err, grid.h), spectral.discrete_norm_inf(err)


@dataclass(frozen=True)
class ConvergenceRow:
    dt: float
    e2: float
    einf: float
    order2: float | None = None
    orderinf: float | None = None
    undefined: bool = False  # an order could not be formed (zero error)


def _pair_order(e_prev, e_curr, dt_prev, dt_curr):
    if e_prev <= 0 or e_curr <= 0:
        return None
    return math.log(e_prev / e_curr) / math.log(dt_prev / dt_curr)


def estimate_order(rows: list[ConvergenceRow]) -> list[ConvergenceRow]:
    """Pairwise observed orders between consecutive rows."""
    if not rows:
        return []
    for prev, curr in zip(rows, rows[1:]):
        if not curr.dt < prev.dt:
            raise ConfigurationError("time steps must be strictly decreasing")
    out = [replace(rows[0], order2=None, orderinf=None, undefined=False)]
    for prev, curr in zip(rows, rows[1:]):
        o2 = _pair_order(prev.e2, curr.e2, prev.dt, curr.dt)
        oi = _pair_order(prev.einf, curr.einf, prev.dt, curr.dt)
        out.append(replace(curr, order2=o2, orderinf=oi, undefined=o2 is None or oi is None))
    return out


def mean_order(rows: list[ConvergenceRow], which: str = "order2") -> float | None:
    vals = [getattr(r, which) for r in rows if getattr(r, which) is not None]
    return float(np.mean(vals)) if vals else None


def drift(records: list[InvariantRecord], name: str) -> float:
    """max_n |X^n - X^0| over a record series."""
    vals = [getattr(r, name) for r in records]
    if not vals or vals[0] is None:
        return float("nan")
    return float(max(abs(v - vals[0]) for v in vals))
