"""
Gauss-Runge-Kutta time stepping for the momentum- and energy-preserving schemes.

Both schemes solve the coupled stage equations with a fixed-point iteration
in which every linear operator is diagonal in Fourier space.  Per mode k the
linear stage coupling is an s x s complex matrix

    momentum:  a_h(k) I + tau * A * (kappa lam_k + b lam_k^3)
    energy:    I - tau * A * j_h(k) (kappa + b lamt_k^2)

(``A`` the Runge-Kutta matrix, ``a_h`` the Helmholtz symbol, ``j_h`` the
symbol of J_h).  It is inverted once per step; each sweep then costs a few
FFTs plus an ``(N, s, s)`` matrix-vector product.  The nonlinear terms are
evaluated at the current iterate and moved to the right-hand side.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import spectral
from .diagnostics import InvariantRecord, invariants
from .dynamics import EquationParams, QavState, j_symbol, nonlinear_flux_hat, qav_init, qav_nonlinear, qav_stage_rates
from .errors import ConfigurationError, DivergenceError, NonConvergenceError, UnsupportedError
from .spectral import SpectralGrid
from .tableau import ButcherTableau

log = logging.getLogger(__name__)

WARN = "warn"
ERROR = "error"


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-14
    max_iters: int = 30
    on_nonconvergence: str = WARN
    warm_start: bool = False  # start from the previous step's K instead of U^n

    def __post_init__(self):
        if not self.tol > 0:
            raise ConfigurationError(f"tol must be > 0, got {self.tol}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ConfigurationError(f"max_iters must be an integer >= 1, got {self.max_iters}")
        if self.on_nonconvergence not in (WARN, ERROR):
            raise ConfigurationError(
                f"on_nonconvergence must be {WARN!r} or {ERROR!r}, got {self.on_nonconvergence!r}"
            )


@dataclass
class StageData:
    k: np.ndarray  # (s, N) stage velocities
    u_stage: np.ndarray  # (s, N)
    l: np.ndarray | None = None  # q (or q1) rates
    m: np.ndarray | None = None  # q2 rates, p = 5
    q_stage: dict | None = None


@dataclass
class StepReport:
    iters: int
    final_residual: float
    converged: bool
    stages: StageData | None = field(default=None, repr=False)


def _stage_inverse(diag: np.ndarray, coupling: np.ndarray, tableau: ButcherTableau, dt: float) -> np.ndarray:
    """Per-mode inverse of diag_k I + dt A coupling_k, shape (N, s, s)."""
    s = tableau.s
    mats = dt * np.asarray(tableau.a)[None, :, :] * coupling[:, None, None]
    mats = mats + diag[:, None, None] * np.eye(s)[None, :, :]
    return np.linalg.inv(mats)


def _solve_modes(inv: np.ndarray, rhs_hat: np.ndarray) -> np.ndarray:
    # rhs_hat: (s, N) -> (s, N)
    return np.einsum("kij,jk->ik", inv, rhs_hat)


def _finish(iters, resid, converged, opts, scheme):
    if converged:
        return
    msg = f"{scheme} stage iteration not converged after {iters} sweeps (residual {resid:.3e})"
    if opts.on_nonconvergence == ERROR:
        raise NonConvergenceError(msg, residual=resid, iters=iters)
    log.warning(msg)


def _check_finite(k, iters):
    if not np.all(np.isfinite(k)):
        raise DivergenceError(f"non-finite stage values at sweep {iters}", iters=iters)


def step_momentum(
    grid: SpectralGrid,
    params: EquationParams,
    tableau: ButcherTableau,
    u_n: np.ndarray,
    dt: float,
    opts: SolverOptions | None = None,
    k_guess: np.ndarray | None = None,
):
    """One step of the symplectic Runge-Kutta momentum-preserving scheme.

    Returns ``(u_next, StepReport)``.  A negative ``dt`` steps backwards.
    """
    opts = opts or SolverOptions()
    u_n = np.asarray(u_n, dtype=float)
    if u_n.shape != (grid.n,):
        raise ConfigurationError(f"u_n must have length {grid.n}, got shape {u_n.shape}")
    if dt == 0 or not math.isfinite(dt):
        raise ConfigurationError(f"dt must be finite and nonzero, got {dt}")
    a = np.asarray(tableau.a)
    lin = params.kappa * grid.symbol(1) + params.b_disp * grid.symbol(3)
    a_h = spectral.helmholtz_symbol(grid, params.delta, params.alpha)
    inv = _stage_inverse(a_h, lin, tableau, dt)

    un_hat = spectral.to_fourier(u_n)
    base_hat = (lin * un_hat)[None, :]  # fft of kappa D1 U^n + b D3 U^n
    k = np.tile(u_n, (tableau.s, 1)) if k_guess is None else np.array(k_guess, dtype=float)

    converged, resid, iters = False, float("inf"), 0
    with np.errstate(over="ignore", invalid="ignore"):  # blow-up is caught by _check_finite
        for iters in range(1, opts.max_iters + 1):
            u_stage = u_n + dt * (a @ k)
            rhs_hat = -base_hat
            if params.beta != 0:
                rhs_hat = rhs_hat - nonlinear_flux_hat(grid, params, u_stage)
            k_new = spectral.from_fourier(_solve_modes(inv, rhs_hat))
            _check_finite(k_new, iters)
            resid = float(np.abs(k_new - k).max())
            k = k_new
            if resid < opts.tol:
                converged = True
                break
    _finish(iters, resid, converged, opts, "momentum")
    u_next = u_n + dt * (np.asarray(tableau.b) @ k)
    stages = StageData(k=k, u_stage=u_n + dt * (a @ k))
    return u_next, StepReport(iters, resid, converged, stages)


def _qav_stages(params, state, a, dt, k):
    """Stage values U^{ni}, auxiliaries Q^{ni} and their rates, all explicit in K."""
    u_stage = state.u + dt * (a @ k)
    if params.p in (2, 3):
        # L_i = 2 U^{ni} K_i does not depend on Q^{ni}
        l_rate, _ = qav_stage_rates(params, u_stage, k)
        q_stage = state.q + dt * (a @ l_rate)
        return QavState(u=u_stage, q=q_stage), l_rate, None
    l_rate, _ = qav_stage_rates(params, u_stage, k, q1_stage=np.zeros_like(k))
    q1_stage = state.q1 + dt * (a @ l_rate)
    _, m_rate = qav_stage_rates(params, u_stage, k, q1_stage=q1_stage)
    q2_stage = state.q2 + dt * (a @ m_rate)
    return QavState(u=u_stage, q1=q1_stage, q2=q2_stage), l_rate, m_rate


def step_energy(
    grid: SpectralGrid,
    params: EquationParams,
    tableau: ButcherTableau,
    state: QavState,
    dt: float,
    opts: SolverOptions | None = None,
    k_guess: np.ndarray | None = None,
):
    """One step of the QAV energy-preserving scheme.  Returns ``(QavState, StepReport)``."""
    opts = opts or SolverOptions()
    state.require(params.p)
    u_n = np.asarray(state.u, dtype=float)
    if u_n.shape != (grid.n,):
        raise ConfigurationError(f"state.u must have length {grid.n}, got shape {u_n.shape}")
    if dt == 0 or not math.isfinite(dt):
        raise ConfigurationError(f"dt must be finite and nonzero, got {dt}")
    a = np.asarray(tableau.a)
    jh = j_symbol(grid, params)
    lin = params.kappa + params.b_disp * (grid.even_symbol**2).real  # symbol of kappa I + b D2
    inv = _stage_inverse(np.ones(grid.n), -jh * lin, tableau, dt)

    base_hat = (lin * spectral.to_fourier(u_n))[None, :]
    k = np.tile(u_n, (tableau.s, 1)) if k_guess is None else np.array(k_guess, dtype=float)

    converged, resid, iters = False, float("inf"), 0
    with np.errstate(over="ignore", invalid="ignore"):  # blow-up is caught by _check_finite
        for iters in range(1, opts.max_iters + 1):
            stage, _, _ = _qav_stages(params, state, a, dt, k)
            rhs_hat = jh * (base_hat + spectral.to_fourier(qav_nonlinear(params, stage)))
            k_new = spectral.from_fourier(_solve_modes(inv, rhs_hat))
            _check_finite(k_new, iters)
            resid = float(np.abs(k_new - k).max())
            k = k_new
            if resid < opts.tol:
                converged = True
                break
    _finish(iters, resid, converged, opts, "energy")

    b = np.asarray(tableau.b)
    stage, l_rate, m_rate = _qav_stages(params, state, a, dt, k)
    out = QavState(u=u_n + dt * (b @ k), time=state.time + dt)
    if params.p in (2, 3):
        out.q = state.q + dt * (b @ l_rate)
    else:
        out.q1 = state.q1 + dt * (b @ l_rate)
        out.q2 = state.q2 + dt * (b @ m_rate)
    stages = StageData(k=k, u_stage=stage.u, l=l_rate, m=m_rate, q_stage=stage.aux())
    return out, StepReport(iters, resid, converged, stages)


MOMENTUM = "momentum"
ENERGY = "energy"
_SCHEME_ALIASES = {"mp": MOMENTUM, MOMENTUM: MOMENTUM, "ep": ENERGY, ENERGY: ENERGY}


def scheme_name(scheme: str) -> str:
    try:
        return _SCHEME_ALIASES[scheme]
    except KeyError:
        raise UnsupportedError(f"unknown scheme {scheme!r}; use 'mp' or 'ep'") from None


@dataclass
class EvolveResult:
    final: object  # ndarray for the momentum scheme, QavState for the energy scheme
    time: float
    reports: list[StepReport]
    records: list[InvariantRecord]


Observer = Callable[[float, object, InvariantRecord, "StepReport | None"], None]


def step_count(dt: float, t_end: float, rtol: float = 1e-9) -> int:
    """Number of steps of size dt covering t_end; dt must divide t_end."""
    if dt == 0 or not math.isfinite(dt):
        raise ConfigurationError(f"dt must be finite and nonzero, got {dt}")
    ratio = t_end / dt
    n = round(ratio)
    if n < 0 or abs(ratio - n) > rtol * max(1.0, abs(ratio)):
        raise ConfigurationError(f"t_end={t_end} is not a non-negative multiple of dt={dt}")
    return int(n)


def evolve(
    grid: SpectralGrid,
    params: EquationParams,
    tableau: ButcherTableau,
    scheme: str,
    initial,
    dt: float,
    t_end: float,
    observer: Observer | None = None,
    opts: SolverOptions | None = None,
    record_every: int = 1,
    t0: float = 0.0,
) -> EvolveResult:
    """March from ``t0`` over a span ``t_end`` (same sign as dt) in steps of dt.

    The observer, if given, is called at the start, every ``record_every``
    steps and after the last step with ``(time, state, record, report)``.
    """
    scheme = scheme_name(scheme)
    opts = opts or SolverOptions()
    if record_every < 1:
        raise ConfigurationError(f"record_every must be >= 1, got {record_every}")
    n_steps = step_count(dt, t_end)
    if scheme == ENERGY:
        state = initial.copy() if isinstance(initial, QavState) else qav_init(initial, params.p, time=t0)
        state.time = t0
    else:
        state = np.array(initial.u if isinstance(initial, QavState) else initial, dtype=float)

    records, reports = [], []

    def emit(n, report):
        t = t0 + n * dt
        rec = invariants(grid, params, state, time=t)
        records.append(rec)
        if observer is not None:
            observer(t, state, rec, report)

    emit(0, None)
    k_prev = None
    for n in range(1, n_steps + 1):
        guess = k_prev if opts.warm_start else None
        if scheme == ENERGY:
            state, report = step_energy(grid, params, tableau, state, dt, opts, k_guess=guess)
            state.time = t0 + n * dt
        else:
            state, report = step_momentum(grid, params, tableau, state, dt, opts, k_guess=guess)
        k_prev = report.stages.k
        report.stages = None  # keep memory flat on long runs
        reports.append(report)
        if n % record_every == 0 or n == n_steps:
            emit(n, report)
    return EvolveResult(final=state, time=t0 + n_steps * dt, reports=reports, records=records)
