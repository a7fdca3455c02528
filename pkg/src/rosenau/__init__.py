"""High-order momentum- and energy-preserving Fourier pseudo-spectral schemes
for the generalized Rosenau-type equation."""

from .diagnostics import ConvergenceRow, InvariantRecord, error_norms, estimate_order, invariants
from .dynamics import EquationParams, QavState, qav_defect, qav_init
from .integrator import SolverOptions, StepReport, evolve, step_energy, step_momentum
from .problems import PRESETS, preset
from .spectral import SpectralGrid, build_grid
from .tableau import ButcherTableau, gauss_legendre, symplectic_defect

__all__ = [
    "ButcherTableau",
    "ConvergenceRow",
    "EquationParams",
    "InvariantRecord",
    "PRESETS",
    "QavState",
    "SolverOptions",
    "SpectralGrid",
    "StepReport",
    "build_grid",
    "error_norms",
    "estimate_order",
    "evolve",
    "gauss_legendre",
    "invariants",
    "preset",
    "qav_defect",
    "qav_init",
    "step_energy",
    "step_momentum",
    "symplectic_defect",
]
