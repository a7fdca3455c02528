"""Exception types shared across the package."""


class RosenauError(Exception):
    """Base class for all package errors."""


class ConfigurationError(RosenauError, ValueError):
    """Invalid grid, equation, solver or run configuration."""


class DimensionError(RosenauError, ValueError):
    """Vector length does not match the grid."""


class UnsupportedError(RosenauError, ValueError):
    """Requested derivative order, stage count or exponent is not supported."""


class StateError(RosenauError, ValueError):
    """A QAV state lacks the auxiliary fields required by the exponent."""


class NumericalError(RosenauError, ArithmeticError):
    """Internal numerical failure (root finding, non-real FFT output, ...)."""


class StepFailure(RosenauError, RuntimeError):
    """A time step could not be completed."""

    def __init__(self, message, residual=float("nan"), iters=0):
        super().__init__(message)
        self.residual = residual
        self.iters = iters


class DivergenceError(StepFailure):
    """NaN or Inf appeared in the stage iteration."""


class NonConvergenceError(StepFailure):
    """Fixed-point iteration hit the iteration cap in strict mode."""
