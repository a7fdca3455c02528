"""Equation presets, travelling-wave exact solutions and initial profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import partial
from typing import Callable

import numpy as np

from .dynamics import EquationParams
from .errors import ConfigurationError, UnsupportedError

RLW_EXPONENTS = (2, 3, 5)


def sech(z):
    """Overflow-free sech: 2 e^{-|z|} / (1 + e^{-2|z|})."""
    e = np.exp(-np.abs(z))
    return 2.0 * e / (1.0 + e * e)


def rlw_coefficients(p: int) -> tuple[float, float, float]:
    """Amplitude A, inverse width B and speed C of the Rosenau-RLW soliton."""
    if p not in RLW_EXPONENTS:
        raise UnsupportedError(f"Rosenau-RLW soliton available for p in {RLW_EXPONENTS}, got p={p}")
    ratio = (p + 3) * (3 * p + 1) * (p + 1) / (2 * (p**2 + 3) * (p**2 + 4 * p + 7))
    amp = math.exp(math.log(ratio) / (p - 1))
    inv_width = (p - 1) / math.sqrt(4 * p**2 + 8 * p + 20)
    speed = (p**4 + 4 * p**3 + 14 * p**2 + 20 * p + 25) / (p**4 + 4 * p**3 + 10 * p**2 + 12 * p + 21)
    return amp, inv_width, speed


def rlw_soliton(p: int, x, t: float = 0.0, x0: float = 0.0):
    """A sech^{4/(p-1)}(B (x - C t - x0)) with kappa = delta = alpha = beta = 1, b = 0."""
    amp, inv_width, speed = rlw_coefficients(p)
    return amp * sech(inv_width * (np.asarray(x, dtype=float) - speed * t - x0)) ** (4.0 / (p - 1))


_S313, _S41, _S34 = math.sqrt(313), math.sqrt(41), math.sqrt(34)

# case -> (beta, p, amplitude, inverse width, speed, sech power)
KDV_CASES = {
    "p2": (0.5, 2, -35 / 24 + 35 / 312 * _S313, math.sqrt(-26 + 2 * _S313) / 24, 0.5 + _S313 / 26, 4),
    "p3": (1.0, 3, math.sqrt(-15 + 3 * _S41) / 4, math.sqrt((-5 + _S41) / 2) / 4, (5 + _S41) / 10, 2),
    # sech^1: the squared profile does not solve the equation for p = 5
    "p5": (1.0, 5, (4 / 15 * (-5 + _S34)) ** 0.25, math.sqrt(-5 + _S34) / 3, (5 + _S34) / 10, 1),
}


def kdv_soliton(case: str, x, t: float = 0.0, x0: float = 0.0):
    """Rosenau-KdV solitary wave (kappa = b = alpha = 1, delta = 0)."""
    try:
        _, _, amp, inv_width, speed, power = KDV_CASES[case]
    except KeyError:
        raise UnsupportedError(f"unknown Rosenau-KdV case {case!r}; choose from {sorted(KDV_CASES)}") from None
    return amp * sech(inv_width * (np.asarray(x, dtype=float) - speed * t - x0)) ** power


def gaussian_profile(x):
    return np.exp(-0.05 * (np.asarray(x, dtype=float) - 40.0) ** 2)


@dataclass(frozen=True)
class ProblemPreset:
    name: str
    params: EquationParams
    domain: tuple[float, float]
    exact: Callable | None = None  # exact(x, t)
    x0: float = 0.0
    profile: Callable | None = None  # initial data when there is no exact solution
    speed: float | None = None
    default_n: int = 512

    def initial(self, x):
        if self.exact is not None:
            return self.exact(x, 0.0)
        return self.profile(x)


RLW_PARAMS = dict(kappa=1.0, delta=1.0, b_disp=0.0, alpha=1.0, beta=1.0)
KDV_PARAMS = dict(kappa=1.0, delta=0.0, b_disp=1.0, alpha=1.0)


def _build_presets() -> dict[str, ProblemPreset]:
    out = {}
    for p in RLW_EXPONENTS:
        out[f"rlw-p{p}"] = ProblemPreset(
            name=f"rlw-p{p}",
            params=EquationParams(p=p, **RLW_PARAMS),
            domain=(-200.0, 200.0),
            exact=partial(rlw_soliton, p),
            speed=rlw_coefficients(p)[2],
        )
    for i, case in enumerate(("p2", "p3", "p5"), start=1):
        beta, p, *_, speed, _ = KDV_CASES[case]
        out[f"kdv-case{i}"] = ProblemPreset(
            name=f"kdv-case{i}",
            params=EquationParams(beta=beta, p=p, **KDV_PARAMS),
            domain=(-100.0, 100.0),
            exact=partial(kdv_soliton, case),
            default_n=1024,
            speed=speed,
        )
    out["gaussian-rlw"] = ProblemPreset(
        name="gaussian-rlw",
        params=EquationParams(p=2, **RLW_PARAMS),
        domain=(-50.0, 250.0),
        profile=gaussian_profile,
        default_n=3000,  # h = 0.1
    )
    return out


PRESETS = _build_presets()


def preset(name: str, p: int | None = None) -> ProblemPreset:
    """Look up a preset by its stable name.

    ``p`` overrides the exponent of presets without an exact solution
    (``gaussian-rlw``); soliton presets fix their own exponent.
    """
    try:
        found = PRESETS[name]
    except KeyError:
        raise ConfigurationError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None
    if p is None or p == found.params.p:
        return found
    if found.exact is not None:
        raise ConfigurationError(f"preset {name!r} has an exact solution for p={found.params.p} only")
    return replace(found, params=replace(found.params, p=p))
