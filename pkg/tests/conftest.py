from fractions import Fraction

import numpy as np
import pytest

from rosenau.dynamics import EquationParams
from rosenau.spectral import build_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


@pytest.fixture(params=[8, 16, 32])
def small_grid(request):
    return build_grid(request.param, -3.0, 5.0)


@pytest.fixture
def generic_params():
    """All coefficients nonzero so every operator term is exercised."""
    return EquationParams(kappa=0.7, delta=0.4, b_disp=0.3, alpha=0.2, beta=1.1, p=2)


def smooth_field(grid, rng, modes=4):
    """Random band-limited real field (no Nyquist content)."""
    x = grid.nodes
    u = np.zeros_like(x)
    for k in range(1, modes + 1):
        a, b = rng.standard_normal(2) / k
        u += a * np.cos(k * grid.mu * x) + b * np.sin(k * grid.mu * x)
    return u + 0.3


def fd_weights(offsets, order):
    """Exact finite-difference weights for the derivative of given order."""
    offsets = [Fraction(o) for o in offsets]
    n = len(offsets)
    mat = [[o**i for o in offsets] for i in range(n)]
    rhs = [Fraction(0)] * n
    rhs[order] = Fraction(1)
    for i in range(order):
        rhs[order] *= i + 1
    # Gaussian elimination in exact arithmetic
    for col in range(n):
        piv = next(r for r in range(col, n) if mat[r][col] != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        for r in range(n):
            if r != col and mat[r][col] != 0:
                f = mat[r][col] / mat[col][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
                rhs[r] -= f * rhs[col]
    return np.array([float(rhs[i] / mat[i][i]) for i in range(n)])


_OFFS = np.arange(-4, 5)
_H = 0.05
_W = {r: fd_weights(_OFFS, r) / _H**r for r in range(5)}


def pde_residual(fn, params, x, t):
    """Nine-point finite-difference residual of the equation for a field fn(x, t)."""
    o = _OFFS * _H
    vals = fn(x + o[:, None], t + o[None, :])  # rows vary x, columns vary t

    def d(field, rx, rt):
        return _W[rx] @ field @ _W[rt]

    return (d(vals, 0, 1) + params.kappa * d(vals, 1, 0) - params.delta * d(vals, 2, 1)
            + params.b_disp * d(vals, 3, 0) + params.alpha * d(vals, 4, 1)
            + params.beta * d(vals**params.p, 1, 0))


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record a one-line pass/fail verdict, echoed again in the terminal summary."""
    lines = request.config.stash.setdefault(_VERDICTS, [])

    def record(criterion, ok, detail):
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} | {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
