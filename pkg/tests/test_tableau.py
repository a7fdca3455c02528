import numpy as np
import pytest

from rosenau.errors import UnsupportedError
from rosenau.tableau import MAX_STAGES, ButcherTableau, gauss_legendre, symplectic_defect

R3, R15 = np.sqrt(3.0), np.sqrt(15.0)

# Gauss methods of order 4 and 6 as published
GAUSS4 = dict(
    c=[0.5 - R3 / 6, 0.5 + R3 / 6],
    a=[[0.25, 0.25 - R3 / 6], [0.25 + R3 / 6, 0.25]],
    b=[0.5, 0.5],
)
GAUSS6 = dict(
    c=[0.5 - R15 / 10, 0.5, 0.5 + R15 / 10],
    a=[
        [5 / 36, 2 / 9 - R15 / 15, 5 / 36 - R15 / 30],
        [5 / 36 + R15 / 24, 2 / 9, 5 / 36 - R15 / 24],
        [5 / 36 + R15 / 30, 2 / 9 + R15 / 15, 5 / 36],
    ],
    b=[5 / 18, 4 / 9, 5 / 18],
)


@pytest.mark.parametrize("s, ref", [(2, GAUSS4), (3, GAUSS6)])
def test_published_tables(s, ref):
    t = gauss_legendre(s)
    for key in ("c", "a", "b"):
        assert np.abs(getattr(t, key) - np.array(ref[key])).max() <= 1e-14, key
    assert t.order == 2 * s


def test_midpoint():
    t = gauss_legendre(1)
    assert t.c.tolist() == [0.5]
    assert t.a.tolist() == [[0.5]]
    assert t.b.tolist() == [1.0]


@pytest.mark.parametrize("s", range(1, MAX_STAGES + 1))
def test_tableau_invariants(s):
    t = gauss_legendre(s)
    assert np.abs(t.a.sum(axis=1) - t.c).max() < 1e-13
    assert abs(t.b.sum() - 1) < 1e-13
    assert symplectic_defect(t) < 1e-13
    assert np.all(np.diff(t.c) > 0) and 0 < t.c[0] and t.c[-1] < 1
    k = np.arange(2 * s)
    moments = (t.b[None, :] * t.c[None, :] ** k[:, None]).sum(axis=1)
    np.testing.assert_allclose(moments, 1 / (k + 1), atol=1e-12)
    # collocation conditions sum_j a_ij c_j^(k-1) = c_i^k / k
    for kk in range(1, s + 1):
        np.testing.assert_allclose(t.a @ t.c ** (kk - 1), t.c**kk / kk, atol=1e-13)


def test_nodes_are_shifted_legendre_roots():
    for s in (2, 5, 8):
        t = gauss_legendre(s)
        # d^s/dx^s [x^s (x-1)^s]
        poly = np.polynomial.Polynomial.fromroots([0] * s + [1] * s).deriv(s)
        assert np.abs(poly(t.c)).max() / np.abs(poly.coef).max() < 1e-12


@pytest.mark.parametrize("s", [0, 11, 2.5])
def test_unsupported_stage_counts(s):
    with pytest.raises(UnsupportedError):
        gauss_legendre(s)


def test_symplectic_defect_values():
    assert symplectic_defect(gauss_legendre(2)) < 1e-14
    assert symplectic_defect(gauss_legendre(3)) < 1e-14
    euler = ButcherTableau(1, np.zeros(1), np.zeros((1, 1)), np.ones(1), 1)
    assert symplectic_defect(euler) == 1.0
