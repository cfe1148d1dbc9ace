"""Spherical harmonics, sphere quadrature, and the convolution eigenvalues.

sympy and mpmath serve as oracles throughout: Gegenbauer ratios against
sympy's Legendre/Chebyshev polynomials, the dimension-2 eigenvalues
against Bessel I_k, and the dimension-3 ones against closed integrals.
"""

import math

import numpy as np
import pytest

sympy = pytest.importorskip("sympy")
mpmath = pytest.importorskip("mpmath")

from heatsym.harmonics import (
    MAX_HARMONIC_DEGREE,
    funk_hecke_eigenvalue,
    funk_hecke_lambda_closed,
    funk_hecke_lambda_direct,
    harmonic_catalog,
    harmonic_norm,
    harmonic_poly,
    legendre_eval,
    sphere_area,
    sphere_grid,
)

XS = np.array([-0.9, -0.55, -0.1, 0.3, 0.72, 1.0])


@pytest.mark.parametrize("k", range(7))
def test_legendre_eval_dimension_3_is_legendre(k):
    t = sympy.Symbol("t")
    expr = sympy.legendre(k, t)
    want = np.array([float(expr.subs(t, sympy.Rational(x).limit_denominator(10**6)))
                     for x in XS])
    got = legendre_eval(k, 3, XS)
    assert np.max(np.abs(got - want)) <= 1e-14


@pytest.mark.parametrize("k", range(7))
def test_legendre_eval_dimension_2_is_chebyshev(k):
    t = sympy.Symbol("t")
    expr = sympy.chebyshevt(k, t)
    want = np.array([float(expr.subs(t, sympy.Rational(x).limit_denominator(10**6)))
                     for x in XS])
    got = legendre_eval(k, 2, XS)
    assert np.max(np.abs(got - want)) <= 1e-13


def test_catalog_has_2k_plus_1_entries_per_degree():
    pairs = harmonic_catalog(MAX_HARMONIC_DEGREE)
    for k in range(MAX_HARMONIC_DEGREE + 1):
        assert sum(1 for kk, _v in pairs if kk == k) == 2 * k + 1


@pytest.mark.parametrize("k,variant", [(1, 0), (2, 3), (3, 0), (4, 6), (5, 2),
                                       (6, 11)])
def test_catalog_entries_are_harmonic(k, variant):
    """Five-point fourth-order Laplacian stencil applied axis by axis."""
    x = np.array([0.31, -0.47, 0.83])
    h = 1e-2
    lap = 0.0
    for axis in range(3):
        e = np.zeros(3)
        e[axis] = 1.0
        lap += (-harmonic_poly(k, variant, x + 2 * h * e)
                + 16 * harmonic_poly(k, variant, x + h * e)
                - 30 * harmonic_poly(k, variant, x)
                + 16 * harmonic_poly(k, variant, x - h * e)
                - harmonic_poly(k, variant, x - 2 * h * e)) / (12 * h * h)
    scale = 1.0 + abs(harmonic_poly(k, variant, x))
    assert abs(lap) <= 1e-6 * scale


@pytest.mark.parametrize("k,variant", [(2, 1), (4, 0), (6, 5)])
def test_catalog_entries_are_homogeneous(k, variant):
    x = np.array([0.4, 0.9, -0.3])
    lam = 1.7
    got = harmonic_poly(k, variant, lam * x)
    want = lam ** k * harmonic_poly(k, variant, x)
    assert got == pytest.approx(want, rel=1e-13)


def test_catalog_orthogonality_and_norms():
    grid = sphere_grid(3, 20)
    pairs = harmonic_catalog(4)
    values = [harmonic_poly(k, v, grid.points) for k, v in pairs]
    for i, (ki, vi) in enumerate(pairs):
        for j in range(i, len(pairs)):
            inner = float(np.sum(grid.weights * values[i] * values[j]))
            if i == j:
                assert inner == pytest.approx(harmonic_norm(ki, vi) ** 2,
                                              rel=1e-12)
            else:
                assert abs(inner) <= 1e-12 * harmonic_norm(ki, vi) ** 2


def test_sphere_grid_moments_dimension_3():
    grid = sphere_grid(3, 24)
    x1, x2, x3 = grid.points.T
    w = grid.weights
    assert np.sum(w) == pytest.approx(4 * math.pi, rel=1e-13)
    assert np.sum(w * x3 ** 2) == pytest.approx(4 * math.pi / 3, rel=1e-13)
    assert np.sum(w * x3 ** 4) == pytest.approx(4 * math.pi / 5, rel=1e-13)
    assert np.sum(w * x1 ** 2 * x2 ** 2) == pytest.approx(4 * math.pi / 15,
                                                          rel=1e-13)
    for odd in (x1, x3 ** 3, x1 * x2):
        assert abs(np.sum(w * odd)) <= 1e-13


def test_sphere_grid_moments_dimension_2():
    grid = sphere_grid(2, 40)
    x1 = grid.points[:, 0]
    w = grid.weights
    assert np.sum(w) == pytest.approx(2 * math.pi, rel=1e-13)
    assert np.sum(w * x1 ** 2) == pytest.approx(math.pi, rel=1e-13)
    assert abs(np.sum(w * x1)) <= 1e-13
    assert sphere_area(1) == pytest.approx(2 * math.pi, rel=1e-15)
    assert sphere_area(2) == pytest.approx(4 * math.pi, rel=1e-15)


def test_spot_eigenvalues_dimension_3():
    # integral of e^(L t) P_k(t), done by hand for k = 0 and 1
    assert funk_hecke_lambda_closed(0, 3, 1.0) == pytest.approx(
        2 * math.pi * (math.e - 1.0 / math.e), rel=1e-12)
    assert funk_hecke_lambda_closed(1, 3, 1.0) == pytest.approx(
        4 * math.pi / math.e, rel=1e-12)
    for L in (0.5, 2.0, 7.0):
        assert funk_hecke_lambda_closed(0, 3, L) == pytest.approx(
            4 * math.pi * math.sinh(L) / L, rel=1e-12)


@pytest.mark.parametrize("L", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("k", range(7))
def test_closed_matches_direct(k, L):
    closed = funk_hecke_lambda_closed(k, 3, L)
    direct = funk_hecke_lambda_direct(k, 3, L)
    assert closed == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("k", [0, 1, 2, 4, 6])
def test_dimension_2_eigenvalues_are_bessel(k):
    # on the circle the kernel integral collapses to 2 pi I_k(L)
    for L in (0.5, 1.0, 2.0):
        want = 2 * math.pi * float(mpmath.besseli(k, L))
        assert funk_hecke_lambda_closed(k, 2, L) == pytest.approx(want,
                                                                  rel=1e-12)


@pytest.mark.parametrize("k", [0, 2, 5])
def test_eigen_residual_is_small(k):
    res = funk_hecke_eigenvalue(k, 3, 1.0)
    assert res.eigen_residual <= 1e-10
    assert res.lambda_closed == pytest.approx(res.lambda_direct, rel=1e-10)


def test_validation():
    with pytest.raises(ValueError):
        funk_hecke_eigenvalue(0, 3, 0.0)
    with pytest.raises(ValueError):
        funk_hecke_eigenvalue(7, 3, 1.0)
    with pytest.raises(ValueError):
        funk_hecke_eigenvalue(2, 4, 1.0)
