"""Quadrature and root-finding building blocks."""

import math

import numpy as np
import pytest

from heatsym.numerics import (
    Bracket,
    adaptive_integrate,
    composite_rule,
    fd_heat_residual,
    gauss_nodes,
    integrate_singular_weight,
    refine_root,
    sign_scan,
)


def test_gauss_nodes_exact_for_polynomials():
    # n points integrate degree 2n-1 exactly; check every degree up to 15
    rule = gauss_nodes(8, (0.0, 2.0))
    for p in range(16):
        got = float(np.sum(rule.weights * rule.nodes ** p))
        exact = 2.0 ** (p + 1) / (p + 1)
        assert got == pytest.approx(exact, rel=1e-13)


def test_gauss_nodes_rejects_bad_interval():
    with pytest.raises(ValueError):
        gauss_nodes(8, (1.0, 1.0))


def test_composite_rule_matches_analytic():
    rule = composite_rule((0.0, 1.0), 8, 10)
    got = float(np.sum(rule.weights * np.cos(rule.nodes)))
    assert got == pytest.approx(math.sin(1.0), rel=1e-14)


def test_adaptive_integrate_gaussian():
    val, est = adaptive_integrate(lambda x: np.exp(-x * x), (-8.0, 8.0))
    exact = math.sqrt(math.pi)  # the discarded tail is ~1e-28
    assert val == pytest.approx(exact, rel=1e-13)
    assert abs(val - exact) <= max(est, 1e-13 * exact)


def test_adaptive_integrate_refines_local_feature():
    """A feature much narrower than the interval drives panel splitting."""
    center, width = 0.3, 0.02

    def spike(x):
        return np.exp(-(((x - center) / width) ** 2))

    val, _ = adaptive_integrate(spike, (0.0, 1.0))
    exact = width * math.sqrt(math.pi)
    assert val == pytest.approx(exact, rel=1e-10)


def test_integrate_singular_weight_moments():
    # int_{-1}^{1} (1-t^2)^kappa dt = sqrt(pi) Gamma(kappa+1) / Gamma(kappa+3/2)
    for kappa in (-0.5, 0.0, 0.5, 2.0):
        got = integrate_singular_weight(lambda t: np.ones_like(t), kappa)
        exact = math.sqrt(math.pi) * math.gamma(kappa + 1.0) / math.gamma(kappa + 1.5)
        assert got == pytest.approx(exact, rel=1e-11), kappa


def test_integrate_singular_weight_rejects_nonintegrable():
    with pytest.raises(ValueError):
        integrate_singular_weight(lambda t: t, -1.0)


def test_sign_scan_finds_cosine_zeros():
    grid = np.linspace(0.0, 7.0, 200)
    brackets = sign_scan(np.cos, grid)
    assert len(brackets) == 2
    roots = [refine_root(np.cos, br, 1e-13) for br in brackets]
    assert roots[0] == pytest.approx(math.pi / 2, abs=1e-12)
    assert roots[1] == pytest.approx(3 * math.pi / 2, abs=1e-12)


def test_sign_scan_scalar_only_function():
    # functions that reject array input still work through the scalar path
    def f(x):
        if isinstance(x, np.ndarray) and x.ndim > 0:
            raise TypeError("scalar only")
        return float(x) - 0.47

    brackets = sign_scan(f, np.linspace(0.0, 1.0, 11))
    assert len(brackets) == 1
    assert refine_root(f, brackets[0], 1e-13) == pytest.approx(0.47, abs=1e-12)


def test_bracket_requires_sign_change():
    with pytest.raises(ValueError):
        Bracket(0.0, 1.0, 2.0, 3.0)


def test_refine_root_validation():
    br = sign_scan(lambda x: x * x - 2.0, np.linspace(0.0, 2.0, 20))[0]
    with pytest.raises(ValueError):
        refine_root(lambda x: x * x - 2.0, br, 0.0)
    root = refine_root(lambda x: x * x - 2.0, br, 1e-14)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-13)


def test_refine_root_exact_interior_hit():
    """Landing exactly on a zero mid-iteration must still certify a
    tight bracket rather than return the stale wide one."""

    def f(x):
        return x * (1.0 + x * x)

    br = sign_scan(f, [-1.0, 0.5])[0]
    root = refine_root(f, br, 1e-12)
    assert abs(root) <= 1e-12


def test_fd_heat_residual_on_exact_solution():
    s0 = 0.3

    def u(x, t):
        spread = s0 + t
        return (s0 / spread) ** 1.5 * math.exp(
            -float(x @ x) / (4.0 * spread))

    x = np.array([0.4, -0.2, 0.1])
    r_full = fd_heat_residual(u, x, 1.0)
    assert r_full <= 1e-6
    r_half = fd_heat_residual(u, x, 1.0, h=0.5 * 0.05)
    assert r_full / r_half >= 8.0


def test_fd_heat_residual_validation():
    def u(x, t):
        return float(np.sum(x)) * t

    with pytest.raises(ValueError):
        fd_heat_residual(u, np.zeros(3), -1.0)
    with pytest.raises(ValueError):
        fd_heat_residual(u, np.zeros(3), 1.0, dt=2.0)
    with pytest.raises(ValueError):
        fd_heat_residual(u, np.zeros((2, 3)), 1.0)
