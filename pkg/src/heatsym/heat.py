"""Heat-kernel convolution solvers and kernel-differentiated derivatives.

Derivatives of the 1-D solution are always taken by differentiating the
Gaussian kernel under the integral, never by differencing the initial
datum.  All quadratures here use fixed composite Gauss-Legendre rules on
a window where the kernel factor is above ~1e-22 of its peak; the panel
count depends only on (t, support, feature scale), not on the evaluation
point, so values vary smoothly in space and finite-difference stencils
across them see clean truncation error.

For N-dimensional data at times where the kernel is no narrower than the
datum's feature scale, all evaluation points share one per-axis rule on
the full support cube.  The data values on that grid are tabulated once
and cached, so a sweep over many points (a sphere of samples, a finite
difference stencil, a family of moment directions) costs one tensor
contraction per point instead of a fresh volume quadrature.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from .numerics import QuadratureRule, composite_rule
from .profiles import InitialDataND, InitialProfile1D

__all__ = [
    "solve_1d",
    "third_derivative_1d",
    "fourth_derivative_1d",
    "solve_radial_3d",
    "solve_nd",
    "directional_derivative",
    "support_grid",
    "grid_contract",
]

# exp(-_TAIL) ~ 2e-22: kernel contributions below that fraction of the
# peak are dropped by windowing.
_TAIL = 50.0
_ORDER_1D = 16
_ORDER_ND = 20
_MAX_PANELS = 96
# Largest node tensor worth caching (~2e7 float64 is ~160 MB).
_CACHE_NODE_LIMIT = 3.5e7


def _half_window(t: float) -> float:
    return 2.0 * math.sqrt(_TAIL * t)


def _window(center: float, t: float, lo: float, hi: float):
    w = _half_window(t)
    a = max(lo, center - w)
    b = min(hi, center + w)
    return (a, b) if a < b else None


def _panel_count(span_bound: float, t: float, cap: float) -> int:
    # Panels must resolve both the kernel (scale sqrt(t)) and the datum.
    panel = min(1.2 * math.sqrt(t), cap)
    return int(np.clip(math.ceil(span_bound / panel), 4, _MAX_PANELS))


def _profile_rule(profile: InitialProfile1D, s: float, t: float):
    win = _window(s, t, -profile.support, profile.support)
    if win is None:
        return None
    span_bound = min(2.0 * profile.support, 2.0 * _half_window(t))
    n = _panel_count(span_bound, t, profile.feature / 4.0)
    return composite_rule(win, n, _ORDER_1D)


def _check_time(t: float) -> None:
    if not (isinstance(t, (int, float)) and math.isfinite(t) and t > 0.0):
        raise ValueError(f"t must be a positive finite number, got {t!r}")


def solve_1d(v0: InitialProfile1D, s: float, t: float) -> float:
    """Heat evolution of a compactly supported 1-D datum.

    Computes (4 pi t)^(-1/2) * integral of exp(-(s-mu)^2/(4t)) v0(mu) dmu
    over the support of ``v0``.

    Parameters
    ----------
    v0 : InitialProfile1D
    s : float
        Evaluation point.
    t : float
        Positive time.
    """
    _check_time(t)
    rule = _profile_rule(v0, s, t)
    if rule is None:
        return 0.0
    mu = rule.nodes
    z = s - mu
    vals = np.exp(-z * z / (4.0 * t)) * np.asarray(v0.evaluate(mu), dtype=float)
    return float(np.sum(rule.weights * vals)) / math.sqrt(4.0 * math.pi * t)


def third_derivative_1d(v0: InitialProfile1D, s: float, t: float) -> float:
    """Third spatial derivative of the 1-D solution, kernel-differentiated.

    The kernel identity used is
    d^3/ds^3 exp(-z^2/4t) = -(z (z^2 - 6t) / (8 t^3)) exp(-z^2/4t), z = s - mu,
    so the initial datum itself is never differentiated.
    """
    _check_time(t)
    rule = _profile_rule(v0, s, t)
    if rule is None:
        return 0.0
    mu = rule.nodes
    z = s - mu
    poly = z * (z * z - 6.0 * t)
    vals = np.exp(-z * z / (4.0 * t)) * poly * np.asarray(v0.evaluate(mu), dtype=float)
    total = float(np.sum(rule.weights * vals))
    return -total / (8.0 * t ** 3 * math.sqrt(4.0 * math.pi * t))


def fourth_derivative_1d(v0: InitialProfile1D, s: float, t: float) -> float:
    """Fourth spatial derivative of the 1-D solution, kernel-differentiated.

    Uses d^4/ds^4 exp(-z^2/4t) = ((12 t^2 - 12 t z^2 + z^4) / (16 t^4))
    exp(-z^2/4t).  Below t of about 1e-5 the alternating kernel moments
    cancel past what float64 can follow and accuracy degrades gracefully;
    everything in this package evaluates at larger times.
    """
    _check_time(t)
    rule = _profile_rule(v0, s, t)
    if rule is None:
        return 0.0
    mu = rule.nodes
    z = s - mu
    z2 = z * z
    poly = 12.0 * t * t - 12.0 * t * z2 + z2 * z2
    vals = np.exp(-z2 / (4.0 * t)) * poly * np.asarray(v0.evaluate(mu), dtype=float)
    total = float(np.sum(rule.weights * vals))
    return total / (16.0 * t ** 4 * math.sqrt(4.0 * math.pi * t))


def _radial_parts(psi):
    """Accept either radial InitialDataND or anything with evaluate/radius."""
    if isinstance(psi, InitialDataND):
        if not psi.radial or psi.radial_profile is None:
            raise ValueError("solve_radial_3d needs radial data")
        return psi.radial_profile, psi.support_radius, psi.feature
    profile = psi.evaluate
    radius = psi.radius
    feature = getattr(psi, "feature", None) or radius / 3.0
    return profile, radius, feature


def solve_radial_3d(psi, r: float, t: float) -> float:
    """Heat evolution of radial 3-D data, reduced to a 1-D integral.

    (4 pi t)^(-1/2) r^(-1) * integral over rho in [0, R] of
    rho psi(rho) [exp(-(r-rho)^2/4t) - exp(-(r+rho)^2/4t)] d rho.

    Near r = 0 the bracket over r is evaluated through the exact
    sinh(z)/z form with z = r rho / (2t), which is finite and smooth all
    the way to r = 0; the subtracted form takes over once z > 1 where it
    is free of cancellation (and the sinh form could overflow).
    """
    _check_time(t)
    if not r >= 0.0:
        raise ValueError(f"radius must be >= 0, got {r}")
    profile, radius, feature = _radial_parts(psi)
    win = _window(r, t, 0.0, radius)
    if win is None:
        return 0.0
    span_bound = min(radius, 2.0 * _half_window(t))
    rule = composite_rule(win, _panel_count(span_bound, t, feature / 4.0),
                          _ORDER_1D)
    rho = rule.nodes
    z = r * rho / (2.0 * t)
    kernel_over_r = np.empty_like(rho)
    small = z <= 1.0
    if np.any(small):
        rs = rho[small]
        zs = z[small]
        sinhc = np.divide(np.sinh(zs), zs, out=np.ones_like(zs), where=zs != 0.0)
        kernel_over_r[small] = (
            np.exp(-(r * r + rs * rs) / (4.0 * t)) * (rs / t) * sinhc)
    big = ~small
    if np.any(big):
        rb = rho[big]
        kernel_over_r[big] = (
            np.exp(-(r - rb) ** 2 / (4.0 * t))
            - np.exp(-(r + rb) ** 2 / (4.0 * t))) / r
    vals = rho * np.asarray(profile(rho), dtype=float) * kernel_over_r
    return float(np.sum(rule.weights * vals)) / math.sqrt(4.0 * math.pi * t)


def _nd_cap(g: InitialDataND) -> float:
    return g.quad_panel if g.quad_panel is not None else g.feature / 2.0


@lru_cache(maxsize=2)
def support_grid(g: InitialDataND) -> tuple[QuadratureRule, NDArray]:
    """Per-axis rule on the data's support cube plus tabulated values.

    Returns ``(rule, values)`` where ``rule`` holds the shared 1-D nodes
    and weights for every axis of the cube [-R, R]^N and ``values`` is
    the N-dimensional tensor of the datum at the grid points.  Cached on
    the data object, so repeated sweeps (sphere samples, stencils,
    moment directions) tabulate the datum once.
    """
    R = g.support_radius
    panels = int(np.clip(math.ceil(2.0 * R / _nd_cap(g)), 4, _MAX_PANELS))
    rule = composite_rule((-R, R), panels, _ORDER_ND)
    y = rule.nodes
    n = y.size
    if float(n) ** g.dimension > _CACHE_NODE_LIMIT:
        raise MemoryError(
            f"support grid would need {n}^{g.dimension} nodes; "
            "datum feature scale is too fine for tabulation")
    if g.dimension == 1:
        vals = np.asarray(g.evaluate(y[:, None]), dtype=float)
    elif g.dimension == 2:
        pts = np.empty((n, n, 2))
        pts[..., 0] = y[:, None]
        pts[..., 1] = y[None, :]
        vals = np.asarray(g.evaluate(pts), dtype=float)
    else:
        vals = np.empty((n, n, n))
        pts = np.empty((n, n, 3))
        pts[..., 1] = y[:, None]
        pts[..., 2] = y[None, :]
        for i in range(n):
            pts[..., 0] = y[i]
            vals[i] = np.asarray(g.evaluate(pts), dtype=float)
    return rule, vals


def grid_contract(values: NDArray, factors: list[NDArray]) -> float:
    """Contract a tabulated value tensor against one factor per axis.

    ``factors[i]`` must already include the quadrature weights for axis
    i.  The contraction runs innermost axis first so each step is a
    matrix-vector product.
    """
    out = values
    for fac in reversed(factors[1:]):
        out = (out.reshape(-1, fac.size) @ fac).reshape(out.shape[:-1])
    return float(out @ factors[0])


def _kernel_factors(rule: QuadratureRule, x: NDArray, t: float) -> list[NDArray]:
    return [rule.weights * np.exp(-(rule.nodes - xi) ** 2 / (4.0 * t))
            for xi in x]


def _tensor_windowed(g: InitialDataND, x: NDArray, t: float,
                     direction: NDArray | None) -> float:
    """Per-point windowed tensor quadrature, for kernels narrower than
    the datum's features.  Memory stays at O(nodes^2) via a slab loop."""
    R = g.support_radius
    span_bound = min(2.0 * R, 2.0 * _half_window(t))
    n_panels = _panel_count(span_bound, t, _nd_cap(g))
    rules = []
    for xi in x:
        win = _window(float(xi), t, -R, R)
        if win is None:
            return 0.0
        rules.append(composite_rule(win, n_panels, _ORDER_ND))
    kern = [
        rule.weights * np.exp(-(rule.nodes - xi) ** 2 / (4.0 * t))
        for rule, xi in zip(rules, x)
    ]
    n = g.dimension
    if n == 1:
        mu = rules[0].nodes
        vals = np.asarray(g.evaluate(mu[:, None]), dtype=float)
        if direction is not None:
            vals = vals * ((mu - x[0]) * direction[0])
        return float(np.sum(kern[0] * vals))
    if n == 2:
        y0, y1 = rules[0].nodes, rules[1].nodes
        pts = np.empty((y0.size, y1.size, 2))
        pts[..., 0] = y0[:, None]
        pts[..., 1] = y1[None, :]
        vals = np.asarray(g.evaluate(pts), dtype=float)
        if direction is not None:
            vals = vals * (((y0 - x[0]) * direction[0])[:, None]
                           + ((y1 - x[1]) * direction[1])[None, :])
        return float(np.sum(kern[0][:, None] * kern[1][None, :] * vals))
    y0, y1, y2 = rules[0].nodes, rules[1].nodes, rules[2].nodes
    pts = np.empty((y1.size, y2.size, 3))
    pts[..., 1] = y1[:, None]
    pts[..., 2] = y2[None, :]
    k12 = kern[1][:, None] * kern[2][None, :]
    if direction is not None:
        d12 = (((y1 - x[1]) * direction[1])[:, None]
               + ((y2 - x[2]) * direction[2])[None, :])
    total = 0.0
    for i in range(y0.size):
        pts[..., 0] = y0[i]
        vals = np.asarray(g.evaluate(pts), dtype=float)
        if direction is not None:
            vals = vals * (d12 + (y0[i] - x[0]) * direction[0])
        total += kern[0][i] * float(np.sum(k12 * vals))
    return total


def _tensor_apply(g: InitialDataND, x: NDArray, t: float,
                  direction: NDArray | None) -> float:
    if 1.2 * math.sqrt(t) < _nd_cap(g):
        return _tensor_windowed(g, x, t, direction)
    rule, vals = support_grid(g)
    base = _kernel_factors(rule, x, t)
    if direction is None:
        return grid_contract(vals, base)
    total = 0.0
    for axis, ell in enumerate(direction):
        if ell == 0.0:
            continue
        facs = list(base)
        facs[axis] = base[axis] * (rule.nodes - x[axis])
        total += ell * grid_contract(vals, facs)
    return total


def _check_point(g: InitialDataND, x) -> NDArray:
    pt = np.atleast_1d(np.asarray(x, dtype=float))
    if pt.ndim != 1 or pt.size != g.dimension:
        raise ValueError(
            f"point has shape {pt.shape}, data lives in dimension {g.dimension}")
    return pt


def solve_nd(g: InitialDataND, x, t: float) -> float:
    """Heat evolution of compactly supported data on R^N, N <= 3.

    Tensor-product composite Gauss on the support cube.  Points outside
    the support contribute through ``g`` evaluating to zero there, so no
    ball indicator is needed.
    """
    _check_time(t)
    pt = _check_point(g, x)
    total = _tensor_apply(g, pt, t, None)
    return total * (4.0 * math.pi * t) ** (-g.dimension / 2.0)


def directional_derivative(g: InitialDataND, x, t: float, direction) -> float:
    """Spatial derivative of solve_nd along ``direction``.

    Kernel-differentiated:
    grad_x exp(-|x-y|^2/4t) . l = ((y-x).l / 2t) exp(-|x-y|^2/4t).
    """
    _check_time(t)
    pt = _check_point(g, x)
    ell = np.asarray(direction, dtype=float)
    if ell.shape != pt.shape:
        raise ValueError("direction must have the point's dimension")
    norm = float(np.linalg.norm(ell))
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    total = _tensor_apply(g, pt, t, ell)
    return total / (2.0 * t) * (4.0 * math.pi * t) ** (-g.dimension / 2.0)
