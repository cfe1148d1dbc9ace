"""Quadrature, sign scanning, root refinement, and a heat-residual probe.

The quadrature entry points deliberately evaluate integrands on arrays of
nodes.  A scalar-only callable still works (a per-point fallback kicks in)
but every integrand defined in this package is vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from . import config
from .errors import ConvergenceError, EvaluationError

__all__ = [
    "QuadratureRule",
    "Bracket",
    "gauss_nodes",
    "composite_rule",
    "adaptive_integrate",
    "integrate_singular_weight",
    "sign_scan",
    "refine_root",
    "fd_heat_residual",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for a rule on a fixed interval.

    Invariants: nodes strictly increasing inside the interval, weights
    positive, and for Gauss-Legendre rules the weights sum to the interval
    length.
    """

    nodes: NDArray[np.float64]
    weights: NDArray[np.float64]
    order: int

    def integrate(self, f: Callable) -> float:
        """Apply the rule to ``f`` (vectorized over the nodes)."""
        return float(np.sum(self.weights * _eval_on(f, self.nodes)))


@dataclass(frozen=True)
class Bracket:
    """Interval with a sign change: f(lo) * f(hi) < 0 by construction."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("bracket endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if not (math.isfinite(self.f_lo) and math.isfinite(self.f_hi)):
            raise ValueError("bracket function values must be finite")
        if not self.f_lo * self.f_hi < 0.0:
            raise ValueError("bracket endpoints must have opposite signs")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@lru_cache(maxsize=128)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _eval_on(f: Callable, x: NDArray) -> NDArray:
    """Evaluate ``f`` on an array, falling back to a scalar loop."""
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape == x.shape:
            return y
    except Exception:
        pass
    return np.array([float(f(xi)) for xi in x], dtype=float)


def gauss_nodes(order: int, interval: Sequence[float] = (-1.0, 1.0)) -> QuadratureRule:
    """Gauss-Legendre rule of the given order mapped onto ``interval``.

    Parameters
    ----------
    order : int
        Number of nodes; exact for polynomials of degree <= 2*order - 1.
    interval : pair of floats
        Integration interval (lo, hi) with lo < hi.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    lo, hi = float(interval[0]), float(interval[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"invalid interval ({lo}, {hi})")
    x, w = _leggauss(order)
    half = 0.5 * (hi - lo)
    return QuadratureRule(nodes=lo + half * (x + 1.0), weights=half * w, order=order)


def composite_rule(interval: Sequence[float], panels: int, order: int) -> QuadratureRule:
    """Composite Gauss-Legendre rule: ``panels`` equal panels of ``order`` nodes."""
    if panels < 1:
        raise ValueError(f"panels must be >= 1, got {panels}")
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError(f"invalid interval ({lo}, {hi})")
    edges = np.linspace(lo, hi, panels + 1)
    parts = [gauss_nodes(order, (edges[i], edges[i + 1])) for i in range(panels)]
    return QuadratureRule(
        nodes=np.concatenate([p.nodes for p in parts]),
        weights=np.concatenate([p.weights for p in parts]),
        order=order,
    )


def _panel_estimates(f: Callable, lo: float, hi: float, order: int):
    """Gauss values at order n and 2n on one panel; their gap is the error proxy."""
    coarse = gauss_nodes(order, (lo, hi))
    fine = gauss_nodes(2 * order, (lo, hi))
    vc = _eval_on(f, coarse.nodes)
    vf = _eval_on(f, fine.nodes)
    if not (np.all(np.isfinite(vc)) and np.all(np.isfinite(vf))):
        bad = np.concatenate([coarse.nodes[~np.isfinite(vc)],
                              fine.nodes[~np.isfinite(vf)]])
        raise EvaluationError(
            f"integrand returned a non-finite value near {bad[0]!r}", where=bad[0])
    return float(np.sum(coarse.weights * vc)), float(np.sum(fine.weights * vf))


def adaptive_integrate(
    f: Callable,
    interval: Sequence[float],
    tol: float = config.QUAD_REL_TOL,
    *,
    abs_floor: float = config.QUAD_ABS_FLOOR,
    order: int = 10,
    max_depth: int = 48,
    max_panels: int = 4096,
) -> tuple[float, float]:
    """Adaptively integrate ``f`` over ``interval``.

    Composite Gauss-Legendre with recursive bisection: each panel carries an
    embedded error estimate (gap between the order-n and order-2n values) and
    is split until the estimate fits its share of the budget.  Panels are
    processed left to right, so the result is deterministic.

    Returns
    -------
    (value, error_estimate)
        ``value`` is the sum of the order-2n panel values; the estimate is
        conservative for integrands this machinery is used on.

    Raises
    ------
    ConvergenceError
        If some panel still fails its budget at ``max_depth`` splits (the
        best value so far and its estimate ride along on the exception).
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"invalid interval ({lo}, {hi})")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    length = hi - lo

    g1, g2 = _panel_estimates(f, lo, hi, order)
    scale = abs(g2)

    # Budget for a panel is proportional to its share of the interval.
    def budget(panel_len: float) -> float:
        return max(tol * scale, abs_floor) * (panel_len / length)

    value = 0.0
    err = 0.0
    n_panels = 0
    # Stack of (lo, hi, g_n, g_2n, depth); push right child first so the
    # left one is handled first and accumulation order is left to right.
    stack = [(lo, hi, g1, g2, 0)]
    while stack:
        p_lo, p_hi, p1, p2, depth = stack.pop()
        est = abs(p2 - p1)
        if est <= budget(p_hi - p_lo):
            value += p2
            err += est
            n_panels += 1
            continue
        if depth >= max_depth or n_panels + len(stack) >= max_panels:
            best = value + p2 + sum(item[3] for item in stack)
            raise ConvergenceError(
                f"adaptive quadrature stalled on [{p_lo}, {p_hi}] "
                f"(estimate {est:.3e} over budget {budget(p_hi - p_lo):.3e})",
                best=best, estimate=err + est)
        mid = 0.5 * (p_lo + p_hi)
        right = (*(_panel_estimates(f, mid, p_hi, order)),)
        left = (*(_panel_estimates(f, p_lo, mid, order)),)
        stack.append((mid, p_hi, right[0], right[1], depth + 1))
        stack.append((p_lo, mid, left[0], left[1], depth + 1))
    return value, err


def integrate_singular_weight(
    f: Callable,
    kappa: float,
    tol: float = config.QUAD_REL_TOL,
) -> float:
    """Integrate f(t) * (1 - t^2)^kappa over [-1, 1] for kappa > -1.

    The substitution t = cos(theta) turns the weight into
    sin(theta)^(2*kappa + 1), which is bounded for kappa >= -1/2, so the
    endpoint singularity never reaches the quadrature nodes.  At
    kappa = -1/2 the weight disappears entirely.
    """
    if not kappa > -1.0:
        raise ValueError(f"weight exponent must satisfy kappa > -1, got {kappa}")
    p = 2.0 * kappa + 1.0

    def theta_integrand(theta: NDArray) -> NDArray:
        vals = np.asarray(_eval_on(f, np.cos(theta)), dtype=float)
        if p == 0.0:
            return vals
        return vals * np.sin(theta) ** p

    value, _ = adaptive_integrate(theta_integrand, (0.0, math.pi), tol)
    return value


def sign_scan(f: Callable, grid: Sequence[float]) -> list[Bracket]:
    """Evaluate ``f`` on a grid and return every adjacent sign-change pair.

    Exact zeros at grid nodes are not bracketed (the contract requires a
    strict sign change); shift the grid if that matters.  A non-finite
    value raises EvaluationError naming the offending node.
    """
    pts = np.asarray(grid, dtype=float)
    if pts.ndim != 1 or pts.size < 2:
        raise ValueError("grid must be one-dimensional with at least 2 points")
    if not np.all(np.diff(pts) > 0.0):
        raise ValueError("grid must be strictly increasing")
    vals = _eval_on(f, pts)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise EvaluationError(
            f"non-finite value {vals[idx]!r} at grid node {pts[idx]!r} (index {idx})",
            where=pts[idx])
    out = []
    for i in range(pts.size - 1):
        if vals[i] * vals[i + 1] < 0.0:
            out.append(Bracket(float(pts[i]), float(pts[i + 1]),
                               float(vals[i]), float(vals[i + 1])))
    return out


def _refine_root(f: Callable, bracket: Bracket, tol: float,
                 max_iter: int = 200) -> tuple[float, float, float]:
    """Brent refinement; returns (root, final_bracket_width, f(root))."""
    a, b = bracket.lo, bracket.hi
    fa, fb = bracket.f_lo, bracket.f_hi
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if fb * fc > 0.0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * np.finfo(float).eps * abs(b) + 0.5 * tol
        m = 0.5 * (c - b)
        if abs(m) <= tol1:
            return b, 2.0 * abs(m), fb
        if fb == 0.0:
            # Interpolation can land exactly on a zero while the bracket
            # is still wide; certify the width by probing outward from
            # the hit instead of reporting the stale interval.
            step = tol1
            while step <= abs(m):
                if float(f(b - step)) * float(f(b + step)) < 0.0:
                    return b, 2.0 * step, fb
                step *= 4.0
            return b, 2.0 * abs(m), fb
        if abs(e) < tol1 or abs(fa) <= abs(fb):
            d = e = m  # bisect: no progress from interpolation
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * m * s  # secant
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * m * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q  # interpolation accepted
            else:
                d = e = m  # fall back to the midpoint
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += tol1 if m > 0.0 else -tol1
        fb = float(f(b))
        if not math.isfinite(fb):
            raise EvaluationError(f"non-finite value at {b!r} during refinement",
                                  where=b)
    raise ConvergenceError(
        f"root refinement did not reach width {tol:.3e} in {max_iter} iterations",
        best=b, estimate=abs(c - b))


def refine_root(f: Callable, bracket: Bracket, tol: float = config.ROOT_TOL) -> float:
    """Shrink a bracket to width <= tol (plus a few ulps of the root) and
    return the best point inside it.

    Brent-style: inverse-quadratic or secant steps where they help, with a
    guaranteed bisection fallback, ties broken toward the midpoint.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    root, _, _ = _refine_root(f, bracket, tol)
    return root


def fd_heat_residual(
    u: Callable,
    x,
    t: float,
    h: float | None = None,
    dt: float | None = None,
) -> float:
    """|du/dt - laplacian(u)| at (x, t) by finite differences.

    Space uses the fourth-order five-point second-derivative stencil per
    axis, time the second-order central difference, so the residual of an
    exact solution shrinks like h^4 once dt is small enough.  ``u`` is
    called as ``u(point, time)`` with ``point`` a 1-D ndarray.

    The time stencil must stay in t > 0; ``t - dt <= 0`` raises ValueError.
    """
    pt = np.atleast_1d(np.asarray(x, dtype=float))
    if pt.ndim != 1:
        raise ValueError("x must be a point, not an array of points")
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t}")
    if h is None:
        h = config.fd_space_step(t)
    if dt is None:
        dt = config.fd_time_step(t)
    if h <= 0.0 or dt <= 0.0:
        raise ValueError("h and dt must be positive")
    if t - dt <= 0.0:
        raise ValueError(f"time stencil leaves t > 0: t={t}, dt={dt}")

    u0 = float(u(pt, t))
    lap = 0.0
    for i in range(pt.size):
        step = np.zeros_like(pt)
        step[i] = h
        lap += (
            -float(u(pt + 2.0 * step, t))
            + 16.0 * float(u(pt + step, t))
            - 30.0 * u0
            + 16.0 * float(u(pt - step, t))
            - float(u(pt - 2.0 * step, t))
        ) / (12.0 * h * h)
    du_dt = (float(u(pt, t + dt)) - float(u(pt, t - dt))) / (2.0 * dt)
    res = abs(du_dt - lap)
    if not math.isfinite(res):
        raise EvaluationError(f"non-finite residual at x={pt!r}, t={t}", where=(pt, t))
    return res
