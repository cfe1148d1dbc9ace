"""Initial-data containers and the stock profiles the tests and CLI use.

Evaluation callables are vectorized: 1-D profiles map an ndarray of points
to an ndarray of values, N-dimensional data maps arrays of shape (..., N)
to shape (...).  The kernel quadratures rely on this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "InitialProfile1D",
    "InitialDataND",
    "bump_1d",
    "truncated_gaussian_1d",
    "difference_profile",
    "radial_bump_nd",
    "offset_bump_nd",
    "perturbed_bump_nd",
    "truncated_gaussian_nd",
]


@dataclass(frozen=True)
class InitialProfile1D:
    """Compactly supported 1-D initial datum.

    ``evaluate`` vanishes outside [-support, support] and is bounded by
    ``sup_bound``.  ``nonnegative`` is False for difference profiles
    g(y) - g(-y), which are the one place sign changes are legitimate.
    ``feature`` is the length scale of variation that quadrature panel
    sizing uses; it defaults to a third of the support half-width.
    """

    evaluate: Callable[[NDArray], NDArray]
    support: float
    sup_bound: float
    even: bool = False
    nonnegative: bool = True
    feature: float | None = None

    def __post_init__(self):
        if not self.support > 0.0:
            raise ValueError(f"support half-width must be positive, got {self.support}")
        if not self.sup_bound > 0.0:
            raise ValueError(f"sup bound must be positive, got {self.sup_bound}")
        if self.feature is None:
            object.__setattr__(self, "feature", self.support / 3.0)

    def validate(self, n: int = 512) -> None:
        """Spot-check the declared invariants on a sample grid."""
        s = np.linspace(-self.support, self.support, n)
        v = np.asarray(self.evaluate(s), dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("profile returned a non-finite value")
        if np.any(np.abs(v) > self.sup_bound * (1.0 + 1e-12)):
            raise ValueError("profile exceeds its declared sup bound")
        if self.nonnegative and np.any(v < 0.0):
            raise ValueError("profile declared nonnegative takes a negative value")
        edges = np.asarray(self.evaluate(np.array([-self.support, self.support])))
        if np.any(np.abs(edges) > 1e-300):
            raise ValueError("profile does not vanish at the support edge")
        outside = np.asarray(self.evaluate(
            np.array([-2.0 * self.support, 2.0 * self.support])))
        if np.any(outside != 0.0):
            raise ValueError("profile does not vanish outside its support")
        if self.even:
            sym = np.asarray(self.evaluate(-s), dtype=float)
            if np.max(np.abs(sym - v)) > 1e-12 * self.sup_bound:
                raise ValueError("profile declared even is not even")


@dataclass(frozen=True)
class InitialDataND:
    """Compactly supported initial datum on R^N, N <= 3.

    ``radial`` data additionally carry ``radial_profile`` with the profile
    as a function of radius, which the dimension-reduced solver consumes.
    """

    evaluate: Callable[[NDArray], NDArray]
    dimension: int
    support_radius: float
    sup_bound: float
    radial: bool = False
    radial_profile: Callable[[NDArray], NDArray] | None = None
    feature: float | None = None
    # Quadrature panel width sufficient to resolve the datum.  Left None,
    # the solvers derive it from ``feature``; analytic data (a Gaussian,
    # say) can afford a coarser value than a bump would need over the
    # same support.
    quad_panel: float | None = None

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.dimension}")
        if not self.support_radius > 0.0:
            raise ValueError("support radius must be positive")
        if self.radial and self.radial_profile is None:
            raise ValueError("radial data needs its radial_profile")
        if self.feature is None:
            object.__setattr__(self, "feature", self.support_radius / 3.0)
        if self.quad_panel is not None and not self.quad_panel > 0.0:
            raise ValueError("quad_panel must be positive when given")


def _bump(u: NDArray) -> NDArray:
    """Standard C-infinity bump on (-1, 1), equal to 1 at 0."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    m = np.abs(u) < 1.0
    with np.errstate(over="ignore", under="ignore"):
        out[m] = np.exp(1.0 - 1.0 / (1.0 - u[m] ** 2))
    return out


def bump_1d(center: float = 0.0, width: float = 1.0,
            amplitude: float = 1.0) -> InitialProfile1D:
    """Smooth bump supported on [center - width, center + width]."""
    if width <= 0.0 or amplitude <= 0.0:
        raise ValueError("width and amplitude must be positive")

    def evaluate(s: NDArray) -> NDArray:
        return amplitude * _bump((np.asarray(s, dtype=float) - center) / width)

    return InitialProfile1D(
        evaluate=evaluate,
        support=abs(center) + width,
        sup_bound=amplitude,
        even=(center == 0.0),
        feature=width / 3.0,
    )


def truncated_gaussian_1d(s0: float, amplitude: float = 1.0,
                          tail: float = 1e-15) -> InitialProfile1D:
    """Gaussian exp(-s^2 / (4 s0)) cut off where it falls below ``tail``.

    The cut radius solves exp(-A^2/4s0) = tail, so the discarded mass is
    below ``tail`` relative to the total and the closed-form heat evolution
    (s0/(s0+t))^(1/2) exp(-s^2/(4(s0+t))) holds to that accuracy.
    """
    if s0 <= 0.0:
        raise ValueError(f"s0 must be positive, got {s0}")
    radius = math.sqrt(-4.0 * s0 * math.log(tail))

    def evaluate(s: NDArray) -> NDArray:
        s = np.asarray(s, dtype=float)
        return np.where(np.abs(s) <= radius,
                        amplitude * np.exp(-s * s / (4.0 * s0)), 0.0)

    return InitialProfile1D(
        evaluate=evaluate,
        support=radius,
        sup_bound=amplitude,
        even=True,
        feature=math.sqrt(2.0 * s0),
    )


def difference_profile(g: InitialProfile1D) -> InitialProfile1D:
    """Odd part g(y) - g(-y); the moment detectors feed on this."""

    def evaluate(s: NDArray) -> NDArray:
        s = np.asarray(s, dtype=float)
        return np.asarray(g.evaluate(s), dtype=float) - np.asarray(
            g.evaluate(-s), dtype=float)

    return InitialProfile1D(
        evaluate=evaluate,
        support=g.support,
        sup_bound=2.0 * g.sup_bound,
        even=False,
        nonnegative=False,
        feature=g.feature,
    )


def radial_bump_nd(dimension: int = 3, radius: float = 1.0,
                   amplitude: float = 1.0) -> InitialDataND:
    """Radial bump supported on the ball of the given radius."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")

    def radial_profile(r: NDArray) -> NDArray:
        return amplitude * _bump(np.asarray(r, dtype=float) / radius)

    def evaluate(pts: NDArray) -> NDArray:
        pts = np.asarray(pts, dtype=float)
        return radial_profile(np.sqrt(np.sum(pts * pts, axis=-1)))

    return InitialDataND(
        evaluate=evaluate,
        dimension=dimension,
        support_radius=radius,
        sup_bound=amplitude,
        radial=True,
        radial_profile=radial_profile,
        feature=radius / 3.0,
    )


def offset_bump_nd(center, width: float = 0.4,
                   amplitude: float = 1.0) -> InitialDataND:
    """Bump centered away from the origin; deliberately non-radial."""
    center = np.asarray(center, dtype=float)
    if width <= 0.0:
        raise ValueError("width must be positive")

    def evaluate(pts: NDArray) -> NDArray:
        pts = np.asarray(pts, dtype=float)
        d = np.sqrt(np.sum((pts - center) ** 2, axis=-1))
        return amplitude * _bump(d / width)

    return InitialDataND(
        evaluate=evaluate,
        dimension=center.size,
        support_radius=float(np.linalg.norm(center)) + width,
        sup_bound=amplitude,
        radial=False,
        feature=width / 3.0,
        quad_panel=width / 3.0,
    )


def perturbed_bump_nd(eps: float, radius: float = 1.0, offset: float = 0.35,
                      width: float = 0.4) -> InitialDataND:
    """Radial bump plus eps times an off-center bump along the first axis.

    The non-radial content scales exactly linearly in eps, which is what
    the detector linearity checks lean on.  eps = 0 gives radial data.
    """
    base = radial_bump_nd(3, radius)
    if eps == 0.0:
        return base
    pert = offset_bump_nd(np.array([offset, 0.0, 0.0]), width)

    def evaluate(pts: NDArray) -> NDArray:
        return base.evaluate(pts) + eps * pert.evaluate(pts)

    return InitialDataND(
        evaluate=evaluate,
        dimension=3,
        support_radius=max(base.support_radius, pert.support_radius),
        sup_bound=base.sup_bound + abs(eps) * pert.sup_bound,
        radial=False,
        feature=min(base.feature, pert.feature),
        quad_panel=pert.feature,
    )


def truncated_gaussian_nd(dimension: int, s0: float, amplitude: float = 1.0,
                          tail: float = 1e-15) -> InitialDataND:
    """Radial truncated Gaussian in N dimensions; see the 1-D variant."""
    prof = truncated_gaussian_1d(s0, amplitude, tail)

    def radial_profile(r: NDArray) -> NDArray:
        return prof.evaluate(np.asarray(r, dtype=float))

    def evaluate(pts: NDArray) -> NDArray:
        pts = np.asarray(pts, dtype=float)
        return radial_profile(np.sqrt(np.sum(pts * pts, axis=-1)))

    return InitialDataND(
        evaluate=evaluate,
        dimension=dimension,
        support_radius=prof.support,
        sup_bound=amplitude,
        radial=True,
        radial_profile=radial_profile,
        feature=prof.feature,
        quad_panel=1.5 * prof.feature,
    )
