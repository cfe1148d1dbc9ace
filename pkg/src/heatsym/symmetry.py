"""Symmetry detectors: constancy on scaled boundaries, monotonicity
margins, normal alignment, and the 1-D / N-D moment tests.

The moment integrals are the workhorses.  In 1-D the weighted integral
of the datum against e^{by/2} e^{-y^2/4t} vanishes for all t exactly
when the datum is even; the Laplace-variable form trades the t family
for a lambda family.  In N dimensions the rotation-difference moments
vanish for radial data, and harmonic coefficients of sphere restrictions
say which degrees carry the asymmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from . import config
from .errors import EvaluationError
from .harmonics import SphereGrid, harmonic_catalog, harmonic_norm, harmonic_poly, sphere_grid
from .heat import directional_derivative, grid_contract, support_grid
from .numerics import adaptive_integrate
from .profiles import InitialDataND, InitialProfile1D

__all__ = [
    "TimeSequence",
    "BoundarySample",
    "ConstancyReport",
    "check_scaled_boundary",
    "monotonicity_margin",
    "AlignmentResult",
    "normal_alignment",
    "moment_1d",
    "laplace_moment_1d",
    "moment_nd",
    "spherical_moment",
    "harmonic_coefficients",
    "rotation_catalog",
    "circle_boundary",
    "sphere_boundary",
    "ellipse_boundary",
    "ellipsoid_boundary",
    "perturb_normals",
]


@dataclass(frozen=True)
class TimeSequence:
    """Strictly increasing positive times, usually geometric."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("time sequence cannot be empty")
        vals = np.asarray(self.values, dtype=float)
        if not np.all(vals > 0.0):
            raise ValueError("times must be positive")
        if not np.all(np.diff(vals) > 0.0):
            raise ValueError("times must increase strictly")
        object.__setattr__(self, "values", tuple(float(v) for v in vals))

    @classmethod
    def geometric(cls, base: float, ratio: float, count: int) -> "TimeSequence":
        if base <= 0.0:
            raise ValueError("base time must be positive")
        if ratio <= 1.0:
            raise ValueError("ratio must exceed 1 for an unbounded sequence")
        if count < 1:
            raise ValueError("need at least one time")
        return cls(tuple(base * ratio ** n for n in range(count)))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def _unit(v: NDArray, what: str, tol: float = 1e-12) -> None:
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > tol:
        raise ValueError(f"{what} must be a unit vector, |v| = {n!r}")


@dataclass(frozen=True)
class BoundarySample:
    """A boundary point with its outward unit normal.

    ``tangents``, when provided, must span directions orthogonal to the
    normal (checked to 1e-12).
    """

    point: NDArray
    normal: NDArray
    tangents: tuple[NDArray, ...] = ()

    def __post_init__(self):
        p = np.asarray(self.point, dtype=float)
        nu = np.asarray(self.normal, dtype=float)
        if p.shape != nu.shape or p.ndim != 1:
            raise ValueError("point and normal must be vectors of equal length")
        _unit(nu, "normal")
        tans = tuple(np.asarray(tv, dtype=float) for tv in self.tangents)
        for tv in tans:
            if abs(float(tv @ nu)) > 1e-12 * max(1.0, float(np.linalg.norm(tv))):
                raise ValueError("tangent vector not orthogonal to the normal")
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "normal", nu)
        object.__setattr__(self, "tangents", tans)


@dataclass(frozen=True)
class ConstancyReport:
    """Statistics of solution values sampled on one candidate level set.

    ``scale`` is max|sample| (floored away from zero), and the report
    passes when spread <= tolerance * scale.
    """

    time: float
    samples: NDArray
    mean: float
    spread: float
    scale: float
    tolerance: float
    passed: bool

    @classmethod
    def from_values(cls, time: float, values, tolerance: float) -> "ConstancyReport":
        arr = np.asarray(values, dtype=float)
        if arr.size == 0:
            raise ValueError("no samples")
        spread = float(np.max(arr) - np.min(arr))
        scale = max(float(np.max(np.abs(arr))), 1e-300)
        return cls(
            time=float(time),
            samples=arr,
            mean=float(np.mean(arr)),
            spread=spread,
            scale=scale,
            tolerance=float(tolerance),
            passed=spread <= tolerance * scale,
        )


def check_scaled_boundary(
    u: Callable[[NDArray, float], float],
    boundary: Sequence[BoundarySample],
    times: TimeSequence,
    tol: float,
    scale_factors: Sequence[float] | None = None,
) -> list[ConstancyReport]:
    """Constancy of u on the boundary scaled along a time sequence.

    At the n-th time the boundary points are multiplied by t_n, or by
    ``scale_factors[n]`` when given (the adapted mode: whatever radius
    family the caller knows to be level).  One ConstancyReport per time.
    """
    if len(boundary) == 0:
        raise ValueError("boundary must contain at least one sample")
    if scale_factors is not None and len(scale_factors) != len(times):
        raise ValueError("need one scale factor per time")
    reports = []
    for n, t in enumerate(times):
        factor = float(scale_factors[n]) if scale_factors is not None else t
        vals = []
        for sample in boundary:
            x = factor * sample.point
            try:
                vals.append(float(u(x, t)))
            except Exception as exc:
                raise EvaluationError(
                    f"solution evaluation failed at time index {n}: {exc}",
                    where=(n, x)) from exc
        reports.append(ConstancyReport.from_values(t, vals, tol))
    return reports


def monotonicity_margin(
    g: InitialDataND,
    direction,
    offset: float,
    samples: Sequence[tuple],
) -> float:
    """Worst directional derivative beyond the half-space {x.l <= offset}.

    Every sample (point, time) must satisfy point . direction > offset,
    and the support of g must sit inside the half-space.  A negative
    return certifies monotone decay along ``direction`` at the samples.
    """
    ell = np.asarray(direction, dtype=float)
    _unit(ell, "direction")
    if g.support_radius > offset:
        raise ValueError(
            f"support radius {g.support_radius} reaches beyond the "
            f"half-space boundary at offset {offset}")
    if not samples:
        raise ValueError("need at least one (point, time) sample")
    worst = -math.inf
    for x, t in samples:
        pt = np.asarray(x, dtype=float)
        if float(pt @ ell) <= offset:
            raise ValueError(
                f"sample {pt!r} is not beyond the half-space boundary")
        worst = max(worst, directional_derivative(g, pt, t, ell))
    return worst


@dataclass(frozen=True)
class AlignmentResult:
    max_misalignment: float
    radius_spread: float


def normal_alignment(boundary: Sequence[BoundarySample]) -> AlignmentResult:
    """Tangential fraction of the position vector, and the radius spread.

    On a sphere centered at the origin each point is parallel to its
    normal, so the misalignment |p - (p.nu)nu| / |p| vanishes; any other
    star-shaped boundary leaves a tangential remainder.
    """
    if len(boundary) == 0:
        raise ValueError("boundary must contain at least one sample")
    worst = 0.0
    radii = []
    for sample in boundary:
        p, nu = sample.point, sample.normal
        r = float(np.linalg.norm(p))
        if r == 0.0:
            raise ValueError("boundary point at the origin has no direction")
        tangential = p - float(p @ nu) * nu
        worst = max(worst, float(np.linalg.norm(tangential)) / r)
        radii.append(r)
    return AlignmentResult(worst, max(radii) - min(radii))


def moment_1d(
    v0: InitialProfile1D,
    b: float,
    t: float,
    with_estimate: bool = False,
):
    """Weighted moment of a 1-D datum: integral of v0(y) e^{by/2} e^{-y^2/4t}.

    Up to a positive prefactor this is the forward solution at the
    moving point tb.  Fed the left-right difference of a datum it
    vanishes for every t exactly when the datum is even, which makes it
    the 1-D symmetry detector.  Requires the support strictly inside
    (-b, b).

    With ``with_estimate`` the quadrature error estimate is returned as
    a second element.
    """
    if t <= 0.0:
        raise ValueError(f"t must be positive, got {t}")
    if v0.support >= abs(b):
        raise ValueError(
            f"support [-{v0.support}, {v0.support}] must sit strictly "
            f"inside (-{abs(b)}, {abs(b)})")

    def integrand(y):
        y = np.asarray(y, dtype=float)
        return (np.asarray(v0.evaluate(y), dtype=float)
                * np.exp(b * y / 2.0 - y * y / (4.0 * t)))

    value, err = adaptive_integrate(
        integrand, (-v0.support, v0.support), config.QUAD_REL_TOL)
    if with_estimate:
        return value, err
    return value


def laplace_moment_1d(v0: InitialProfile1D, b: float, lam: float) -> float:
    """Laplace-variable form of the symmetry detector.

    Integral over y in (0, b) of
    [v0(y) e^{by/2} + v0(-y) e^{-by/2}] e^{-lam y^2} dy,
    which is the transform of the symmetrized datum after the square-root
    substitution has been applied analytically (no 1/sqrt singularity
    survives).  Even data make it vanish for every lam.
    """
    if b <= 0.0:
        raise ValueError(f"b must be positive, got {b}")
    hi = min(b, v0.support)

    def integrand(y):
        y = np.asarray(y, dtype=float)
        plus = np.asarray(v0.evaluate(y), dtype=float) * np.exp(b * y / 2.0)
        minus = np.asarray(v0.evaluate(-y), dtype=float) * np.exp(-b * y / 2.0)
        return (plus + minus) * np.exp(-lam * y * y)

    value, _ = adaptive_integrate(integrand, (0.0, hi), config.QUAD_REL_TOL)
    return value


def _check_rotation(A, dimension: int) -> NDArray:
    mat = np.asarray(A, dtype=float)
    if mat.shape != (dimension, dimension):
        raise ValueError(f"rotation must be {dimension}x{dimension}")
    if not np.allclose(mat.T @ mat, np.eye(dimension), atol=1e-10):
        raise ValueError("matrix is not orthogonal")
    return mat


@lru_cache(maxsize=4)
def _difference_data(g: InitialDataND, a_key: tuple) -> InitialDataND:
    """Datum for y -> g(y) - g(Ay); support and features match g."""
    A = np.array(a_key, dtype=float)

    def evaluate(pts: NDArray) -> NDArray:
        pts = np.asarray(pts, dtype=float)
        return (np.asarray(g.evaluate(pts), dtype=float)
                - np.asarray(g.evaluate(pts @ A.T), dtype=float))

    return InitialDataND(
        evaluate=evaluate,
        dimension=g.dimension,
        support_radius=g.support_radius,
        sup_bound=2.0 * g.sup_bound,
        radial=False,
        feature=g.feature,
        quad_panel=g.quad_panel,
    )


def moment_nd(g: InitialDataND, A, x, s: float) -> float:
    """Volume moment of the rotation difference:
    integral of e^{x.y/2} e^{-s|y|^2} (g(y) - g(Ay)) over the support.

    The exponential factors split per axis, so the integral is one
    tensor contraction against the cached support grid of the difference
    datum.  ``x`` must lie on the support sphere.
    """
    mat = _check_rotation(A, g.dimension)
    pt = np.asarray(x, dtype=float)
    if pt.shape != (g.dimension,):
        raise ValueError(f"x must be a point in R^{g.dimension}")
    R = g.support_radius
    if abs(float(np.linalg.norm(pt)) - R) > 1e-10 * max(R, 1.0):
        raise ValueError(f"|x| must equal the support radius {R}")
    diff = _difference_data(g, tuple(map(tuple, mat)))
    rule, vals = support_grid(diff)
    y = rule.nodes
    factors = [rule.weights * np.exp(xi * y / 2.0 - s * y * y) for xi in pt]
    return grid_contract(vals, factors)


def spherical_moment(
    g: InitialDataND,
    A,
    r: float,
    R: float,
    alpha,
    grid: SphereGrid | None = None,
) -> float:
    """Sphere-restricted moment of the rotation difference at radius r:
    integral over the unit sphere of e^{(Rr/2) alpha.w} (g(rw) - g(rAw)).

    This never touches a volume quadrature; the datum is evaluated
    directly on the sphere grid.
    """
    if not 0.0 < r <= R:
        raise ValueError(f"need 0 < r <= R, got r={r}, R={R}")
    mat = _check_rotation(A, g.dimension)
    a_dir = np.asarray(alpha, dtype=float)
    _unit(a_dir, "alpha", tol=1e-10)
    if grid is None:
        grid = sphere_grid(g.dimension, 32)
    pts = grid.points
    diff = (np.asarray(g.evaluate(r * pts), dtype=float)
            - np.asarray(g.evaluate(r * pts @ mat.T), dtype=float))
    kern = np.exp((R * r / 2.0) * pts @ a_dir)
    return float(np.dot(grid.weights, kern * diff))


def harmonic_coefficients(
    h: Callable[[NDArray], NDArray],
    max_degree: int = 4,
    grid: SphereGrid | None = None,
) -> dict[tuple[int, int], float]:
    """Projections of a sphere function onto the orthonormalized catalog.

    Returns {(degree, variant): coefficient}.  All coefficients near
    zero certify that h vanishes up to the catalog's resolution.
    """
    if max_degree > 6:
        raise ValueError("catalog stops at degree 6")
    if grid is None:
        grid = sphere_grid(3, 2 * max_degree + 6)
    vals = np.asarray(h(grid.points), dtype=float)
    out = {}
    for k, v in harmonic_catalog(max_degree):
        basis = np.asarray(harmonic_poly(k, v, grid.points), dtype=float)
        coeff = float(np.dot(grid.weights, vals * basis)) / harmonic_norm(k, v)
        out[(k, v)] = coeff
    return out


def _axis_rotation(axis: int, quarter_turns: int) -> NDArray:
    """Rotation about a coordinate axis of R^3 by a multiple of 90
    degrees, with exact 0 and +-1 entries."""
    c, s = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][quarter_turns % 4]
    i, j = [k for k in range(3) if k != axis]
    mat = np.eye(3)
    mat[i, i] = c
    mat[i, j] = -s
    mat[j, i] = s
    mat[j, j] = c
    return mat


def rotation_catalog(
    dimension: int = 3,
    n_random: int = 3,
    seed: int = config.DEFAULT_SEED,
) -> list[NDArray]:
    """Deterministic test rotations: quarter and half turns about each
    coordinate axis, then ``n_random`` seeded uniform rotations.

    For dimension 3 the deterministic head has six entries (90 and 180
    degrees about each axis); dimension 2 has the two plane turns.
    """
    if dimension not in (2, 3):
        raise ValueError("rotation catalog supports dimensions 2 and 3")
    mats: list[NDArray] = []
    if dimension == 3:
        for axis in range(3):
            for turns in (1, 2):
                mats.append(_axis_rotation(axis, turns))
    else:
        mats.append(np.array([[0.0, -1.0], [1.0, 0.0]]))
        mats.append(np.array([[-1.0, 0.0], [0.0, -1.0]]))
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        q, r = np.linalg.qr(rng.normal(size=(dimension, dimension)))
        q = q @ np.diag(np.sign(np.diag(r)))
        if np.linalg.det(q) < 0.0:
            q[:, 0] = -q[:, 0]
        mats.append(q)
    return mats


# --- boundary constructions -----------------------------------------

def circle_boundary(radius: float, count: int = config.BOUNDARY_SAMPLES
                    ) -> list[BoundarySample]:
    """Origin-centered circle with exact outward normals."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    theta = 2.0 * math.pi * np.arange(count) / count
    out = []
    for th in theta:
        nu = np.array([math.cos(th), math.sin(th)])
        out.append(BoundarySample(point=radius * nu, normal=nu))
    return out


def sphere_boundary(radius: float, count: int = config.BOUNDARY_SAMPLES
                    ) -> list[BoundarySample]:
    """Origin-centered sphere sampled on an angle-uniform product grid.

    The actual sample count is the nearest n_polar * 2 n_polar factor
    not exceeding ``count`` (200 gives exactly 10 x 20).
    """
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    n_polar = max(2, int(math.sqrt(count / 2.0)))
    n_azim = max(3, count // n_polar)
    out = []
    for i in range(n_polar):
        th = math.pi * (i + 0.5) / n_polar
        for j in range(n_azim):
            ph = 2.0 * math.pi * j / n_azim
            nu = np.array([
                math.sin(th) * math.cos(ph),
                math.sin(th) * math.sin(ph),
                math.cos(th),
            ])
            out.append(BoundarySample(point=radius * nu, normal=nu))
    return out


def ellipse_boundary(a: float, b: float, count: int = config.BOUNDARY_SAMPLES
                     ) -> list[BoundarySample]:
    """Origin-centered ellipse with semi-axes (a, b), exact normals."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("semi-axes must be positive")
    theta = 2.0 * math.pi * np.arange(count) / count
    out = []
    for th in theta:
        p = np.array([a * math.cos(th), b * math.sin(th)])
        grad = np.array([p[0] / a ** 2, p[1] / b ** 2])
        out.append(BoundarySample(point=p, normal=grad / np.linalg.norm(grad)))
    return out


def ellipsoid_boundary(axes: Sequence[float],
                       count: int = config.BOUNDARY_SAMPLES
                       ) -> list[BoundarySample]:
    """Origin-centered ellipsoid with the given three semi-axes."""
    ax = np.asarray(axes, dtype=float)
    if ax.shape != (3,) or np.any(ax <= 0.0):
        raise ValueError("need three positive semi-axes")
    out = []
    for sample in sphere_boundary(1.0, count):
        p = sample.point * ax
        grad = p / ax ** 2
        out.append(BoundarySample(point=p, normal=grad / np.linalg.norm(grad)))
    return out


def perturb_normals(boundary: Sequence[BoundarySample], magnitude: float,
                    seed: int = config.DEFAULT_SEED) -> list[BoundarySample]:
    """Tilt each normal by about ``magnitude`` radians and renormalize."""
    rng = np.random.default_rng(seed)
    out = []
    for sample in boundary:
        nu = sample.normal + magnitude * rng.normal(size=sample.normal.shape)
        nu = nu / np.linalg.norm(nu)
        out.append(BoundarySample(point=sample.point, normal=nu))
    return out
