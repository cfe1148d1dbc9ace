"""A non-radial caloric function with sphere-shaped level sets.

Construction, in brief: take a smooth even compactly supported bump
v0 on the line and let v be its heat evolution.  The third spatial
derivative w = d^3 v / ds^3 is odd in s, so w(r)/r extends smoothly
across r = 0, and

    f(r, t) = d/dr ( w(r, t) / r ) = (r dw/dr - w) / r^2

multiplied by the angular factor x1/|x| is caloric on R^3: for radial
phi the field phi(|x|) x1/|x| has Laplacian (phi'' + 4 phi'/r) x1/|x|,
and w solving the 1-D heat equation makes f/r satisfy exactly that
radial operator's heat flow.  Adding a large radial bump psi keeps the
t = 0 datum nonnegative without touching the angular part.

The level spheres: f(., t) keeps a zero r(t) pinned between the largest
zero r3 of w and the largest zero r4 of dw/dr, and on |x| = r(t) the
angular term drops out, leaving the radial part's constant.  Both
brackets grow like sqrt(t), so the level radius does too, yet the
solution is not radial anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from . import config
from .errors import StructureError
from .heat import (
    fourth_derivative_1d,
    solve_radial_3d,
    third_derivative_1d,
)
from .numerics import Bracket, _refine_root, fd_heat_residual, sign_scan
from .profiles import InitialDataND, InitialProfile1D
from .symmetry import sphere_boundary

__all__ = [
    "MollifierProfile",
    "build_mollifier",
    "f_level",
    "find_brackets",
    "LevelSphereRecord",
    "find_level_radius",
    "build_psi",
    "eval_counterexample",
    "counterexample_sweep",
    "find_similarity_time",
]

_SCAN_POINTS = 400
_LEVEL_SCAN_POINTS = 60


@dataclass(frozen=True)
class MollifierProfile:
    """Smooth even bump on [-a, a], strictly decreasing away from 0.

    ``profile`` is the same function wrapped for the kernel quadratures.
    """

    a: float
    evaluate: Callable[[NDArray], NDArray]
    profile: InitialProfile1D


def build_mollifier(a: float) -> MollifierProfile:
    """The standard bump exp(-1/(a^2 - s^2)) on (-a, a), zero outside.

    The strict decrease on (0, a) is checked through the sign of the
    analytic derivative -2s/(a^2-s^2)^2 times the bump on a grid.
    """
    if not a > 0.0:
        raise ValueError(f"support half-width must be positive, got {a}")

    def evaluate(s: NDArray) -> NDArray:
        s = np.asarray(s, dtype=float)
        inside = np.abs(s) < a
        out = np.zeros_like(s)
        gap = np.where(inside, a * a - s * s, 1.0)
        out[inside] = np.exp(-1.0 / gap[inside])
        return out

    grid = np.linspace(1e-3 * a, a * (1.0 - 1e-9), 201)
    slope_sign = -2.0 * grid / (a * a - grid * grid) ** 2
    if not np.all(slope_sign < 0.0):
        raise StructureError(
            "mollifier derivative fails to be negative on (0, a)",
            trace=[("grid", (float(grid[0]), float(grid[-1])))])

    profile = InitialProfile1D(
        evaluate=evaluate,
        support=a,
        sup_bound=math.exp(-1.0 / (a * a)),
        even=True,
        nonnegative=True,
    )
    return MollifierProfile(a=float(a), evaluate=evaluate, profile=profile)


def f_level(v0: MollifierProfile, r: float, t: float) -> float:
    """The level function (r w' - w)/r^2 with w the third derivative of
    the evolved profile; w' computed as the fourth derivative."""
    if not r > 0.0:
        raise ValueError(f"radius must be positive, got {r}")
    if not t > 0.0:
        raise ValueError(f"time must be positive, got {t}")
    w = third_derivative_1d(v0.profile, r, t)
    dw = fourth_derivative_1d(v0.profile, r, t)
    return (r * dw - w) / (r * r)


def _scan_window(a: float, t: float) -> NDArray:
    lo = 0.1 * math.sqrt(t)
    hi = a + math.sqrt(12.0 * t) + a
    return np.linspace(lo, hi, _SCAN_POINTS)


def _scan_trace(name: str, grid: NDArray, vals: NDArray) -> list[tuple]:
    return [
        ("function", name),
        ("window", (float(grid[0]), float(grid[-1]))),
        ("points", int(grid.size)),
        ("min", float(np.min(vals))),
        ("max", float(np.max(vals))),
    ]


def find_brackets(v0: MollifierProfile, t: float) -> tuple[float, float, float]:
    """Largest zero r3 of the third derivative, and the pair r2 < r4 of
    fourth-derivative zeros straddling its negative well.

    Scanning from the right end picks the zeros with the defining
    "negative (positive) beyond" property regardless of how many sign
    changes the profiles have further in.
    """
    if not t > 0.0:
        raise ValueError(f"time must be positive, got {t}")
    grid = _scan_window(v0.a, t)
    f3 = lambda s: third_derivative_1d(v0.profile, float(s), t)
    f4 = lambda s: fourth_derivative_1d(v0.profile, float(s), t)

    brackets3 = sign_scan(f3, grid)
    if not brackets3:
        raise StructureError(
            "no sign change of the third derivative on the scan window",
            trace=_scan_trace("third_derivative", grid,
                              np.array([f3(s) for s in grid])))
    r3 = _refine_root(f3, brackets3[-1], config.ROOT_TOL)[0]

    brackets4 = sign_scan(f4, grid)
    if len(brackets4) < 2:
        raise StructureError(
            "fourth derivative shows fewer than two sign changes; "
            "cannot bracket its negative well",
            trace=_scan_trace("fourth_derivative", grid,
                              np.array([f4(s) for s in grid])))
    r4 = _refine_root(f4, brackets4[-1], config.ROOT_TOL)[0]
    r2 = _refine_root(f4, brackets4[-2], config.ROOT_TOL)[0]

    if not r2 < r3 < r4:
        raise StructureError(
            f"bracket ordering violated: r2={r2}, r3={r3}, r4={r4}",
            trace=[("t", t)])
    return r2, r3, r4


@dataclass(frozen=True)
class LevelSphereRecord:
    """One time slice of the level-sphere sweep.

    ``lower`` and ``upper`` are the envelope bounds sqrt(5t) - a and
    a + sqrt(12t).  The sphere columns are NaN until the sweep fills
    them; ``find_level_radius`` alone only locates the radius.
    ``bracket_width`` is the final root-bracket width and ``u_scale``
    the sampled sup of |u|; neither is a table column.
    """

    t: float
    r2: float
    r3: float
    r4: float
    r: float
    lower: float
    upper: float
    f_residual: float
    sphere_spread: float = math.nan
    nonradial_gap: float = math.nan
    heat_residual: float = math.nan
    bracket_width: float = math.nan
    u_scale: float = math.nan
    multiple_roots: bool = False

    COLUMNS = ("t", "r2", "r3", "r4", "r", "lower", "upper", "f_residual",
               "sphere_spread", "nonradial_gap", "heat_residual")

    def row(self) -> tuple[float, ...]:
        return tuple(getattr(self, c) for c in self.COLUMNS)

    def check_invariants(self) -> None:
        if not self.r3 < self.r < self.r4:
            raise StructureError(
                f"level radius {self.r} escapes ({self.r3}, {self.r4})",
                trace=[("t", self.t)])
        if not self.lower <= self.r <= self.upper:
            raise StructureError(
                f"level radius {self.r} escapes the envelope "
                f"[{self.lower}, {self.upper}]",
                trace=[("t", self.t)])


def find_level_radius(v0: MollifierProfile, t: float,
                      tol: float = config.ROOT_TOL) -> LevelSphereRecord:
    """Zero of the level function inside (r3, r4), refined until the
    final bracket is no wider than ``tol``.

    When the scan sees several sign changes the largest root is kept
    (any zero gives a level sphere) and the record is flagged.
    """
    r2, r3, r4 = find_brackets(v0, t)
    grid = np.linspace(r3, r4, _LEVEL_SCAN_POINTS)
    f = lambda s: f_level(v0, float(s), t)
    brackets = sign_scan(f, grid)
    if not brackets:
        raise StructureError(
            "level function shows no sign change between the brackets",
            trace=_scan_trace("f_level", grid,
                              np.array([f(s) for s in grid])))
    root, width, fval = _refine_root(f, brackets[-1], 0.5 * tol)
    if width > tol:
        raise StructureError(
            f"root bracket stalled at width {width} > {tol}",
            trace=[("t", t), ("root", root)])
    a = v0.a
    return LevelSphereRecord(
        t=float(t), r2=r2, r3=r3, r4=r4, r=root,
        lower=math.sqrt(5.0 * t) - a,
        upper=a + math.sqrt(12.0 * t),
        f_residual=abs(fval),
        bracket_width=width,
        multiple_roots=len(brackets) > 1,
    )


def _bump(u: NDArray) -> NDArray:
    """exp(-1/(1-u^2)) inside (-1, 1), zero outside."""
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) < 1.0
    out = np.zeros_like(u)
    gap = np.where(inside, 1.0 - u * u, 1.0)
    out[inside] = np.exp(-1.0 / gap[inside])
    return out


def build_psi(v0: MollifierProfile, margin: float) -> InitialDataND:
    """Radial envelope making the full datum nonnegative, built lean.

    A sum of smooth bumps is grown greedily until it dominates
    1.5 |f(., 0+)| pointwise: each pass places one bump over the worst
    remaining deficit region.  Hugging |f| instead of capping its sup
    with one plateau matters quantitatively: the envelope's mass sets
    the scale of the radial solution part at late times, and a bloated
    envelope drowns the angular signal in the floating-point granularity
    of the radial part long before the mathematics says it should.

    |f| at t = 0 is taken at the small positive time 1e-6 a^2 (the
    kernel-differentiated integrals need t > 0); a base bump spanning
    the whole support keeps the profile strictly positive inside
    [0, a + margin], and the pointwise domination check on a dense grid
    is the binding contract.  The peak amplitude always respects the
    (1 + margin) * sup |f| floor.
    """
    if not margin > 0.0:
        raise ValueError(f"margin must be positive, got {margin}")
    a = v0.a
    radius = a + margin
    eps = config.INITIAL_SLICE_FRACTION * a * a
    grid = np.linspace(1e-3 * a, radius, 6 * _SCAN_POINTS)
    target = 1.5 * np.array([abs(f_level(v0, float(s), eps)) for s in grid])
    # narrower layers than this would outrun the radial quadrature caps
    width_floor = radius / 24.0

    layers: list[tuple[float, float, float]] = []

    def envelope(r: NDArray) -> NDArray:
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for amp, center, width in layers:
            out = out + amp * _bump((r - center) / width)
        return out

    # base layer: low, spanning the full support, so psi > 0 inside
    base_amp = 1e-3 * float(np.max(target))
    layers.append((base_amp, 0.0, radius))

    for _ in range(12):
        deficit = target - envelope(grid)
        if np.all(deficit <= 0.0):
            break
        peak = float(np.max(deficit))
        hot = deficit > 0.05 * peak
        idx = int(np.argmax(deficit))
        lo = idx
        while lo > 0 and hot[lo - 1]:
            lo -= 1
        hi = idx
        while hi < grid.size - 1 and hot[hi + 1]:
            hi += 1
        center = 0.5 * (grid[lo] + grid[hi])
        width = max(1.6 * 0.5 * (grid[hi] - grid[lo]), width_floor)
        # keep each bump's support inside [0, radius]: a tail crossing
        # the origin would break smoothness of psi(|x|) at x = 0, and
        # one past the edge would break the support contract
        if center - width < 0.0:
            width = max(width, center + width)
            center = 0.0
        if center + width > radius:
            width = radius - center
        run = slice(lo, hi + 1)
        shape = _bump((grid[run] - center) / width)
        ok = shape > 0.0
        if not np.any(ok):
            raise StructureError(
                "deficit region escapes every admissible bump support",
                trace=[("center", center), ("width", width)])
        amp = float(np.max(deficit[run][ok] / shape[ok]))
        layers.append((amp, center, width))
    else:
        raise StructureError(
            "radial envelope failed to dominate |f| after 12 layers",
            trace=[("layers", len(layers)),
                   ("deficit", float(np.max(target - envelope(grid))))])

    # amplitude floor from the construction contract
    sup_f = float(np.max(target)) / 1.5
    psi_grid = envelope(grid)
    amplitude = float(np.max(psi_grid))
    needed = (1.0 + margin) * sup_f
    if amplitude < needed:
        scale = needed / amplitude
        layers = [(amp * scale, c, w) for amp, c, w in layers]
        amplitude = needed

    min_width = min(w for _, _, w in layers)

    def radial_profile(r: NDArray) -> NDArray:
        return envelope(r)

    def evaluate(pts: NDArray) -> NDArray:
        pts = np.asarray(pts, dtype=float)
        return envelope(np.sqrt(np.sum(pts * pts, axis=-1)))

    return InitialDataND(
        evaluate=evaluate,
        dimension=3,
        support_radius=radius,
        sup_bound=amplitude,
        radial=True,
        radial_profile=radial_profile,
        feature=min_width,
    )


def eval_counterexample(v0: MollifierProfile, psi: InitialDataND,
                        x, t: float) -> float:
    """The solution value: radial part plus f(|x|, t) x1/|x|.

    At the origin the angular term vanishes (f is odd under the even
    extension of w/r, so f(r) -> 0 linearly while x1/|x| stays bounded).
    """
    if not t > 0.0:
        raise ValueError(f"time must be positive, got {t}")
    pt = np.asarray(x, dtype=float)
    if pt.shape != (3,):
        raise ValueError("x must be a point in R^3")
    r = float(np.linalg.norm(pt))
    rad = solve_radial_3d(psi, r, t)
    if r == 0.0:
        return rad
    return rad + f_level(v0, r, t) * (pt[0] / r)


def counterexample_sweep(a: float, t_grid: Sequence[float],
                         tol: float = config.ROOT_TOL
                         ) -> list[LevelSphereRecord]:
    """Level-sphere records across a time grid, invariants enforced.

    Requires every time beyond 4 a^2 / 5, the regime where the envelope
    bounds hold.  Each record gets the sphere spread at the level radius,
    the spread at the off-level radius r + 0.05 sqrt(t), and the worst
    finite-difference heat residual at a few sampled points.
    """
    if not a > 0.0:
        raise ValueError(f"support half-width must be positive, got {a}")
    t_grid = [float(t) for t in t_grid]
    floor = 4.0 * a * a / 5.0
    bad = [t for t in t_grid if not t > floor]
    if bad:
        raise ValueError(f"times {bad} not beyond the envelope floor {floor}")

    v0 = build_mollifier(a)
    psi = build_psi(v0, 0.5 * a)
    directions = [s.point for s in sphere_boundary(1.0, config.BOUNDARY_SAMPLES)]

    records = []
    for t in t_grid:
        try:
            rec = find_level_radius(v0, t, tol)
            off = rec.r + 0.05 * math.sqrt(t)
            level_vals = [eval_counterexample(v0, psi, rec.r * d, t)
                          for d in directions]
            off_vals = [eval_counterexample(v0, psi, off * d, t)
                        for d in directions]
            spread = max(level_vals) - min(level_vals)
            gap = max(off_vals) - min(off_vals)

            u = lambda p, s: eval_counterexample(v0, psi, p, s)
            resid = 0.0
            for d in directions[:: len(directions) // 3][:3]:
                for rho in (rec.r, off):
                    resid = max(resid, abs(fd_heat_residual(
                        u, rho * d, t,
                        h=config.fd_space_step(t), dt=config.fd_time_step(t))))

            scale = max(max(abs(v) for v in level_vals),
                        max(abs(v) for v in off_vals))
            rec = replace(rec, sphere_spread=spread, nonradial_gap=gap,
                          heat_residual=resid, u_scale=scale)
            rec.check_invariants()
            if not gap >= 1e4 * spread:
                raise StructureError(
                    f"off-level spread {gap} fails to dominate the "
                    f"level-sphere spread {spread}",
                    trace=[("t", t)])
        except StructureError as exc:
            raise StructureError(f"t={t}: {exc.args[0]}",
                                 trace=exc.trace) from exc
        records.append(rec)

    radii = [rec.r for rec in records]
    if sorted(t_grid) == t_grid and radii != sorted(radii):
        raise StructureError("level radius fails to grow along the grid",
                             trace=[("radii", radii)])
    return records


def find_similarity_time(v0: MollifierProfile, lo: float = 1.0,
                         hi: float = 20.0, tol: float = 1e-8) -> float:
    """Time where the level radius equals the time itself.

    This is the scaling at which the level sphere is the boundary of the
    unit ball blown up by exactly t, so a linear-in-t dilation family
    passes through it.
    """
    def gap(t: float) -> float:
        return find_level_radius(v0, t, 1e-10).r - t

    g_lo, g_hi = gap(lo), gap(hi)
    bracket = Bracket(lo, hi, g_lo, g_hi)
    return _refine_root(gap, bracket, tol)[0]
