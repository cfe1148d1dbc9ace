"""End-to-end pass/fail checks over the whole toolkit.

Each criterion is a self-contained measurement with a fixed tolerance and
a wall-clock budget.  ``run_all`` executes the suite in order and returns
one :class:`CriterionResult` per criterion; nothing here raises on a
failed check, so a CLI or test harness can always print the full matrix.

The tolerance scale knob exists to demonstrate that the checks actually
bind: upper-bound tolerances are multiplied by ``tol_scale`` and
lower-bound requirements divided by it, so a scale of 1e-4 tightens
everything four orders of magnitude and a known subset of criteria must
start failing.  Budgets are never scaled.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import config, counterexample, harmonics, heat, numerics, profiles, symmetry

__all__ = [
    "CriterionResult",
    "run_all",
    "run_criterion",
    "suite_listing",
]


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of one acceptance criterion."""

    index: int
    title: str
    passed: bool
    detail: str
    elapsed: float
    budget: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"criterion {self.index} {status} ({self.elapsed:5.1f}s of "
            f"{self.budget:g}s) {self.title}: {self.detail}"
        )


@lru_cache(maxsize=1)
def _canonical_records():
    """The shared four-decade sweep used by criteria 1 and 2."""
    return tuple(counterexample.counterexample_sweep(
        1.0, (10.0, 100.0, 1000.0, 10000.0)))


@lru_cache(maxsize=1)
def _canonical_data():
    v0 = counterexample.build_mollifier(1.0)
    psi = counterexample.build_psi(v0, 0.5)
    return v0, psi


def _criterion_1(ts: float) -> tuple[bool, str]:
    # Level radius sits inside the predicted window at every decade and
    # the refined root bracket is tight.
    records = _canonical_records()
    width_bar = 1e-12 * ts
    ok = True
    worst_width = 0.0
    for rec in records:
        ok = ok and rec.lower <= rec.r <= rec.upper
        ok = ok and rec.r3 < rec.r < rec.r4
        ok = ok and rec.bracket_width <= width_bar
        worst_width = max(worst_width, rec.bracket_width)
    radii = ", ".join(f"{rec.r:.4f}" for rec in records)
    return ok, (
        f"radii [{radii}] all inside bounds, worst bracket width "
        f"{worst_width:.2e} vs {width_bar:.1e}"
    )


def _criterion_2(ts: float) -> tuple[bool, str]:
    # Near-constancy on the level sphere, measured against the genuine
    # variation a short step outward.
    records = _canonical_records()
    bar = 1e-4 * ts
    worst = 0.0
    for rec in records:
        worst = max(worst, rec.sphere_spread / rec.nonradial_gap)
    return worst <= bar, (
        f"worst spread/offset-gap ratio {worst:.2e} vs {bar:.1e}"
    )


def _criterion_3(ts: float) -> tuple[bool, str]:
    # Finite-difference heat residual at seeded sample points, plus the
    # fourth-order step-halving check at the worst sample.
    v0, psi = _canonical_data()

    def u(x, t):
        return counterexample.eval_counterexample(v0, psi, x, t)

    rng = np.random.default_rng(config.DEFAULT_SEED)
    samples = []
    for _ in range(20):
        t = 10.0 ** rng.uniform(0.0, 2.0)
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        x = rng.uniform(0.3, 2.5) * math.sqrt(t) * d
        samples.append((x, t))
    sup = max(abs(u(x, t)) for x, t in samples)
    sup = max(sup, 1e-300)
    resids = [numerics.fd_heat_residual(u, x, t) for x, t in samples]
    worst_idx = int(np.argmax(resids))
    worst = resids[worst_idx]
    ok_resid = worst <= 1e-6 * ts * sup

    x0, t0 = samples[worst_idx]
    h0 = config.fd_space_step(t0)
    halved = numerics.fd_heat_residual(u, x0, t0, h=0.5 * h0)
    ratio = worst / max(halved, 1e-300)
    ok_order = ratio >= 8.0 / ts
    return ok_resid and ok_order, (
        f"worst residual {worst:.2e} vs {1e-6 * ts * sup:.1e}, "
        f"halving ratio {ratio:.1f} vs {8.0 / ts:g}"
    )


def _criterion_4(ts: float) -> tuple[bool, str]:
    # Sphere convolution eigenvalues: closed form vs direct integral vs
    # the eigenrelation itself, plus two hand-checked values.
    worst_rel = 0.0
    worst_resid = 0.0
    for k in range(7):
        for L in (0.5, 1.0, 2.0):
            res = harmonics.funk_hecke_eigenvalue(k, 3, L)
            rel = abs(res.lambda_closed - res.lambda_direct)
            rel /= abs(res.lambda_closed)
            worst_rel = max(worst_rel, rel)
            worst_resid = max(worst_resid, res.eigen_residual)
    ok = worst_resid <= 1e-8 * ts and worst_rel <= 1e-10 * ts

    lam0 = harmonics.funk_hecke_lambda_closed(0, 3, 1.0)
    lam1 = harmonics.funk_hecke_lambda_closed(1, 3, 1.0)
    ref0 = 2.0 * math.pi * (math.e - 1.0 / math.e)
    ref1 = 4.0 * math.pi / math.e
    spot = max(abs(lam0 - ref0) / ref0, abs(lam1 - ref1) / ref1)
    ok = ok and spot <= 1e-12 * ts
    return ok, (
        f"eigen residual {worst_resid:.2e} vs {1e-8 * ts:.1e}, "
        f"closed-vs-direct {worst_rel:.2e} vs {1e-10 * ts:.1e}, "
        f"spot values {spot:.2e} vs {1e-12 * ts:.1e}"
    )


def _criterion_5(ts: float) -> tuple[bool, str]:
    # Moving-point values of an even datum agree across the reflection
    # for doubling times; a shifted datum trips the moment detector.
    even = profiles.bump_1d()
    b = 2.0
    worst_gap = 0.0
    for n in range(21):
        t = float(2.0 ** n)
        gap = abs(heat.solve_1d(even, t * b, t) - heat.solve_1d(even, -t * b, t))
        worst_gap = max(worst_gap, gap)
    gap_bar = 1e-12 * ts * even.sup_bound
    ok_even = worst_gap <= gap_bar

    shifted = profiles.difference_profile(profiles.bump_1d(center=0.3))
    best_ratio = 0.0
    for n in range(11):
        t = float(2.0 ** n)
        val, err = symmetry.moment_1d(shifted, b, t, with_estimate=True)
        best_ratio = max(best_ratio, abs(val) / max(err, 1e-300))
    ok_detect = best_ratio >= 100.0 / ts
    return ok_even and ok_detect, (
        f"even gap {worst_gap:.2e} vs {gap_bar:.1e}, detector ratio "
        f"{best_ratio:.2e} vs {100.0 / ts:g}"
    )


def _criterion_6(ts: float) -> tuple[bool, str]:
    # Rotation defect through harmonic projections: silent for radial
    # data under every cataloged coordinate rotation, loud and linear
    # for a perturbed datum.
    radial = profiles.radial_bump_nd(3, 1.0)
    rotations = symmetry.rotation_catalog(3)[:6]
    r = 0.35

    def top_coefficient(g, mat):
        def h(pts):
            return g.evaluate(r * pts) - g.evaluate(r * (pts @ mat.T))

        coeffs = symmetry.harmonic_coefficients(h)
        return max(abs(c) for c in coeffs.values())

    silent = max(top_coefficient(radial, mat) for mat in rotations)
    silent_bar = 1e-10 * ts * radial.sup_bound
    ok_silent = silent <= silent_bar

    def loudest(eps):
        g = profiles.perturbed_bump_nd(eps)
        return g, max(top_coefficient(g, mat) for mat in rotations)

    g2, loud2 = loudest(1e-2)
    _, loud3 = loudest(1e-3)
    loud_bar = 1e-4 / ts * g2.sup_bound
    ok_loud = loud2 >= loud_bar
    ratio = loud2 / max(loud3, 1e-300)
    ok_linear = 9.0 <= ratio <= 11.0
    return ok_silent and ok_loud and ok_linear, (
        f"radial coefficients {silent:.2e} vs {silent_bar:.1e}, perturbed "
        f"{loud2:.2e} vs {loud_bar:.1e}, eps-linearity ratio {ratio:.3f}"
    )


def _criterion_7(ts: float) -> tuple[bool, str]:
    # Boundary normals of the round shapes line up with the radius to
    # rounding; the ellipse visibly does not.
    aligned_bar = 1e-12 * ts
    worst_align = 0.0
    worst_spread = 0.0
    for boundary in (symmetry.circle_boundary(2.0), symmetry.sphere_boundary(1.5)):
        res = symmetry.normal_alignment(boundary)
        worst_align = max(worst_align, res.max_misalignment)
        worst_spread = max(worst_spread, res.radius_spread)
    ok_round = worst_align <= aligned_bar and worst_spread <= aligned_bar

    ellipse = symmetry.normal_alignment(symmetry.ellipse_boundary(2.0, 1.0))
    skew_bar = 0.3 / ts
    ok_skew = ellipse.max_misalignment >= skew_bar
    return ok_round and ok_skew, (
        f"round misalignment {worst_align:.2e} and spread {worst_spread:.2e} "
        f"vs {aligned_bar:.1e}, ellipse {ellipse.max_misalignment:.2f} vs "
        f"{skew_bar:g}"
    )


def _criterion_8(ts: float) -> tuple[bool, str]:
    # Truncated-Gaussian data against the closed-form evolution, and the
    # radial reduction against the full-dimensional quadrature.
    s0 = 0.5
    g1 = profiles.truncated_gaussian_1d(s0)
    g3 = profiles.truncated_gaussian_nd(3, s0)
    rng = np.random.default_rng(config.DEFAULT_SEED + 1)
    bar = 1e-10 * ts
    worst1 = worst3 = worst_reduce = 0.0
    for _ in range(10):
        # 1-D draws reach into short times where the kernel is narrow;
        # the 3-D draws stay at moderate times so the tensor grids fit
        # the shared cache and the whole check stays inside its budget.
        t1 = 10.0 ** rng.uniform(math.log10(0.3), math.log10(3.0))
        x1 = rng.uniform(-2.0, 2.0)
        exact1 = math.sqrt(s0 / (s0 + t1)) * math.exp(
            -x1 * x1 / (4.0 * (s0 + t1)))
        worst1 = max(worst1, abs(heat.solve_1d(g1, x1, t1) - exact1) / exact1)

        t3 = 10.0 ** rng.uniform(0.0, math.log10(8.0))
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        radius = rng.uniform(0.1, 2.0)
        exact3 = (s0 / (s0 + t3)) ** 1.5 * math.exp(
            -radius * radius / (4.0 * (s0 + t3)))
        u_rad = heat.solve_radial_3d(g3, radius, t3)
        u_full = heat.solve_nd(g3, radius * d, t3)
        worst3 = max(worst3, abs(u_rad - exact3) / exact3)
        worst_reduce = max(worst_reduce, abs(u_rad - u_full) / exact3)
    ok = worst1 <= bar and worst3 <= bar and worst_reduce <= bar
    return ok, (
        f"1-D closed form {worst1:.2e}, 3-D closed form {worst3:.2e}, "
        f"radial vs direct {worst_reduce:.2e}, all vs {bar:.1e}"
    )


_REGISTRY = (
    (1, "level radius inside predicted bounds", 20.0, _criterion_1),
    (2, "level-sphere constancy vs off-level variation", 60.0, _criterion_2),
    (3, "interior heat-equation residual", 30.0, _criterion_3),
    (4, "sphere convolution eigenvalues", 10.0, _criterion_4),
    (5, "one-dimensional parity detector", 10.0, _criterion_5),
    (6, "rotation-defect harmonic detector", 60.0, _criterion_6),
    (7, "boundary normal alignment", 1.0, _criterion_7),
    (8, "gaussian closed-form agreement", 10.0, _criterion_8),
)


def suite_listing() -> list[tuple[int, str, float]]:
    """(index, title, budget seconds) for every criterion, in run order."""
    return [(idx, title, budget) for idx, title, budget, _ in _REGISTRY]


def run_criterion(index: int, tol_scale: float = 1.0) -> CriterionResult:
    """Run one criterion by index (1 through 8)."""
    if not tol_scale > 0.0:
        raise ValueError(f"tol_scale must be positive, got {tol_scale}")
    for idx, title, budget, func in _REGISTRY:
        if idx == index:
            break
    else:
        raise ValueError(f"no criterion {index}; valid indices are 1..8")
    start = time.perf_counter()
    try:
        passed, detail = func(tol_scale)
    except Exception as exc:  # noqa: BLE001 - the matrix must always print
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if passed and elapsed > budget:
        passed = False
        detail = f"over budget ({elapsed:.1f}s > {budget:g}s); " + detail
    return CriterionResult(
        index=idx, title=title, passed=passed, detail=detail,
        elapsed=elapsed, budget=budget,
    )


def run_all(tol_scale: float = 1.0) -> list[CriterionResult]:
    """Run the full acceptance matrix in order.  Never raises on failure."""
    return [run_criterion(idx, tol_scale) for idx, _, _, _ in _REGISTRY]
