"""Moment detectors, boundary geometry, and the scaled-constancy check."""

import math

import numpy as np
import pytest

from heatsym.errors import EvaluationError
from heatsym.heat import solve_1d, solve_radial_3d
from heatsym.profiles import (
    bump_1d,
    difference_profile,
    perturbed_bump_nd,
    radial_bump_nd,
)
from heatsym.symmetry import (
    BoundarySample,
    TimeSequence,
    check_scaled_boundary,
    circle_boundary,
    ellipse_boundary,
    ellipsoid_boundary,
    harmonic_coefficients,
    laplace_moment_1d,
    moment_1d,
    moment_nd,
    monotonicity_margin,
    normal_alignment,
    perturb_normals,
    rotation_catalog,
    sphere_boundary,
    spherical_moment,
)


# ---------------------------------------------------------------- 1-D moments

def test_moment_is_the_forward_solution_at_the_moving_point():
    v0 = bump_1d(0.3, 1.0)
    t, b = 4.0, 2.0
    prefactor = (4.0 * math.pi * t) ** -0.5 * math.exp(-t * b * b / 4.0)
    assert solve_1d(v0, t * b, t) == pytest.approx(
        prefactor * moment_1d(v0, b, t), rel=1e-12)


def test_even_difference_moment_is_exactly_zero():
    d = difference_profile(bump_1d())
    for t in (0.5, 2.0, 16.0):
        assert moment_1d(d, 2.0, t) == 0.0


def test_shifted_difference_moment_is_loud():
    d = difference_profile(bump_1d(0.6, 0.8))
    value, estimate = moment_1d(d, 2.0, 2.0, with_estimate=True)
    assert abs(value) > 1e3 * estimate


def test_moment_requires_support_inside_window():
    with pytest.raises(ValueError):
        moment_1d(bump_1d(0.0, 3.0), 2.0, 1.0)


def test_laplace_moment_even_difference_vanishes():
    d = difference_profile(bump_1d())
    assert laplace_moment_1d(d, 2.0, 0.7) == 0.0


def test_laplace_moment_matches_mpmath():
    mp = pytest.importorskip("mpmath").mp
    mp.dps = 30
    b, lam = 2.0, 0.7

    def g(y):
        arg = y - mp.mpf("0.3")
        if abs(arg) >= 1:
            return mp.mpf(0)
        return mp.e ** (1 - 1 / (1 - arg * arg))

    def integrand(y):
        d_pos = g(y) - g(-y)
        d_neg = g(-y) - g(y)
        return (d_pos * mp.e ** (b * y / 2)
                + d_neg * mp.e ** (-b * y / 2)) * mp.e ** (-lam * y * y)

    want = float(mp.quad(integrand, [0, mp.mpf("0.7"), mp.mpf("1.3"), b]))
    got = laplace_moment_1d(difference_profile(bump_1d(0.3, 1.0)), b, lam)
    assert got == pytest.approx(want, rel=1e-11)


# ------------------------------------------------------------------ rotations

def test_rotation_catalog_shape():
    rots = rotation_catalog(3)
    assert len(rots) == 9
    for A in rots:
        assert np.allclose(A @ A.T, np.eye(3), atol=1e-14)
        assert np.linalg.det(A) == pytest.approx(1.0, abs=1e-13)
    for A in rots[:6]:  # the coordinate rotations come first, entries 0 or +-1
        assert set(np.unique(np.abs(A))) <= {0.0, 1.0}


def test_rotation_catalog_is_seeded():
    a = rotation_catalog(3, seed=7)[8]
    b = rotation_catalog(3, seed=7)[8]
    c = rotation_catalog(3, seed=8)[8]
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


# ------------------------------------------------------- N-D defect detectors

def test_harmonic_coefficients_radial_data_silent():
    g = radial_bump_nd(3, 1.0)
    r = 0.35
    for A in rotation_catalog(3)[:6]:
        coeffs = harmonic_coefficients(
            lambda pts: g.evaluate(r * pts) - g.evaluate(r * (pts @ A.T)))
        worst = max(abs(c) for c in coeffs.values())
        assert worst <= 1e-10 * g.sup_bound


def test_harmonic_coefficients_perturbed_data_loud_and_linear():
    A = rotation_catalog(3)[4]  # quarter turn about the third axis
    r = 0.35

    def top(eps):
        g = perturbed_bump_nd(eps)
        coeffs = harmonic_coefficients(
            lambda pts: g.evaluate(r * pts) - g.evaluate(r * (pts @ A.T)))
        key = max(coeffs, key=lambda k: abs(coeffs[k]))
        return key, abs(coeffs[key])

    key2, loud2 = top(1e-2)
    _key3, loud3 = top(1e-3)
    assert loud2 >= 1e-4 * perturbed_bump_nd(1e-2).sup_bound
    # the defect is first order in the perturbation amplitude
    assert 0.1e-2 <= loud2 <= 10e-2
    assert key2 == (2, 3)
    assert loud2 / loud3 == pytest.approx(10.0, rel=1e-2)


def test_harmonic_coefficients_degree_cap():
    with pytest.raises(ValueError):
        harmonic_coefficients(lambda pts: pts[:, 0], max_degree=7)


def test_spherical_moment_radial_data():
    g = radial_bump_nd(3, 1.0)
    alpha = np.array([0.0, 0.0, 1.0])
    rots = rotation_catalog(3)
    # coordinate rotations permute and flip coordinates bitwise, so the
    # two sphere samplings coincide exactly
    assert spherical_moment(g, rots[4], 0.35, 1.0, alpha) == 0.0
    assert abs(spherical_moment(g, rots[8], 0.35, 1.0, alpha)) \
        <= 1e-14 * g.sup_bound


def test_moment_nd_perturbed_scales_linearly():
    A = rotation_catalog(3)[4]
    x = np.array([1.0, 1.0, 0.0]) / math.sqrt(2.0)
    m2 = moment_nd(perturbed_bump_nd(1e-2), A, x, 0.5)
    m3 = moment_nd(perturbed_bump_nd(1e-3), A, x, 0.5)
    assert abs(m2) > 1e-5
    assert m2 / m3 == pytest.approx(10.0, rel=1e-3)


def test_moment_nd_rejects_point_off_the_support_sphere():
    with pytest.raises(ValueError):
        moment_nd(perturbed_bump_nd(1e-2), rotation_catalog(3)[4],
                  np.array([0.5, 0.0, 0.0]), 0.5)


def test_monotonicity_margin_certifies_decay():
    g = radial_bump_nd(3, 1.0)
    samples = [(np.array([2.0, 0.3, -0.2]), 0.5), (np.array([3.0, 0.0, 0.0]), 2.0)]
    margin = monotonicity_margin(g, np.array([1.0, 0.0, 0.0]), 1.5, samples)
    assert margin < 0.0


def test_monotonicity_margin_validates_samples():
    g = radial_bump_nd(3, 1.0)
    inside = [(np.array([1.0, 0.0, 0.0]), 0.5)]  # not beyond the offset
    with pytest.raises(ValueError):
        monotonicity_margin(g, np.array([1.0, 0.0, 0.0]), 1.5, inside)


# ----------------------------------------------------------------- boundaries

def test_round_boundaries_are_aligned():
    for bd in (circle_boundary(2.0), sphere_boundary(1.5)):
        res = normal_alignment(bd)
        assert res.max_misalignment <= 1e-12
        assert res.radius_spread <= 1e-12


def test_ellipse_misaligns():
    res = normal_alignment(ellipse_boundary(2.0, 1.0))
    assert res.max_misalignment >= 0.3
    res3 = normal_alignment(ellipsoid_boundary((2.0, 1.0, 1.0)))
    assert res3.max_misalignment >= 0.3


def test_perturb_normals_stays_unit_and_is_seeded():
    base = sphere_boundary(1.0, 50)
    noisy = perturb_normals(base, 0.05)
    again = perturb_normals(base, 0.05)
    for s, s2 in zip(noisy, again):
        assert np.array_equal(s.normal, s2.normal)
        assert abs(float(np.linalg.norm(s.normal)) - 1.0) <= 1e-14
    mis = normal_alignment(noisy).max_misalignment
    assert 0.01 < mis < 0.2


def test_boundary_sample_requires_unit_normal():
    with pytest.raises(ValueError):
        BoundarySample(np.array([1.0, 0.0, 0.0]),
                       np.array([2.0, 0.0, 0.0]), ())


# ----------------------------------------------------------- time sequences

def test_time_sequence_validation():
    with pytest.raises(ValueError):
        TimeSequence(())
    with pytest.raises(ValueError):
        TimeSequence((3.0, 1.0))
    with pytest.raises(ValueError):
        TimeSequence.geometric(0.0, 2.0, 3)
    with pytest.raises(ValueError):
        TimeSequence.geometric(1.0, 1.0, 3)
    with pytest.raises(ValueError):
        TimeSequence.geometric(1.0, 2.0, 0)
    assert TimeSequence.geometric(1.0, 2.0, 4).values == (1.0, 2.0, 4.0, 8.0)


# ---------------------------------------------------------- scaled constancy

def test_scaled_constancy_radial_solution_passes():
    g = radial_bump_nd(3, 1.0)
    boundary = sphere_boundary(1.0, 40)
    times = TimeSequence.geometric(1.0, 2.0, 3)

    def u(x, t):
        return solve_radial_3d(g, float(np.linalg.norm(x)), t)

    reports = check_scaled_boundary(u, boundary, times, 1e-12,
                                    scale_factors=(0.3, 0.4, 0.5))
    assert len(reports) == 3
    for rep in reports:
        assert rep.passed
        assert rep.spread <= 1e-13 * rep.scale


def test_scaled_constancy_wraps_evaluation_failures():
    boundary = sphere_boundary(1.0, 8)
    times = TimeSequence.geometric(1.0, 2.0, 2)

    def broken(x, t):
        raise ZeroDivisionError("boom")

    with pytest.raises(EvaluationError) as err:
        check_scaled_boundary(broken, boundary, times, 1e-12)
    assert err.value.where[0] == 0
