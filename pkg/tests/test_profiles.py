"""Initial-data containers and the stock profiles."""

import math

import numpy as np
import pytest

from heatsym.profiles import (
    InitialDataND,
    InitialProfile1D,
    bump_1d,
    difference_profile,
    offset_bump_nd,
    perturbed_bump_nd,
    radial_bump_nd,
    truncated_gaussian_1d,
    truncated_gaussian_nd,
)


def test_bump_1d_shape():
    g = bump_1d(0.0, 1.0, 2.0)
    assert g.even
    assert g.support == 1.0
    assert g.sup_bound == 2.0
    vals = g.evaluate(np.array([0.0, 0.5, -0.5, 1.0, 1.5, -3.0]))
    assert vals[0] == 2.0  # normalized so the center hits the amplitude
    assert vals[1] == vals[2]
    assert vals[3] == 0.0 and vals[4] == 0.0 and vals[5] == 0.0
    g.validate()


def test_bump_1d_off_center_is_not_even():
    g = bump_1d(0.3, 1.0)
    assert not g.even
    assert g.support == pytest.approx(1.3)
    g.validate()


def test_bump_1d_rejects_bad_parameters():
    with pytest.raises(ValueError):
        bump_1d(0.0, -1.0)
    with pytest.raises(ValueError):
        bump_1d(0.0, 1.0, 0.0)


def test_profile_validate_catches_wrong_evenness_claim():
    shifted = bump_1d(0.3, 1.0)
    lying = InitialProfile1D(
        evaluate=shifted.evaluate,
        support=shifted.support,
        sup_bound=shifted.sup_bound,
        even=True,
    )
    with pytest.raises(ValueError):
        lying.validate()


def test_profile_validate_catches_sup_violation():
    g = bump_1d(0.0, 1.0, 2.0)
    lying = InitialProfile1D(evaluate=g.evaluate, support=1.0, sup_bound=1.0)
    with pytest.raises(ValueError):
        lying.validate()


def test_truncated_gaussian_1d():
    s0 = 0.8
    g = truncated_gaussian_1d(s0)
    assert g.even
    assert g.support == pytest.approx(math.sqrt(-4.0 * s0 * math.log(1e-15)))
    assert g.evaluate(np.array([0.0]))[0] == 1.0
    # cut is sharp: nothing outside, the full Gaussian inside
    inside = 0.9 * g.support
    assert g.evaluate(np.array([inside]))[0] == pytest.approx(
        math.exp(-inside * inside / (4.0 * s0)), rel=1e-15)
    assert g.evaluate(np.array([g.support * 1.01]))[0] == 0.0
    with pytest.raises(ValueError):
        truncated_gaussian_1d(0.0)


def test_difference_profile_is_the_odd_part():
    g = bump_1d(0.4, 0.9)
    d = difference_profile(g)
    ys = np.array([-1.2, -0.3, 0.1, 0.8])
    expect = g.evaluate(ys) - g.evaluate(-ys)
    assert np.array_equal(d.evaluate(ys), expect)
    assert not d.even
    assert d.sup_bound == 2.0 * g.sup_bound


def test_difference_profile_of_even_data_vanishes_exactly():
    d = difference_profile(bump_1d())
    assert np.all(d.evaluate(np.linspace(-1.0, 1.0, 101)) == 0.0)


def test_radial_bump_nd_consistency():
    g = radial_bump_nd(3, 1.0)
    assert g.radial and g.dimension == 3
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(20, 3)) * 0.4
    r = np.linalg.norm(pts, axis=1)
    assert np.allclose(g.evaluate(pts), g.radial_profile(r), rtol=0, atol=0)


def test_offset_bump_nd_support():
    center = np.array([0.35, 0.0, 0.0])
    g = offset_bump_nd(center, 0.4)
    assert not g.radial
    assert g.support_radius == pytest.approx(0.75)
    assert g.evaluate(center[None, :])[0] == 1.0
    far = np.array([[0.8, 0.0, 0.0]])
    assert g.evaluate(far)[0] == 0.0


def test_perturbed_bump_nd_linear_in_eps():
    base = perturbed_bump_nd(0.0)
    assert base.radial
    x = np.array([[0.45, 0.1, -0.05]])
    d2 = perturbed_bump_nd(1e-2).evaluate(x)[0] - base.evaluate(x)[0]
    d3 = perturbed_bump_nd(1e-3).evaluate(x)[0] - base.evaluate(x)[0]
    assert d2 / d3 == pytest.approx(10.0, rel=1e-12)


def test_truncated_gaussian_nd_matches_1d_profile():
    g = truncated_gaussian_nd(3, 0.5)
    prof = truncated_gaussian_1d(0.5)
    assert g.radial
    assert g.support_radius == prof.support
    r = np.array([0.0, 0.7, 2.0])
    assert np.array_equal(g.radial_profile(r), prof.evaluate(r))


def test_nd_container_validation():
    with pytest.raises(ValueError):
        InitialDataND(evaluate=lambda p: p[..., 0], dimension=4,
                      support_radius=1.0, sup_bound=1.0)
    with pytest.raises(ValueError):
        InitialDataND(evaluate=lambda p: p[..., 0], dimension=3,
                      support_radius=1.0, sup_bound=1.0, radial=True)
    with pytest.raises(ValueError):
        InitialDataND(evaluate=lambda p: p[..., 0], dimension=3,
                      support_radius=1.0, sup_bound=1.0, quad_panel=0.0)
