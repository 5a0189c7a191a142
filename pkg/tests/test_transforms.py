import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtf import (
    AtomConfig,
    DomainError,
    RadialProfile,
    Space,
    attraction_m,
    attraction_tf,
    fermi_radius,
    fermi_radius_curve,
    kinetic_m,
    kinetic_tf,
    l1_distance,
    make_grid,
    mass,
    repulsion_m_direct,
    repulsion_tf,
    round_trip_residual,
    transform_S,
    transform_T,
)

from conftest import ball, random_steps


def log_cube(x):
    return np.where(x < 1, (-3 * np.log(np.minimum(x, 1.0))) ** 3, 0.0)


@pytest.fixture(scope="module")
def expo():
    return RadialProfile.from_function(make_grid("log", 2048, 1e-6, 60.0), lambda r: np.exp(-r))


def test_fermi_radius_examples(gauge, expo):
    assert fermi_radius(ball(), gauge, 0.5) == 1.0
    assert fermi_radius(ball(), gauge, 1.0) == 1.0
    assert fermi_radius(ball(), gauge, 2.0) == 0.0
    assert fermi_radius(ball(), gauge, 0.0) == 1.0
    # e^{-r/3} = s at r = 1; the step profile resolves it to the local cell width
    assert fermi_radius(expo, gauge, math.exp(-1 / 3)) == pytest.approx(1.0, abs=2e-2)
    with pytest.raises(ValueError):
        fermi_radius(ball(), gauge, -1.0)


def test_fermi_radius_curve_properties(gauge, expo):
    curve = fermi_radius_curve(expo, gauge)
    s = np.linspace(0, 1.2, 400)
    r = curve(s)
    assert np.all(np.diff(r) <= 0)
    top = math.sqrt(gauge.gamma) * np.cbrt(expo.values.max())
    assert curve(top * 1.0001) == 0.0
    assert curve.support_radius == pytest.approx(60.0)
    # inverse-function property on the interior
    inside = (r > 1e-3) & (r < 30)
    np.testing.assert_allclose(np.exp(-r[inside] / 3), s[inside], rtol=0, atol=2e-2)
    # strict and non-strict versions differ only at the levels themselves
    off_level = curve.levels[:-1] + 0.5 * np.diff(curve.levels)
    np.testing.assert_array_equal(curve(off_level), curve.strict(off_level))


def test_non_monotone_input_rejected(gauge):
    p = random_steps(np.random.default_rng(0), space=Space.POSITION)
    bad = p.with_values(np.r_[0.0, 1.0, p.values[2:] * 0])
    with pytest.raises(DomainError, match="rearrange first"):
        transform_T(bad, gauge)
    with pytest.raises(DomainError, match="rearrange first"):
        fermi_radius(bad, gauge, 0.1)
    with pytest.raises(DomainError):
        transform_S(bad, gauge)  # wrong space


def test_ball_is_a_fixed_point(gauge):
    tau = transform_T(ball(), gauge)
    assert tau.space is Space.MOMENTUM
    assert l1_distance(tau, ball(Space.MOMENTUM)) == 0.0
    rho = transform_S(ball(Space.MOMENTUM), gauge)
    assert rho.space is Space.POSITION
    assert l1_distance(rho, ball()) < 1e-14
    assert round_trip_residual(ball(), gauge) < 1e-14


def test_zero_maps_to_zero(gauge):
    zero = ball().scaled(0.0)
    assert mass(transform_T(zero, gauge)) == 0.0
    assert round_trip_residual(zero, gauge) == 0.0
    assert mass(transform_S(ball(Space.MOMENTUM).scaled(0.0), gauge)) == 0.0


def test_exponential_images(gauge, expo):
    tau = transform_T(expo, gauge)
    target = RadialProfile.from_function(tau.grid, log_cube, Space.MOMENTUM)
    assert l1_distance(tau, target) / mass(target) < 1e-4
    assert mass(tau) == pytest.approx(8 * math.pi, rel=1e-9)
    rho = transform_S(RadialProfile(expo.grid, expo.values, Space.MOMENTUM), gauge)
    target = RadialProfile.from_function(rho.grid, log_cube)
    assert l1_distance(rho, target) / mass(target) < 1e-4
    assert round_trip_residual(expo, gauge) < 1e-3


def test_image_error_decreases_under_refinement(gauge):
    errors = []
    for n in (256, 512, 1024):
        g = make_grid("log", n, 1e-6, 60.0)
        tau = transform_T(RadialProfile.from_function(g, lambda r: np.exp(-r)), gauge)
        target = RadialProfile.from_function(tau.grid, log_cube, Space.MOMENTUM)
        errors.append(l1_distance(tau, target) / mass(target))
    assert errors[0] > errors[1] > errors[2]


def test_user_grid_is_evaluated_nodewise(gauge):
    out_grid = make_grid("linear", 32, 0.05, 1.6)
    tau = transform_T(ball(), gauge, out_grid)
    np.testing.assert_array_equal(tau.values, (out_grid.nodes <= 1.0).astype(float))


def test_prefactor_identity():
    # q / (2 pi)^3 * 4 pi / 3 = gamma^(-3/2) for every q
    for q in (1.0, 2.0, 5.5):
        cfg = AtomConfig(q=q)
        assert q / (2 * math.pi) ** 3 * 4 * math.pi / 3 == pytest.approx(cfg.gamma**-1.5, rel=1e-14)


def duality(rho, tau, cfg):
    return [
        (kinetic_m(tau), kinetic_tf(rho, cfg)),
        (attraction_m(tau, cfg), attraction_tf(rho, cfg)),
        (repulsion_m_direct(tau, cfg), repulsion_tf(rho)),
    ]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1.0, 2.0, 6 * math.pi**2]))
def test_T_properties(seed, q):
    cfg = AtomConfig(Z=1.3, q=q)
    rho = random_steps(np.random.default_rng(seed), decreasing=True, space=Space.POSITION)
    tau = transform_T(rho, cfg)
    assert tau.is_nonincreasing() and np.all(tau.values >= 0)
    assert mass(tau) == pytest.approx(mass(rho), rel=1e-12)
    for lhs, rhs in duality(rho, tau, cfg):
        assert lhs == pytest.approx(rhs, rel=1e-10)
    assert round_trip_residual(rho, cfg) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1.0, 2.0, 6 * math.pi**2]))
def test_S_properties(seed, q):
    cfg = AtomConfig(Z=0.7, q=q)
    tau = random_steps(np.random.default_rng(seed), decreasing=True)
    rho = transform_S(tau, cfg)
    assert rho.is_nonincreasing() and np.all(rho.values >= 0)
    assert mass(rho) == pytest.approx(mass(tau), rel=1e-12)
    for lhs, rhs in duality(rho, tau, cfg):
        assert lhs == pytest.approx(rhs, rel=1e-10)
    assert round_trip_residual(tau, cfg) < 1e-12
