"""Potential families, admissibility checks, thresholds and constants.

Frozen expected values for a = 1/4, band fractions (0.5, 1.5):
  epsilon* = (sqrt(31) - 5) / 24     largest threshold keeping F'' in band
  C1 = 13/24                         = -2 min F'' on [-1, 1] (at u = 5/12)
  kappa = sqrt(1/8) / 2              lower-bound coefficient
  gamma = 1/12                       = 2 beta1^2 / beta2
  K = 31/24                          = B^2/2 + F(-1)
  C2 = 187/288                       = C1 B^2 + gamma K
  T0 = eps / 5                       = eps / (2 sup |F'|), sup at u = -1
"""

import math

import numpy as np
import pytest
from scipy.special import erfcinv

from frontlab.potentials import (
    cubic_potential,
    derive_constants,
    heat_kernel_tail,
    make_potential,
    select_epsilon,
    validate_assumptions,
)

EPS_EXACT = (math.sqrt(31.0) - 5.0) / 24.0


def test_cubic_values():
    P = cubic_potential(0.25)
    assert P.f(0.0) == 0.0
    assert np.isclose(float(P.f(1.0)), -(1.0 - 0.5) / 12.0, atol=1e-15)
    assert np.isclose(P.well_depth, 1.0 / 24.0, atol=1e-15)
    for root in (0.0, 0.25, 1.0):
        assert abs(float(P.df(root))) < 1e-15
    assert np.isclose(P.origin_curvature, 0.25, atol=1e-15)
    assert np.isclose(float(P.d2f(1.0)), 0.75, atol=1e-15)


def test_cubic_derivatives_consistent():
    P = cubic_potential(0.3)
    u = np.linspace(-1.0, 1.5, 2001)
    du = u[1] - u[0]
    fd = np.gradient(np.asarray(P.f(u)), du, edge_order=2)
    assert np.max(np.abs(fd - np.asarray(P.df(u)))) < 5e-6
    fd2 = np.gradient(np.asarray(P.df(u)), du, edge_order=2)
    assert np.max(np.abs(fd2 - np.asarray(P.d2f(u)))) < 5e-6


@pytest.mark.parametrize("a", [-0.1, 0.0, 0.5, 0.6])
def test_cubic_rejects_bad_asymmetry(a):
    with pytest.raises(ValueError):
        cubic_potential(a)


def test_make_potential_dispatch():
    P = make_potential("cubic", a=0.25)
    assert P.params["a"] == 0.25
    with pytest.raises(ValueError, match="unknown potential family"):
        make_potential("quartic")


@pytest.mark.parametrize("a", [0.1, 0.25, 0.4])
def test_assumptions_pass(a):
    report = validate_assumptions(cubic_potential(a))
    assert report.passed
    assert report.coercive_ok and report.origin_ok and report.invaded_ok
    assert not report.spurious_critical_points


def test_select_epsilon_matches_exact_root():
    # F''(u) = 3u^2 - 2(1+a)u + a stays in [a/2, 3a/2] for |u| <= 2 eps;
    # at a = 1/4 the binding constraint is 3u^2 - 2.5u + 0.25 >= 0.125 at
    # u = 2 eps, whose positive root gives eps* = (sqrt(31) - 5) / 24.
    band = select_epsilon(cubic_potential(0.25))
    assert band.epsilon == pytest.approx(EPS_EXACT, abs=1e-7)
    assert band.epsilon <= EPS_EXACT
    assert band.curv_lo == pytest.approx(0.125, abs=1e-15)
    assert band.curv_hi == pytest.approx(0.375, abs=1e-15)


def test_select_epsilon_band_holds_on_sample():
    P = cubic_potential(0.25)
    band = select_epsilon(P)
    u = np.linspace(-2.0 * band.epsilon, 2.0 * band.epsilon, 4001)
    d2 = np.asarray(P.d2f(u))
    assert d2.min() >= band.curv_lo - 1e-12
    assert d2.max() <= band.curv_hi + 1e-12


def test_derived_constants_closed_forms():
    P = cubic_potential(0.25)
    band = select_epsilon(P)
    consts = derive_constants(P, band)
    eps = band.epsilon
    assert consts.amplitude_bound == 1.0
    assert consts.diss_growth == pytest.approx(13.0 / 24.0, rel=1e-6)
    assert consts.lower_coeff == pytest.approx(math.sqrt(0.125) / 2.0, rel=1e-12)
    assert consts.decay_rate == pytest.approx(1.0 / 12.0, rel=1e-12)
    assert consts.density_bound == pytest.approx(31.0 / 24.0, rel=1e-6)
    expected_c2 = consts.diss_growth + consts.decay_rate * consts.density_bound
    assert consts.source_coeff == pytest.approx(expected_c2, rel=1e-12)
    assert consts.source_coeff == pytest.approx(187.0 / 288.0, rel=1e-5)
    assert consts.front_window == pytest.approx(eps / 5.0, rel=1e-6)
    expected_offset = math.sqrt(4.0 * consts.front_window) * float(erfcinv(eps))
    assert consts.front_offset == pytest.approx(expected_offset, rel=1e-9)


def test_diss_growth_bounds_curvature():
    # the constant is a sampled supremum; allow for the sampling resolution
    P = cubic_potential(0.25)
    consts = derive_constants(P, select_epsilon(P))
    u = np.linspace(-1.0, 1.0, 10001)
    assert np.min(np.asarray(P.d2f(u))) >= -consts.diss_growth / 2.0 - 1e-6


def test_heat_kernel_tail():
    assert heat_kernel_tail(0.0) == pytest.approx(1.0, abs=1e-15)
    assert heat_kernel_tail(1.0) == pytest.approx(math.erfc(1.0), rel=1e-12)
    assert heat_kernel_tail(30.0) >= 0.0
