"""Travelling waves by shooting, checked against cubic closed forms.

For F'(u) = u(u - 1)(u - a) the exact wave is h(y) = 1 / (1 + e^{y k}),
k = 1/sqrt(2), with speed c* = (1 - 2a) k.  Weighted integrals of the
exact wave reduce to Beta functions: with q = c / k,

  integral e^{cy} h^m dy        = Gamma(m - q) Gamma(q) / (k Gamma(m))
  I(c) = integral e^{cy} h'^2   = (k/6) (1 - q^2) pi q / sin(pi q)

and the weighted energy of the wave satisfies c E_c[h] = (c - c*) I(c),
so E_{c*}[h] = 0.  These oracles are evaluated here with math.gamma,
independently of the package code, and convergence needs q < 2.
"""

import math

import numpy as np
from scipy.integrate import trapezoid
import pytest

from frontlab.energetics import energy_core
from frontlab.potentials import cubic_potential
from frontlab.wave import (
    EXHAUSTED,
    OVERSHOOT,
    UNDERSHOOT,
    decay_rates,
    find_wave_speed,
    speed_identity_check,
    normalize_profile,
    shoot,
)

K = 1.0 / math.sqrt(2.0)


def exact_speed(a):
    return (1.0 - 2.0 * a) * K


def exact_profile(y):
    return 1.0 / (1.0 + np.exp(np.asarray(y) * K))


def grad_integral_oracle(c):
    q = c / K
    return (K / 6.0) * (1.0 - q * q) * math.pi * q / math.sin(math.pi * q)


def energy_oracle(a, c):
    q = c / K
    potential_part = (math.gamma(q) / K) * (
        math.gamma(4.0 - q) / 24.0
        - (1.0 + a) / 6.0 * math.gamma(3.0 - q)
        + a / 2.0 * math.gamma(2.0 - q)
    )
    return 0.5 * grad_integral_oracle(c) + potential_part


# frozen oracle values, a = 1/4
ENERGY_FROZEN = {0.2: -0.095298526, 0.3: -0.023659754, 0.45: 0.033033688}


@pytest.mark.parametrize("a", [0.1, 0.25, 0.4])
def test_speed_and_profile_match_closed_form(a):
    P = cubic_potential(a)
    w = find_wave_speed(P)
    assert w.c_star == pytest.approx(exact_speed(a), rel=1e-8)
    z = np.linspace(-20.0, 20.0, 4001)
    assert np.max(np.abs(w.eval(z) - exact_profile(z))) < 5e-7
    assert w.residual < 2e-4


def test_decay_rates_are_plus_minus_k(wave, potential):
    # both linearizations of the cubic give |rate| = 1/sqrt(2) for every a
    r = decay_rates(potential, wave.c_star)
    assert r.ahead == pytest.approx(-K, rel=1e-9)
    assert r.behind == pytest.approx(K, rel=1e-9)
    r = decay_rates(cubic_potential(0.1), exact_speed(0.1))
    assert r.ahead == pytest.approx(-K, rel=1e-12)
    assert r.behind == pytest.approx(K, rel=1e-12)


def test_profile_tail_extension(wave):
    y_hi = wave.y[-1]
    vals = wave.eval([y_hi + 5.0, y_hi + 6.0])
    assert 0.0 < vals[1] < vals[0] < 1e-9
    assert vals[1] / vals[0] == pytest.approx(math.exp(wave.rates.ahead), rel=1e-6)
    slope = wave.eval_slope([y_hi + 5.0])[0]
    assert slope / vals[0] == pytest.approx(wave.rates.ahead, rel=1e-6)
    y_lo = wave.y[0]
    left = wave.eval([y_lo - 5.0])[0]
    assert 0.0 < 1.0 - left < 1e-9


def test_shoot_classification():
    P = cubic_potential(0.25)
    assert shoot(P, 0.30).outcome == UNDERSHOOT
    assert shoot(P, 0.40).outcome == OVERSHOOT
    # either side of the connection at a resolvable distance
    assert shoot(P, exact_speed(0.25) - 1e-4).outcome == UNDERSHOOT
    assert shoot(P, exact_speed(0.25) + 1e-4).outcome == OVERSHOOT
    # at machine-precision distance the classifier may land either way,
    # but it must still terminate with a recognized outcome
    near = shoot(P, exact_speed(0.25) - 1e-13)
    assert near.outcome in (UNDERSHOOT, OVERSHOOT, EXHAUSTED)


def test_shoot_detects_overdamped_capture():
    # for c^2 > 4 |F''(a)| the interior rest state is a stable node and the
    # orbit slides into it without the slope ever vanishing
    P = cubic_potential(0.4)
    res = shoot(P, 1.4)
    assert res.outcome == OVERSHOOT


def test_find_wave_speed_rejects_bad_bracket():
    P = cubic_potential(0.25)
    with pytest.raises(ValueError, match="bracket"):
        find_wave_speed(P, c_lo=0.5, c_hi=1.0)


def test_normalize_profile(wave, band):
    eps = band.epsilon
    wn = normalize_profile(wave, band)
    assert float(wn.eval(0.0)[0]) == pytest.approx(eps, abs=1e-12)
    y_eps = math.sqrt(2.0) * math.log((1.0 - eps) / eps)
    assert abs(wn.shift - wave.shift) == pytest.approx(y_eps, rel=1e-6)
    assert wn.c_star == wave.c_star


@pytest.mark.parametrize("c", [0.2, 0.3, 0.45])
def test_energy_matches_gamma_oracle(wave, potential, c):
    measured = energy_core(wave.y, wave.h, c, 0.0, potential, dv=wave.hp)
    assert measured == pytest.approx(energy_oracle(0.25, c), rel=1e-7, abs=1e-9)
    assert measured == pytest.approx(ENERGY_FROZEN[c], abs=1e-6)


def test_energy_vanishes_at_cstar(wave, potential):
    measured = energy_core(wave.y, wave.h, wave.c_star, 0.0, potential, dv=wave.hp)
    assert abs(measured) < 1e-6
    assert abs(energy_oracle(0.25, exact_speed(0.25))) < 1e-12


@pytest.mark.parametrize("c", [0.2, 0.3, 0.45])
def test_frame_energy_identity(wave, potential, c):
    lhs, rhs = speed_identity_check(potential, wave, c)
    assert lhs == pytest.approx(rhs, rel=1e-8)
    # both sides against the closed form (c - c*) I(c)
    target = (c - wave.c_star) * grad_integral_oracle(c)
    assert rhs == pytest.approx(target, rel=1e-7)


def test_gradient_integral_oracle(wave):
    c = 0.3
    measured = trapezoid(np.exp(c * wave.y) * wave.hp**2, wave.y)
    assert measured == pytest.approx(grad_integral_oracle(c), rel=1e-8)


def test_as_field_round_trip(wave):
    f = wave.as_field()
    assert f.values.shape == wave.h.shape
    assert np.array_equal(f.values, wave.h)
    x = f.grid.coords()
    assert x[0] == pytest.approx(wave.y[0])
    assert x[-1] == pytest.approx(wave.y[-1])
