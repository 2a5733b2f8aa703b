"""Weighted energies, anchored representation and the inequality audits."""

import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from frontlab.energetics import (
    AnchoredValue,
    TailNotDecayedError,
    audit_inequalities,
    dissipation_identity_residual,
    dissipation_weighted,
    energy_weighted,
    truncated_energy,
    weighted_tail_poincare,
)
from frontlab.evolution import Field, Grid1D
from frontlab.front import invasion_point


def test_anchored_value_reanchoring():
    v = AnchoredValue(anchor=3.0, value=-2.5, c=0.4)
    w = v.reanchored(10.0)
    assert w.anchor == 10.0
    assert w.log_abs() == pytest.approx(v.log_abs(), abs=1e-12)
    assert w.sign == v.sign == -1.0
    back = w.reanchored(3.0)
    assert back.value == pytest.approx(v.value, rel=1e-14)
    assert v.true_value() == pytest.approx(-2.5 * math.exp(1.2), rel=1e-14)


def test_anchored_value_far_translate_stays_finite():
    v = AnchoredValue(anchor=1000.0, value=-0.0236598, c=0.3)
    assert math.isfinite(v.value)
    assert v.log_abs() == pytest.approx(300.0 + math.log(0.0236598), rel=1e-12)
    # nearby reanchoring keeps the represented number; log_abs never blows up
    w = v.reanchored(990.0)
    assert math.isfinite(w.value)
    assert w.log_abs() == pytest.approx(v.log_abs(), abs=1e-12)


def test_right_tail_guard():
    g = Grid1D.from_spacing(-10.0, 10.0, 0.1)
    f = Field(g, np.full(g.n, 0.3))
    from frontlab.potentials import cubic_potential

    with pytest.raises(TailNotDecayedError):
        energy_weighted(f, 0.4, cubic_potential(0.25))


def test_energy_anchored_at_front_matches_translation_rule(wave, potential, band):
    # anchoring the wave's energy at its own invasion point multiplies the
    # raw value by e^{-c ybar}, with ybar = sqrt(2) log((1 - eps)/eps)
    c = 0.3
    f = wave.as_field()
    raw = energy_weighted(f, c, potential, anchor=0.0)
    xb = invasion_point(f, band.epsilon)
    anchored = energy_weighted(f, c, potential, anchor=xb)
    y_eps = math.sqrt(2.0) * math.log((1.0 - band.epsilon) / band.epsilon)
    assert xb == pytest.approx(y_eps, abs=5e-4)
    assert anchored.value == pytest.approx(raw.value * math.exp(-c * xb), rel=1e-9)
    assert anchored.log_abs() == pytest.approx(raw.log_abs(), abs=1e-9)


def test_dissipation_of_travelling_wave_in_own_frame(wave, potential):
    # in the comoving frame v_t = v_yy + c v_y - F'(v) vanishes on the wave
    f = wave.as_field()
    d = dissipation_weighted(f, wave.c_star, potential, anchor=0.0)
    assert abs(d.value) < 1e-4


def test_weighted_tail_poincare_exponential_example():
    # v = e^{-y} with weight e^{cy}, c = 1: grad side 1, value side 1/4
    g = Grid1D.from_spacing(0.0, 40.0, 0.01)
    y = g.coords()
    f = Field(g, np.exp(-y))
    grad_side, value_side = weighted_tail_poincare(f, 1.0, 0.0)
    assert grad_side == pytest.approx(1.0, rel=1e-3)
    assert value_side == pytest.approx(0.25, rel=1e-3)
    assert grad_side >= value_side


def test_weighted_tail_poincare_holds_on_wave(wave):
    f = wave.as_field()
    for c in (0.3, wave.c_star, 0.45):
        grad_side, value_side = weighted_tail_poincare(f, c, 0.0)
        assert grad_side >= value_side


def test_truncated_energy_matches_fine_grid_quadrature(potential):
    # analytic logistic interface, independent quadrature at 10x resolution
    def density(x):
        h = 1.0 / (1.0 + np.exp(x / math.sqrt(2.0)))
        hp = -h * (1.0 - h) / math.sqrt(2.0)
        fbar = np.asarray(potential.f(h)) - float(potential.f(1.0))
        return 0.5 * hp * hp + fbar

    x_hat = 0.0
    xf = np.arange(-20.0, 20.0 + 1e-12, 0.005)
    phi = np.where(xf <= x_hat, 1.0, np.exp(x_hat - xf))
    oracle = float(trapezoid(phi * density(xf), xf))

    g = Grid1D.from_spacing(-20.0, 20.0, 0.05)
    f = Field(g, 1.0 / (1.0 + np.exp(g.coords() / math.sqrt(2.0))))
    assert truncated_energy(f, x_hat, potential) == pytest.approx(oracle, rel=1e-3)


def test_truncated_energy_nonnegative_and_monotone_in_anchor(wave_eps, potential):
    g = Grid1D.from_spacing(-60.0, 60.0, 0.05)
    f = Field(g, np.asarray(wave_eps.eval(g.coords())))
    values = [truncated_energy(f, x_hat, potential) for x_hat in (-20.0, 0.0, 20.0)]
    assert all(v >= 0.0 for v in values)
    # moving the anchor forward weights more of the interface fully
    assert values[0] < values[1] < values[2]


def test_truncated_energy_requires_settled_tails(potential):
    g = Grid1D.from_spacing(-20.0, 20.0, 0.05)
    for level in (0.5, 1.0, 0.0):
        f = Field(g, np.full(g.n, level))
        with pytest.raises(TailNotDecayedError):
            truncated_energy(f, 0.0, potential)


def test_dissipation_identity_on_short_run(short_run):
    traj, trace = short_run
    resid = dissipation_identity_residual(traj, trace.frame, t_min=5.0)
    assert resid < 5e-2


def test_audit_inequalities_on_settled_snapshot(short_run, consts, band, potential):
    traj, trace = short_run
    snap = traj.snapshots[-1]
    audit = audit_inequalities(snap, trace.frame, consts, band, potential)
    assert audit.lower_bound_margin is not None and audit.lower_bound_margin > 0.0
    assert audit.dissipation_energy_margin is not None
    assert audit.dissipation_energy_margin > 0.0
    assert audit.energy.anchor == audit.dissipation.anchor
    assert audit.weighted_h1_value > 0.0
