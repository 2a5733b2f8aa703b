"""Travelling-wave profiles by phase-plane shooting.

In the frame moving at speed c the profile solves h'' + c h' - F'(h) = 0
with h(-inf) = 1 and h(+inf) = 0.  Both rest states are saddles of the
first-order system; shooting down the unstable manifold of (1, 0)
classifies each c by whether the orbit crosses zero while still falling
(speed too small) or stalls above zero (speed too large).  Bisection on c
pinches the unique connecting speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp, trapezoid
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .energetics import energy_core
from .evolution import Field, Grid1D
from .potentials import Potential, ThresholdBand

__all__ = [
    "ShootResult",
    "WaveResult",
    "DecayRates",
    "shoot",
    "find_wave_speed",
    "normalize_profile",
    "decay_rates",
    "speed_identity_check",
]

UNDERSHOOT = "crossed_zero_descending"
OVERSHOOT = "stalled_above_zero"
EXHAUSTED = "exited_window"


@dataclass(frozen=True)
class DecayRates:
    """Exponential rates of the profile tails at the two rest states.

    ahead  (negative) rate of h -> 0 on the right
    behind (positive) rate of 1 - h -> 0 on the left
    """

    ahead: float
    behind: float


@dataclass
class ShootResult:
    c: float
    outcome: str
    y: np.ndarray
    h: np.ndarray
    hp: np.ndarray


@dataclass
class WaveResult:
    """A travelling-wave profile on a uniform grid with analytic tails.

    shift records the total translation applied relative to the raw profile,
    which is centered where h passes 1/2.  eval/eval_slope continue the
    profile beyond the stored grid with its linearized tails.
    """

    c_star: float
    y: np.ndarray
    h: np.ndarray
    hp: np.ndarray
    shift: float
    rates: DecayRates
    residual: float
    potential: Potential

    @property
    def dy(self) -> float:
        return float(self.y[1] - self.y[0])

    def _splines(self):
        cache = getattr(self, "_spline_cache", None)
        if cache is None:
            cache = (PchipInterpolator(self.y, self.h), PchipInterpolator(self.y, self.hp))
            self._spline_cache = cache
        return cache

    def eval(self, z) -> np.ndarray:
        """Profile values at arbitrary positions, analytic beyond the grid."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.empty_like(z)
        lo, hi = self.y[0], self.y[-1]
        inside = (z >= lo) & (z <= hi)
        out[inside] = self._splines()[0](z[inside])
        left = z < lo
        out[left] = 1.0 - (1.0 - self.h[0]) * np.exp(self.rates.behind * (z[left] - lo))
        right = z > hi
        out[right] = self.h[-1] * np.exp(self.rates.ahead * (z[right] - hi))
        return out

    def eval_slope(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.empty_like(z)
        lo, hi = self.y[0], self.y[-1]
        inside = (z >= lo) & (z <= hi)
        out[inside] = self._splines()[1](z[inside])
        left = z < lo
        out[left] = -(1.0 - self.h[0]) * self.rates.behind * np.exp(
            self.rates.behind * (z[left] - lo)
        )
        right = z > hi
        out[right] = self.h[-1] * self.rates.ahead * np.exp(self.rates.ahead * (z[right] - hi))
        return out

    def as_field(self) -> Field:
        return Field(Grid1D(float(self.y[0]), float(self.y[-1]), self.y.size), self.h.copy())


def decay_rates(P: Potential, c: float) -> DecayRates:
    """Linearized tail rates of the profile at the rest states."""
    beta0 = float(P.d2f(0.0))
    beta1 = float(P.d2f(1.0))
    if beta0 <= 0.0 or beta1 <= 0.0:
        raise ValueError("both rest states must be nondegenerate minima")
    ahead = 0.5 * (-c - math.sqrt(c * c + 4.0 * beta0))
    behind = 0.5 * (-c + math.sqrt(c * c + 4.0 * beta1))
    return DecayRates(ahead=ahead, behind=behind)


def shoot(
    P: Potential,
    c: float,
    start_offset: float = 1e-8,
    window: float = 200.0,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    dense: bool = False,
):
    """Integrate down the unstable manifold of (1, 0) and classify the orbit.

    Returns a ShootResult; with dense=True the solver output is attached as
    .sol for dense resampling.
    """
    if c <= 0.0:
        raise ValueError("wave speed must be positive")
    rates = decay_rates(P, c)
    df, f = P.df, P.f

    def rhs(y, s):
        return (s[1], -c * s[1] + float(df(s[0])))

    def crossed_zero(y, s):
        return s[0]

    crossed_zero.terminal = True
    crossed_zero.direction = -1.0

    def stalled(y, s):
        return s[1]

    stalled.terminal = True
    stalled.direction = 1.0

    # The orbit energy hp^2/2 - F(h) strictly decays; once negative the
    # orbit is trapped above zero, which also catches the overdamped slide
    # into the interior sink where the slope never vanishes.
    def sank(y, s):
        return 0.5 * s[1] * s[1] - float(f(s[0]))

    sank.terminal = True
    sank.direction = -1.0

    h0 = 1.0 - start_offset
    hp0 = -start_offset * rates.behind
    sol = solve_ivp(
        rhs,
        (0.0, window),
        (h0, hp0),
        method="RK45",
        events=(crossed_zero, stalled, sank),
        rtol=rtol,
        atol=atol,
        dense_output=dense,
    )
    if sol.t_events[0].size:
        outcome = UNDERSHOOT
    elif sol.t_events[1].size or sol.t_events[2].size:
        outcome = OVERSHOOT
    else:
        outcome = EXHAUSTED
    result = ShootResult(c=c, outcome=outcome, y=sol.t, h=sol.y[0], hp=sol.y[1])
    if dense:
        result.sol = sol  # type: ignore[attr-defined]
    return result


def _fd_residual(y: np.ndarray, h: np.ndarray, c: float, P: Potential) -> float:
    """sup |h'' + c h' - F'(h)| with fourth-order differences of the samples."""
    dy = y[1] - y[0]
    hpp = (-h[:-4] + 16.0 * h[1:-3] - 30.0 * h[2:-2] + 16.0 * h[3:-1] - h[4:]) / (12.0 * dy * dy)
    hp = (h[:-4] - 8.0 * h[1:-3] + 8.0 * h[3:-1] - h[4:]) / (12.0 * dy)
    return float(np.max(np.abs(hpp + c * hp - np.asarray(P.df(h[2:-2])))))


def find_wave_speed(
    P: Potential,
    c_lo: float = 0.01,
    c_hi: float = 1.5,
    tol: float = 1e-12,
    dy: float = 0.01,
    tail: float = 1e-10,
    **shoot_kw,
) -> WaveResult:
    """Bisect the shooting classification to the unique front speed.

    The bracket must classify as too-small at c_lo and too-large at c_hi.
    The returned profile is resampled at spacing dy, centered where h = 1/2,
    and extended with its linearized tails until both ends are below `tail`.
    """
    lo = shoot(P, c_lo, **shoot_kw)
    hi = shoot(P, c_hi, **shoot_kw)
    if lo.outcome != UNDERSHOOT or hi.outcome != OVERSHOOT:
        raise ValueError(
            f"bracket does not straddle the wave speed: {c_lo} -> {lo.outcome}, "
            f"{c_hi} -> {hi.outcome}"
        )
    a, b = c_lo, c_hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        out = shoot(P, mid, **shoot_kw).outcome
        if out == UNDERSHOOT:
            a = mid
        elif out == OVERSHOOT:
            b = mid
        else:  # orbit tracked the connection across the whole window
            a = b = mid
            break
    c_star = 0.5 * (a + b)

    # The dense profile is shot from the descending side of the bracket so
    # the orbit passes cleanly through the tail cut before terminating.
    fine_kw = dict(shoot_kw)
    fine_kw["rtol"] = min(shoot_kw.get("rtol", 1e-10), 1e-12)
    fine_kw["atol"] = min(shoot_kw.get("atol", 1e-12), 1e-14)
    final = shoot(P, a, dense=True, **fine_kw)
    sol = final.sol  # type: ignore[attr-defined]
    rates = decay_rates(P, c_star)

    # cut where contamination by the unstable direction at the origin is
    # still negligible, then extend with the exact linearized tail
    h_cut = max(tail * 10.0, 1e-8)
    ys, hs = sol.t, sol.y[0]
    below = np.flatnonzero(hs <= h_cut)
    y_end = ys[below[0]] if below.size else ys[-1]

    half_idx = int(np.flatnonzero(hs <= 0.5)[0])
    y_half = float(brentq(lambda y: sol.sol(y)[0] - 0.5, ys[half_idx - 1], ys[half_idx], xtol=1e-13))

    n_left = int(math.floor((y_half - ys[0]) / dy))
    n_right = int(math.floor((y_end - y_half) / dy))
    y_core = np.arange(-n_left, n_right + 1) * dy
    states = sol.sol(y_core + y_half)
    h_core, hp_core = states[0], states[1]

    # analytic extensions down to the requested tail size
    gap_left = 1.0 - h_core[0]
    ext_left = int(math.ceil(max(0.0, math.log(gap_left / tail)) / (rates.behind * dy)))
    gap_right = max(h_core[-1], tail)
    ext_right = int(math.ceil(max(0.0, math.log(gap_right / tail)) / (-rates.ahead * dy)))

    zl = -np.arange(ext_left, 0, -1) * dy
    hl = 1.0 - gap_left * np.exp(rates.behind * zl)
    hpl = -gap_left * rates.behind * np.exp(rates.behind * zl)
    zr = np.arange(1, ext_right + 1) * dy
    hr = h_core[-1] * np.exp(rates.ahead * zr)
    hpr = h_core[-1] * rates.ahead * np.exp(rates.ahead * zr)

    y_all = np.concatenate([zl + y_core[0], y_core, zr + y_core[-1]])
    h_all = np.concatenate([hl, h_core, hr])
    hp_all = np.concatenate([hpl, hp_core, hpr])

    w = WaveResult(
        c_star=c_star,
        y=y_all,
        h=h_all,
        hp=hp_all,
        shift=0.0,
        rates=rates,
        residual=0.0,
        potential=P,
    )
    w.residual = _fd_residual(y_all, h_all, c_star, P)
    return w


def normalize_profile(w: WaveResult, band: ThresholdBand) -> WaveResult:
    """Translate the profile so h = epsilon lands exactly at y = 0.

    The grid is resampled (monotone cubic) onto nodes containing the origin;
    applying the normalization twice is idempotent up to interpolation error.
    """
    eps = band.epsilon
    if not w.h[-1] < eps < w.h[0]:
        raise ValueError("threshold outside the profile range")
    spline = w._splines()[0]
    i = int(np.flatnonzero(w.h <= eps)[0])
    y_eps = float(brentq(lambda y: spline(y) - eps, w.y[i - 1], w.y[i], xtol=1e-13))

    dy = w.dy
    n_left = int(math.floor((y_eps - w.y[0]) / dy))
    n_right = int(math.floor((w.y[-1] - y_eps) / dy))
    y_new = np.arange(-n_left, n_right + 1) * dy
    h_new = w.eval(y_new + y_eps)
    hp_new = w.eval_slope(y_new + y_eps)
    out = replace(w, y=y_new, h=h_new, hp=hp_new, shift=w.shift + y_eps)
    out.residual = _fd_residual(y_new, h_new, w.c_star, w.potential)
    return out


def speed_identity_check(P: Potential, w: WaveResult, c: float) -> tuple[float, float]:
    """Both sides of the frame-energy identity for the wave profile.

    Returns (c * E_c[h], (c - c_star) * integral of e^{c y} h'^2); the two
    agree for frame speeds below the convergence limit of the weighted
    integrals, which is where this raises.
    """
    limit = w.c_star + math.sqrt(w.c_star**2 + 4.0 * float(P.d2f(0.0)))
    if not 0.0 < c < limit:
        raise ValueError(f"frame speed must lie in (0, {limit:.6g}) for convergent integrals")
    energy = energy_core(w.y, w.h, c, 0.0, P, dv=w.hp)
    weight = np.exp(c * w.y)
    flux = float(trapezoid(weight * w.hp * w.hp, w.y))
    return c * energy, (c - w.c_star) * flux
