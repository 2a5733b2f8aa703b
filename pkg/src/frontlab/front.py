"""Invasion-point location, front speeds, and front-frame resampling.

The invasion point of a field is the rightmost position where |u| reaches a
threshold; a second point uses twice the threshold and always sits behind the
first on monotone fronts.  Speeds come either from the quotient
-u_t / u_x at the invasion point or from least-squares slopes of the tracked
position over time windows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .evolution import Field, Snapshot, Trajectory
from .potentials import DerivedConstants, ThresholdBand

__all__ = [
    "FrontSeries",
    "FrontFrameProfile",
    "SpeedEstimate",
    "invasion_point",
    "second_invasion_point",
    "front_series",
    "xxcontrol_margins",
    "xxcontrol_check",
    "speed_estimates",
    "instantaneous_speed",
    "front_profile",
]


@dataclass
class FrontSeries:
    """Tracked front positions over time (NaN where undefined)."""

    times: np.ndarray
    position: np.ndarray
    upper_position: np.ndarray

    def finite(self) -> "FrontSeries":
        keep = np.isfinite(self.position)
        return FrontSeries(self.times[keep], self.position[keep], self.upper_position[keep])


@dataclass
class FrontFrameProfile:
    """Field data resampled at offsets relative to the invasion point."""

    offsets: np.ndarray
    values: np.ndarray
    slope: np.ndarray
    rate: np.ndarray
    front: float


@dataclass(frozen=True)
class SpeedEstimate:
    c_minus: float
    c_plus: float
    fit_slope: float


def _rightmost_crossing(x: np.ndarray, absu: np.ndarray, level: float) -> float | None:
    hits = np.flatnonzero(absu >= level)
    if hits.size == 0:
        return None
    i = hits[-1]
    if i == absu.size - 1:
        return float(x[-1])
    # linear interpolation to |u| = level between node i and its right neighbor
    drop = absu[i] - absu[i + 1]
    frac = 0.0 if drop <= 0.0 else (absu[i] - level) / drop
    return float(x[i] + frac * (x[i + 1] - x[i]))


def invasion_point(f: Field, eps: float) -> float | None:
    """Rightmost x with |u| = eps (linear interpolation); None if no node reaches it."""
    if eps <= 0.0:
        raise ValueError("threshold must be positive")
    return _rightmost_crossing(f.grid.coords(), np.abs(f.values), eps)


def second_invasion_point(f: Field, eps: float) -> float | None:
    """Rightmost x with |u| = 2 eps; sits left of the eps point on fronts."""
    if eps <= 0.0:
        raise ValueError("threshold must be positive")
    return _rightmost_crossing(f.grid.coords(), np.abs(f.values), 2.0 * eps)


def front_series(traj: Trajectory, band: ThresholdBand) -> FrontSeries:
    """Invasion points for every snapshot of a trajectory."""
    times, pos, upper = [], [], []
    for s in traj.snapshots:
        times.append(s.time)
        xb = invasion_point(s.field, band.epsilon)
        Xb = second_invasion_point(s.field, band.epsilon)
        pos.append(np.nan if xb is None else xb)
        upper.append(np.nan if Xb is None else Xb)
    return FrontSeries(np.array(times), np.array(pos), np.array(upper))


def xxcontrol_margins(
    times: np.ndarray,
    position: np.ndarray,
    upper_position: np.ndarray,
    consts: DerivedConstants,
) -> np.ndarray:
    """Margin position(t0) + offset - max upper_position over the window.

    One margin per admissible start time t0; the maximum runs over samples in
    [t0, t0 + front_window].  Nonnegative margins mean the 2-eps point never
    outran the front-control offset.
    """
    t = np.asarray(times, dtype=float)
    xb = np.asarray(position, dtype=float)
    Xb = np.asarray(upper_position, dtype=float)
    if t.size < 2:
        raise ValueError("need at least two samples")
    dt = float(np.median(np.diff(t)))
    k = max(0, int(np.floor(consts.front_window / dt)))
    n = t.size - k
    if n <= 0:
        raise ValueError("series shorter than the control window")
    window_max = Xb[:n].copy()
    for off in range(1, k + 1):
        np.maximum(window_max, Xb[off:off + n], out=window_max)
    return xb[:n] + consts.front_offset - window_max


def xxcontrol_check(traj: Trajectory, band: ThresholdBand, consts: DerivedConstants) -> np.ndarray:
    """Front-control margins for a trajectory (see xxcontrol_margins).

    The snapshot cadence should resolve front_window with several samples;
    with coarser cadence only the instantaneous ordering is exercised.
    """
    series = front_series(traj, band).finite()
    return xxcontrol_margins(series.times, series.position, series.upper_position, consts)


def speed_estimates(series: FrontSeries, window: float) -> SpeedEstimate:
    """Least-squares front speeds over trailing windows of the given width.

    The time range is split into consecutive windows ending at the last
    sample; c_minus/c_plus are the extreme slopes and fit_slope is the slope
    over the final window.
    """
    s = series.finite()
    t, x = s.times, s.position
    if t.size < 2 or t[-1] - t[0] < 3.0 * window:
        raise ValueError("series must cover at least three windows")
    slopes = []
    right = t[-1]
    while right - window >= t[0] - 1e-12:
        sel = (t >= right - window) & (t <= right)
        if np.count_nonzero(sel) >= 2:
            slopes.append(float(np.polyfit(t[sel], x[sel], 1)[0]))
        right -= window
    slopes = slopes[::-1]
    return SpeedEstimate(c_minus=min(slopes), c_plus=max(slopes), fit_slope=slopes[-1])


def _local_spline(s: Snapshot, center: float, halfwidth: float) -> tuple[CubicSpline, CubicSpline]:
    x = s.field.grid.coords()
    sel = (x >= center - halfwidth) & (x <= center + halfwidth)
    if np.count_nonzero(sel) < 4:
        raise ValueError("window too narrow for cubic resampling")
    return (
        CubicSpline(x[sel], s.field.values[sel]),
        CubicSpline(x[sel], s.time_derivative[sel]),
    )


def instantaneous_speed(s: Snapshot, xbar: float, *, slope_floor: float = 1e-6) -> float | None:
    """Front speed -u_t / u_x at the invasion point; None on flat slope."""
    spline_u, spline_ut = _local_spline(s, xbar, 5.0)
    slope = float(spline_u(xbar, 1))
    if abs(slope) < slope_floor:
        return None
    return -float(spline_ut(xbar)) / slope


def front_profile(s: Snapshot, xbar: float, L: float, dz: float | None = None) -> FrontFrameProfile:
    """Resample u, u_x, u_t at offsets z in [-L, right edge) from the front."""
    grid = s.field.grid
    dz = grid.dx if dz is None else dz
    z_hi = grid.x_max - xbar - grid.dx
    z = np.arange(-L, z_hi, dz)
    x = grid.coords()
    spline_u = CubicSpline(x, s.field.values)
    spline_ut = CubicSpline(x, s.time_derivative)
    return FrontFrameProfile(
        offsets=z,
        values=spline_u(xbar + z),
        slope=spline_u(xbar + z, 1),
        rate=spline_ut(xbar + z),
        front=float(xbar),
    )
