"""Semi-implicit evolution of u_t = u_xx - F'(u) on a truncated line.

The second derivative and an optional comoving advection term c u_x are
treated with a Crank-Nicolson step (one banded factorization per stepper,
reused every step); the reaction term is handled explicitly with a
predictor-corrector pass so the overall step is second order in dt.
Boundary nodes are pinned to their initial values, which for admissible data
are the equilibria 1 on the left and 0 on the right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.linalg import splu

from .potentials import Potential, ThresholdBand

__all__ = [
    "Grid1D",
    "Field",
    "Snapshot",
    "Trajectory",
    "SimulationAborted",
    "BlowUpError",
    "FrontMarginError",
    "make_initial_data",
    "Stepper",
    "step",
    "simulate",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [x_min, x_max] with n nodes including both ends."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 8:
            raise ValueError("grid needs at least 8 nodes")
        if not self.x_max > self.x_min:
            raise ValueError("empty grid interval")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    def coords(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @classmethod
    def from_spacing(cls, x_min: float, x_max: float, dx: float) -> "Grid1D":
        n = int(round((x_max - x_min) / dx)) + 1
        if abs((x_max - x_min) / (n - 1) - dx) > 1e-9 * dx:
            raise ValueError("spacing does not divide the interval")
        return cls(x_min, x_max, n)


@dataclass
class Field:
    """Values sampled on a grid."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n,):
            raise ValueError("value array does not match grid")

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())


@dataclass
class Snapshot:
    """A field at a point in time plus its instantaneous PDE right-hand side.

    time_derivative holds the discrete u_xx + c u_x - F'(u) on the full grid
    (zero at the pinned boundary nodes), not a time difference.
    """

    time: float
    field: Field
    time_derivative: np.ndarray


@dataclass
class Trajectory:
    snapshots: list[Snapshot]
    frame_speed: float
    potential: Potential
    band: ThresholdBand | None = None
    dt: float = float("nan")
    amplitude_observed: float = float("nan")
    meta: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.snapshots])


class SimulationAborted(RuntimeError):
    """A monitored run stopped before reaching its final time."""

    def __init__(self, message: str, time: float):
        super().__init__(f"{message} (t = {time:.6g})")
        self.time = time


class BlowUpError(SimulationAborted):
    pass


class FrontMarginError(SimulationAborted):
    pass


def _check_tails(u: np.ndarray, tol: float = 1e-8) -> None:
    if abs(u[0] - 1.0) > tol:
        raise ValueError(f"left tail must sit at 1, got {u[0]!r}")
    if abs(u[-1]) > tol:
        raise ValueError(f"right tail must sit at 0, got {u[-1]!r}")


def make_initial_data(kind: str, grid: Grid1D, **params) -> Field:
    """Build admissible initial data connecting 1 on the left to 0 on the right.

    Kinds:
      sharp_step(x0)                   indicator of x < x0
      tanh_step(width, x0)             smooth ramp of the given width
      exact_wave(wave, shift)          travelling-wave profile h(x - shift)
      perturbed_wave(wave, amplitude, mode, shift)
                                       wave plus a localized oscillation
      overshoot_step(over, under, x0, width)
                                       step overshooting to `over` then
                                       undershooting to `under` before 0
      dip_plateau(wave, dip, dip_lo, dip_hi)
                                       wave profile ahead of dip_hi, a flat
                                       dip on [dip_lo, dip_hi], 1 behind
    """
    x = grid.coords()
    if kind == "sharp_step":
        x0 = params.get("x0", 0.0)
        u = np.where(x < x0, 1.0, 0.0)
    elif kind == "tanh_step":
        width = params.get("width", 1.0)
        x0 = params.get("x0", 0.0)
        if width <= 0:
            raise ValueError("width must be positive")
        u = 0.5 * (1.0 - np.tanh((x - x0) / width))
    elif kind == "exact_wave":
        wave = params["wave"]
        shift = params.get("shift", 0.0)
        u = wave.eval(x - shift)
    elif kind == "perturbed_wave":
        wave = params["wave"]
        shift = params.get("shift", 0.0)
        amplitude = params.get("amplitude", 0.05)
        mode = params.get("mode", 1.0)
        z = x - shift
        u = wave.eval(z) + amplitude * np.sin(mode * z) * np.exp(-((z / 10.0) ** 2))
    elif kind == "overshoot_step":
        over = params.get("over", 1.2)
        under = params.get("under", -0.2)
        x0 = params.get("x0", 0.0)
        width = params.get("width", 10.0)
        u = np.where(x < x0 - width, 1.0,
                     np.where(x < x0, over, np.where(x < x0 + width, under, 0.0)))
    elif kind == "dip_plateau":
        wave = params["wave"]
        dip = params.get("dip", 0.6)
        lo = params.get("dip_lo", -150.0)
        hi = params.get("dip_hi", -50.0)
        if not lo < hi:
            raise ValueError("dip interval must satisfy dip_lo < dip_hi")
        u = np.asarray(wave.eval(x), dtype=float)
        u[x < hi] = dip
        u[x < lo] = 1.0
    else:
        raise ValueError(f"unknown initial data kind {kind!r}")
    u = np.asarray(u, dtype=float)
    _check_tails(u, tol=params.get("tail_tol", 1e-8))
    return Field(grid, u)


class Stepper:
    """Fixed-coefficient IMEX stepper for one (grid, dt, frame, potential).

    The linear operator L = D2 + c D1 (centered differences, Dirichlet ends)
    is factorized once; each step solves (I - dt/2 L) twice, for a predictor
    with explicit reaction and a trapezoidal corrector.
    """

    def __init__(self, grid: Grid1D, dt: float, c: float, P: Potential,
                 boundary: tuple[float, float]):
        if dt <= 0.0:
            raise ValueError("dt must be positive")
        self.grid = grid
        self.dt = float(dt)
        self.c = float(c)
        self.potential = P
        self.boundary = (float(boundary[0]), float(boundary[1]))

        dx = grid.dx
        m = grid.n - 2
        self._inv_dx2 = 1.0 / (dx * dx)
        self._inv_2dx = 0.5 / dx
        r = 0.5 * dt * self._inv_dx2
        s = 0.5 * dt * self.c * self._inv_2dx
        lower = np.full(m - 1, -(r - s))
        diag = np.full(m, 1.0 + 2.0 * r)
        upper = np.full(m - 1, -(r + s))
        A = sparse.diags([lower, diag, upper], (-1, 0, 1), format="csc")
        self._solve = splu(A).solve

    def linear_rhs(self, u: np.ndarray) -> np.ndarray:
        """Interior values of L u; the stencil sees the pinned end nodes."""
        lin = (u[:-2] - 2.0 * u[1:-1] + u[2:]) * self._inv_dx2
        lin += (u[2:] - u[:-2]) * (self.c * self._inv_2dx)
        return lin

    def pde_rhs(self, u: np.ndarray) -> np.ndarray:
        """Full-grid discrete u_xx + c u_x - F'(u); zero at the pinned ends."""
        out = np.zeros_like(u)
        out[1:-1] = self.linear_rhs(u) - self.potential.df(u[1:-1])
        return out

    def advance(self, u: np.ndarray) -> np.ndarray:
        dt = self.dt
        lin = self.linear_rhs(u)
        react = self.potential.df(u[1:-1])
        delta = self._solve(dt * (lin - react))
        u_pred = u[1:-1] + delta
        react_avg = 0.5 * (react + self.potential.df(u_pred))
        out = u.copy()
        out[1:-1] += self._solve(dt * (lin - react_avg))
        return out


def step(s: Snapshot, dt: float, c: float, P: Potential) -> Snapshot:
    """Advance a single snapshot by dt in the frame moving at speed c."""
    u = s.field.values
    stepper = Stepper(s.field.grid, dt, c, P, boundary=(u[0], u[-1]))
    u_new = stepper.advance(u)
    return Snapshot(
        time=s.time + dt,
        field=Field(s.field.grid, u_new),
        time_derivative=stepper.pde_rhs(u_new),
    )


def _amplitude_sup(u: np.ndarray, dx: float) -> float:
    ux = np.gradient(u, dx, edge_order=2)
    uxx = np.zeros_like(u)
    uxx[1:-1] = (u[:-2] - 2.0 * u[1:-1] + u[2:]) / (dx * dx)
    return float(np.max(np.abs(u) + np.abs(ux) + np.abs(uxx)))


def simulate(
    u0: Field,
    T: float,
    dt: float,
    c: float,
    P: Potential,
    *,
    band: ThresholdBand | None = None,
    observers: Sequence[tuple[int, Callable[[Snapshot], None]]] = (),
    snapshot_dt: float | None = None,
    amplitude_expected: float = 1.5,
    blowup_factor: float = 10.0,
    front_margin: float = 50.0,
    front_check_dt: float = 1.0,
    amplitude_settle: float = 1.0,
) -> Trajectory:
    """Run the stepper for time T with monitors and snapshot collection.

    observers is a sequence of (every_n_steps, callback) pairs; callbacks
    receive an independent Snapshot at step 0, every multiple of their
    cadence, and at the final step.  Monitors abort (raise) on non-finite or
    blown-up values and, when a threshold band is supplied, on the invasion
    point approaching either boundary closer than front_margin.
    """
    from .front import invasion_point  # local import to keep modules acyclic

    n_steps = int(round(T / dt))
    if abs(n_steps * dt - T) > 1e-9 * max(1.0, T):
        raise ValueError("T must be an integer number of steps")

    u = u0.values.copy()
    stepper = Stepper(u0.grid, dt, c, P, boundary=(u[0], u[-1]))
    snap_every = max(1, int(round(snapshot_dt / dt))) if snapshot_dt else None
    front_every = max(1, int(round(front_check_dt / dt)))
    blowup_cap = blowup_factor * amplitude_expected
    amp_every = 10
    amp_observed = -np.inf

    snapshots: list[Snapshot] = []

    def emit(i: int, values: np.ndarray) -> None:
        t = i * dt
        snap: Snapshot | None = None

        def get_snap() -> Snapshot:
            nonlocal snap
            if snap is None:
                f = Field(u0.grid, values.copy())
                snap = Snapshot(time=t, field=f, time_derivative=stepper.pde_rhs(values))
            return snap

        if snap_every is not None and (i % snap_every == 0 or i == n_steps):
            snapshots.append(get_snap())
        elif snap_every is None and (i == 0 or i == n_steps):
            snapshots.append(get_snap())
        for every, fn in observers:
            if i % every == 0 or i == n_steps:
                fn(get_snap())

    emit(0, u)
    for i in range(1, n_steps + 1):
        u = stepper.advance(u)
        t = i * dt
        m = float(np.max(np.abs(u)))
        if not np.isfinite(m):
            raise BlowUpError("non-finite values", t)
        if m > blowup_cap:
            raise BlowUpError(f"amplitude {m:.3g} exceeded {blowup_cap:.3g}", t)
        if t >= amplitude_settle and i % amp_every == 0:
            amp_observed = max(amp_observed, _amplitude_sup(u, u0.grid.dx))
        if band is not None and i % front_every == 0:
            xb = invasion_point(Field(u0.grid, u), band.epsilon)
            if xb is not None and (
                xb - u0.grid.x_min < front_margin or u0.grid.x_max - xb < front_margin
            ):
                raise FrontMarginError(f"front at {xb:.3g} within {front_margin} of boundary", t)
        emit(i, u)

    return Trajectory(
        snapshots=snapshots,
        frame_speed=c,
        potential=P,
        band=band,
        dt=dt,
        amplitude_observed=amp_observed,
        meta={"T": T},
    )
