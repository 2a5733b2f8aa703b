"""Exponentially weighted energy and dissipation in a moving frame.

For a frame speed c > 0 the energy integrand (v_y^2 / 2 + F(v)) and the
dissipation integrand (v_yy + c v_y - F'(v))^2 carry the weight e^{c y},
which overflows long before the domains of interest end.  All quantities are
therefore handled in an anchored representation: the pair (anchor, value)
stands for e^{c * anchor} * value, and the true number is never materialized
unless explicitly requested.  Anchors are chosen at the invasion point so the
stored values stay order one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import trapezoid

from .evolution import Field, Snapshot, Trajectory
from .potentials import DerivedConstants, Potential, ThresholdBand

__all__ = [
    "AnchoredValue",
    "EnergyAudit",
    "TailNotDecayedError",
    "energy_weighted",
    "dissipation_weighted",
    "weighted_tail_poincare",
    "dissipation_identity_residual",
    "truncated_energy",
    "audit_inequalities",
]


class TailNotDecayedError(ValueError):
    """Raised when a weighted integral is requested for an undecayed tail."""


@dataclass(frozen=True)
class AnchoredValue:
    """value * e^{c * anchor}, kept factored to avoid overflow.

    Rescaling the anchor multiplies the stored value by the complementary
    exponential; the represented number is unchanged up to round-off.
    """

    anchor: float
    value: float
    c: float

    def reanchored(self, new_anchor: float) -> "AnchoredValue":
        scale = math.exp(-self.c * (new_anchor - self.anchor))
        return AnchoredValue(anchor=float(new_anchor), value=self.value * scale, c=self.c)

    def true_value(self) -> float:
        """Materialize e^{c * anchor} * value; may overflow for far anchors."""
        return self.value * math.exp(self.c * self.anchor)

    def log_abs(self) -> float:
        """log |represented value|, safe for any anchor; -inf for zero."""
        if self.value == 0.0:
            return -math.inf
        return self.c * self.anchor + math.log(abs(self.value))

    @property
    def sign(self) -> float:
        return math.copysign(1.0, self.value) if self.value != 0.0 else 0.0


@dataclass(frozen=True)
class EnergyAudit:
    """Per-snapshot energy bookkeeping in a fixed frame."""

    time: float
    energy: AnchoredValue
    dissipation: AnchoredValue
    lower_bound_margin: float | None
    dissipation_energy_margin: float | None
    weighted_h1_value: float
    front: float | None
    front_upper: float | None


def _right_tail_check(v: np.ndarray, tol: float) -> None:
    if abs(v[-1]) > tol:
        raise TailNotDecayedError(
            f"right tail |v| = {abs(v[-1]):.3g} exceeds {tol:.3g}; "
            "weighted integrals need a decayed right tail"
        )


def _weight(y: np.ndarray, c: float, anchor: float) -> np.ndarray:
    # exponent shifted per node; anchors near the front keep this bounded
    return np.exp(c * (y - anchor))


def energy_core(y, v, c, anchor, P, dv=None):
    """Anchored weighted energy from raw arrays (trapezoid + tail closure).

    The constant continuation of the first node closes the left tail in
    closed form; the right tail must already be decayed.
    """
    w = _weight(y, c, anchor)
    vy = np.gradient(v, y[1] - y[0], edge_order=2) if dv is None else dv
    density = 0.5 * vy * vy + P.f(v)
    total = trapezoid(w * density, y)
    total += float(P.f(v[0])) / c * w[0]
    return float(total)


def dissipation_core(y, v, c, anchor, P, vt=None):
    """Anchored weighted dissipation from raw arrays."""
    w = _weight(y, c, anchor)
    if vt is None:
        dx = y[1] - y[0]
        vt = np.zeros_like(v)
        vt[1:-1] = (v[:-2] - 2.0 * v[1:-1] + v[2:]) / (dx * dx)
        vt[1:-1] += c * (v[2:] - v[:-2]) / (2.0 * dx)
        vt[1:-1] -= P.df(v[1:-1])
    total = trapezoid(w * vt * vt, y)
    total += float(P.df(v[0])) ** 2 / c * w[0]
    return float(total)


def energy_weighted(
    v: Field,
    c: float,
    P: Potential,
    anchor: float = 0.0,
    *,
    dv: np.ndarray | None = None,
    tail_tol: float = 1e-6,
) -> AnchoredValue:
    """Weighted energy of a field, anchored at the given position.

    dv optionally supplies the exact derivative samples (used for shot wave
    profiles); otherwise a centered difference is taken.
    """
    if c <= 0.0:
        raise ValueError("frame speed must be positive")
    _right_tail_check(v.values, tail_tol)
    val = energy_core(v.grid.coords(), v.values, c, anchor, P, dv=dv)
    return AnchoredValue(anchor=float(anchor), value=val, c=float(c))


def dissipation_weighted(
    v: Field,
    c: float,
    P: Potential,
    anchor: float = 0.0,
    *,
    vt: np.ndarray | None = None,
    tail_tol: float = 1e-6,
) -> AnchoredValue:
    """Weighted dissipation of a field, anchored at the given position.

    vt optionally supplies the discrete PDE right-hand side (as stored on
    snapshots); otherwise it is recomputed with centered differences.
    """
    if c <= 0.0:
        raise ValueError("frame speed must be positive")
    _right_tail_check(v.values, tail_tol)
    val = dissipation_core(v.grid.coords(), v.values, c, anchor, P, vt=vt)
    return AnchoredValue(anchor=float(anchor), value=val, c=float(c))


def weighted_tail_poincare(v: Field, c: float, y0: float) -> tuple[float, float]:
    """Both sides of the weighted tail inequality from y0 onward.

    Returns (gradient_side, value_side) anchored at y0; gradient_side must
    dominate (c^2/4) * value_side for fields decaying on the right.
    """
    y = v.grid.coords()
    sel = y >= y0
    ys, vs = y[sel], v.values[sel]
    w = _weight(ys, c, y0)
    vy = np.gradient(vs, v.grid.dx, edge_order=2)
    grad_side = float(trapezoid(w * vy * vy, ys))
    value_side = float(trapezoid(w * vs * vs, ys))
    return grad_side, 0.25 * c * c * value_side


def truncated_energy(u: Field, x_hat: float, P: Potential, *, tail_tol: float = 1e-6) -> float:
    """Repair energy: unweighted behind x_hat, e^{x_hat - x} ahead.

    The density is u_x^2 / 2 + F(u) - F(1) >= 0, so the result is
    nonnegative; it measures how far the region behind x_hat is from the
    invaded state.  Both tails must be settled (left at 1, right at 0).
    """
    x = u.grid.coords()
    vals = u.values
    if abs(vals[0] - 1.0) > tail_tol:
        raise TailNotDecayedError("left tail must sit at the invaded state")
    _right_tail_check(vals, tail_tol)
    shifted = P.f(vals) - P.f(1.0)
    ux = np.gradient(vals, u.grid.dx, edge_order=2)
    phi = np.where(x <= x_hat, 1.0, np.exp(np.minimum(x_hat - x, 0.0)))
    total = float(trapezoid(phi * (0.5 * ux * ux + shifted), x))
    # constant continuation of the right tail under the decaying weight
    total += float(P.f(vals[-1]) - P.f(1.0)) * math.exp(min(x_hat - x[-1], 0.0))
    return total


def dissipation_identity_residual(
    traj: Trajectory,
    c: float,
    *,
    t_min: float = 0.0,
    floor: float = 1e-14,
) -> float:
    """Worst relative mismatch between dE/dt and -D along a trajectory.

    E is differenced centrally across snapshots; D is evaluated from the
    stored right-hand sides.  All values are compared at a common anchor and
    normalized by the largest dissipation seen (or the floor).
    """
    snaps = [s for s in traj.snapshots if s.time >= t_min]
    if len(snaps) < 3:
        raise ValueError("need at least three snapshots past t_min")
    from .front import invasion_point  # deferred to keep imports acyclic

    eps = traj.band.epsilon if traj.band is not None else 0.01
    anchors = [invasion_point(s.field, eps) for s in snaps]
    anchor = float(np.median([a for a in anchors if a is not None] or [0.0]))

    E = np.array([
        energy_weighted(s.field, c, traj.potential, anchor).value for s in snaps
    ])
    D = np.array([
        dissipation_weighted(s.field, c, traj.potential, anchor, vt=s.time_derivative).value
        for s in snaps
    ])
    t = np.array([s.time for s in snaps])
    dE = (E[2:] - E[:-2]) / (t[2:] - t[:-2])
    resid = np.abs(dE + D[1:-1])
    scale = max(float(np.max(np.abs(D[1:-1]))), floor)
    return float(np.max(resid) / scale)


def audit_inequalities(
    snap: Snapshot,
    c: float,
    consts: DerivedConstants,
    band: ThresholdBand,
    P: Potential,
) -> EnergyAudit:
    """Energy/dissipation audit of one comoving snapshot.

    Everything is anchored at the invasion point of the snapshot.  When no
    node reaches the threshold the front-referenced margins are undefined and
    reported as None with zero energies.
    """
    from .front import invasion_point, second_invasion_point

    ybar = invasion_point(snap.field, band.epsilon)
    if ybar is None:
        zero = AnchoredValue(anchor=0.0, value=0.0, c=float(c))
        return EnergyAudit(
            time=snap.time,
            energy=zero,
            dissipation=zero,
            lower_bound_margin=None,
            dissipation_energy_margin=None,
            weighted_h1_value=_weighted_h1(snap.field, c, 0.0),
            front=None,
            front_upper=None,
        )
    Ybar = second_invasion_point(snap.field, band.epsilon)

    E = energy_weighted(snap.field, c, P, anchor=ybar)
    D = dissipation_weighted(snap.field, c, P, anchor=ybar, vt=snap.time_derivative)

    eps = band.epsilon
    lower_bound = -P.well_depth / c + consts.lower_coeff * eps * eps
    lower_margin = E.value - lower_bound

    dcec_margin = None
    if Ybar is not None:
        dcec_margin = (
            D.value
            - consts.decay_rate * E.value
            + consts.source_coeff / c * math.exp(c * (Ybar - ybar))
        )

    return EnergyAudit(
        time=snap.time,
        energy=E,
        dissipation=D,
        lower_bound_margin=lower_margin,
        dissipation_energy_margin=dcec_margin,
        weighted_h1_value=_weighted_h1(snap.field, c, ybar),
        front=ybar,
        front_upper=Ybar,
    )


def _weighted_h1(v: Field, c: float, anchor: float) -> float:
    """sup |v| plus the anchored H1 norm of the half-weighted field."""
    y = v.grid.coords()
    w = _weight(y, c, anchor)
    vy = np.gradient(v.values, v.grid.dx, edge_order=2)
    vv = v.values
    h1_sq = trapezoid(w * ((1.0 + 0.25 * c * c) * vv * vv + c * vv * vy + vy * vy), y)
    return float(np.max(np.abs(vv)) + np.sqrt(max(h1_sq, 0.0)))
