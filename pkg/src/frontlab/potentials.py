"""Bistable potentials and the constants derived from them.

A potential F is admissible when it has a strict local minimum of negative
depth at u = 1, a nondegenerate local minimum with F = 0 at u = 0, no other
critical points at nonpositive level, and u F'(u) stays positive far from the
origin so that solutions cannot escape to infinity.  Everything downstream
(wave computation, energy audits) talks to a potential only through the
callables F, F', F'' and the scalars derived here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import erfc, erfcinv

__all__ = [
    "Potential",
    "AssumptionReport",
    "ThresholdBand",
    "DerivedConstants",
    "cubic_potential",
    "make_potential",
    "validate_assumptions",
    "select_epsilon",
    "derive_constants",
]


@dataclass(frozen=True)
class Potential:
    """A smooth scalar potential with callables for F, F' and F''."""

    name: str
    params: dict
    f: Callable[[np.ndarray], np.ndarray]
    df: Callable[[np.ndarray], np.ndarray]
    d2f: Callable[[np.ndarray], np.ndarray]

    @property
    def well_depth(self) -> float:
        """Depth -F(1) > 0 of the invading state."""
        return -float(self.f(1.0))

    @property
    def origin_curvature(self) -> float:
        """F''(0) > 0, the linear decay rate ahead of the front."""
        return float(self.d2f(0.0))


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of the admissibility checks on a sampled interval."""

    coercive_ok: bool
    origin_ok: bool
    invaded_ok: bool
    spurious_critical_points: tuple[float, ...]
    search_interval: tuple[float, float]

    @property
    def passed(self) -> bool:
        return (
            self.coercive_ok
            and self.origin_ok
            and self.invaded_ok
            and not self.spurious_critical_points
        )


@dataclass(frozen=True)
class ThresholdBand:
    """Front threshold epsilon with curvature bounds near the origin.

    curv_lo <= F''(u) <= curv_hi holds for all |u| <= 2 * epsilon.
    """

    epsilon: float
    curv_lo: float
    curv_hi: float


@dataclass(frozen=True)
class DerivedConstants:
    """Constants entering the weighted-energy inequality suite.

    amplitude_bound   bound B on sup(|u| + |u_x| + |u_xx|) after transients
    diss_growth       one-sided growth rate of the weighted dissipation,
                      chosen so F'' >= -diss_growth / 2 on [-B, B]
    lower_coeff       coefficient of epsilon^2 in the energy lower bound
                      anchored at the invasion point
    decay_rate        exponential decay rate of the weighted energy while the
                      invasion point stalls
    density_bound     pointwise bound B^2/2 + sup F on the energy density
    source_coeff      coefficient of the front-position source term in the
                      dissipation-energy inequality
    front_offset      offset C such that the 2-epsilon point cannot pass the
                      epsilon point by more than C within one front_window
    front_window      time horizon over which front_offset is valid
    """

    amplitude_bound: float
    diss_growth: float
    lower_coeff: float
    decay_rate: float
    density_bound: float
    source_coeff: float
    front_offset: float
    front_window: float


def cubic_potential(a: float) -> Potential:
    """Cubic-nonlinearity potential F'(u) = u (u - 1) (u - a), 0 < a < 1/2.

    F(u) = u^4/4 - (1 + a) u^3/3 + a u^2/2 vanishes to second order at 0,
    has depth (1 - 2a)/12 at u = 1, and a positive hump F(a) between.
    """
    if not 0.0 < a < 0.5:
        raise ValueError(f"asymmetry parameter must lie in (0, 1/2), got {a}")

    def f(u):
        u = np.asarray(u, dtype=float)
        return u * u * (u * (3.0 * u - 4.0 * (1.0 + a)) + 6.0 * a) / 12.0

    def df(u):
        u = np.asarray(u, dtype=float)
        return u * (u - 1.0) * (u - a)

    def d2f(u):
        u = np.asarray(u, dtype=float)
        return (3.0 * u - 2.0 * (1.0 + a)) * u + a

    return Potential(name="cubic", params={"a": a}, f=f, df=df, d2f=d2f)


_FAMILIES: dict[str, Callable[..., Potential]] = {"cubic": cubic_potential}


def make_potential(family: str, **params) -> Potential:
    """Build a potential by family name; families register in _FAMILIES."""
    try:
        builder = _FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown potential family {family!r}; known: {sorted(_FAMILIES)}"
        ) from None
    return builder(**params)


def _critical_points(P: Potential, interval: tuple[float, float], n: int) -> list[float]:
    u = np.linspace(interval[0], interval[1], n)
    g = np.asarray(P.df(u))
    roots: list[float] = []
    sign_change = np.nonzero(np.diff(np.signbit(g)))[0]
    for i in sign_change:
        try:
            r = brentq(lambda x: float(P.df(x)), u[i], u[i + 1], xtol=1e-13)
        except ValueError:
            continue
        roots.append(float(r))
    # exact zeros sitting on sample points
    for i in np.nonzero(g == 0.0)[0]:
        roots.append(float(u[i]))
    roots.sort()
    merged: list[float] = []
    for r in roots:
        if not merged or abs(r - merged[-1]) > 1e-9:
            merged.append(r)
    return merged


def validate_assumptions(
    P: Potential,
    interval: tuple[float, float] = (-3.0, 3.0),
    n_samples: int = 4001,
) -> AssumptionReport:
    """Check admissibility of a potential by sampling on an interval.

    The interval must contain [-1, 2] so that both equilibria and the
    relevant excursions are visible.
    """
    lo, hi = interval
    if lo > -1.0 or hi < 2.0:
        raise ValueError("search interval must contain [-1, 2]")

    # coercivity: u F'(u) > 0 at and beyond the interval ends
    probes = np.array([lo, 2.0 * lo, hi, 2.0 * hi])
    coercive_ok = bool(np.all(probes * np.asarray(P.df(probes)) > 0.0))

    origin_ok = (
        abs(float(P.f(0.0))) < 1e-12
        and abs(float(P.df(0.0))) < 1e-12
        and float(P.d2f(0.0)) > 0.0
    )
    invaded_ok = (
        float(P.f(1.0)) < 0.0
        and abs(float(P.df(1.0))) < 1e-12
        and float(P.d2f(1.0)) > 0.0
    )

    spurious = tuple(
        r
        for r in _critical_points(P, interval, n_samples)
        if min(abs(r), abs(r - 1.0)) > 1e-8 and float(P.f(r)) <= 1e-12
    )

    return AssumptionReport(
        coercive_ok=coercive_ok,
        origin_ok=origin_ok,
        invaded_ok=invaded_ok,
        spurious_critical_points=spurious,
        search_interval=(float(lo), float(hi)),
    )


def select_epsilon(
    P: Potential,
    band_fracs: tuple[float, float] = (0.5, 1.5),
    rel_tol: float = 1e-6,
    n_check: int = 801,
) -> ThresholdBand:
    """Largest threshold epsilon keeping F'' inside a curvature band.

    The band is [lo_frac, hi_frac] * F''(0) and must hold on [-2 eps, 2 eps].
    The returned epsilon is found by bisection to the requested relative
    tolerance, shrunk slightly so the band holds strictly on a dense sample.
    """
    lo_frac, hi_frac = band_fracs
    beta = P.origin_curvature
    if beta <= 0.0:
        raise ValueError("potential must have positive curvature at the origin")
    if not lo_frac < 1.0 < hi_frac:
        raise ValueError("band fractions must straddle 1")
    curv_lo, curv_hi = lo_frac * beta, hi_frac * beta

    def feasible(eps: float) -> bool:
        u = np.linspace(-2.0 * eps, 2.0 * eps, n_check)
        c = np.asarray(P.d2f(u))
        return bool(np.all(c >= curv_lo) and np.all(c <= curv_hi))

    eps_lo = 1e-12
    if not feasible(eps_lo):
        raise ValueError("curvature band infeasible arbitrarily close to 0")
    eps_hi = 0.05
    while feasible(eps_hi):
        eps_lo = eps_hi
        eps_hi *= 2.0
        if eps_hi > 1e3:
            raise ValueError("curvature band never becomes binding")
    while eps_hi - eps_lo > rel_tol * eps_hi:
        mid = 0.5 * (eps_lo + eps_hi)
        if feasible(mid):
            eps_lo = mid
        else:
            eps_hi = mid
    return ThresholdBand(epsilon=eps_lo, curv_lo=curv_lo, curv_hi=curv_hi)


def derive_constants(
    P: Potential,
    band: ThresholdBand,
    amplitude_bound: float = 1.0,
    n_samples: int = 8001,
) -> DerivedConstants:
    """Compute the constants used by the weighted-energy inequality audits.

    amplitude_bound must dominate the post-transient sup of
    |u| + |u_x| + |u_xx| along the runs being audited.
    """
    B = float(amplitude_bound)
    if B <= 0.0:
        raise ValueError("amplitude bound must be positive")
    eps = band.epsilon

    u = np.linspace(-B, B, n_samples)
    d2 = np.asarray(P.d2f(u))
    diss_growth = max(0.0, -2.0 * float(d2.min()))

    lower_coeff = 0.5 * np.sqrt(band.curv_lo)
    decay_rate = 2.0 * band.curv_lo**2 / band.curv_hi

    density_bound = 0.5 * B * B + float(np.asarray(P.f(u)).max())
    source_coeff = diss_growth * B * B + decay_rate * density_bound

    # Horizon such that the reaction cannot push |u| past 2 eps from eps on
    # its own, and offset such that diffusion from beyond the front cannot
    # either: B erfc(offset / sqrt(4 * window)) = eps.
    df_sup = float(np.abs(np.asarray(P.df(u))).max())
    front_window = eps / (2.0 * df_sup)
    front_offset = float(np.sqrt(4.0 * front_window) * erfcinv(eps / B))

    return DerivedConstants(
        amplitude_bound=B,
        diss_growth=diss_growth,
        lower_coeff=float(lower_coeff),
        decay_rate=float(decay_rate),
        density_bound=float(density_bound),
        source_coeff=float(source_coeff),
        front_offset=front_offset,
        front_window=float(front_window),
    )


def heat_kernel_tail(x: float) -> float:
    """Complementary error function, exposed for the front-control check."""
    return float(erfc(x))
