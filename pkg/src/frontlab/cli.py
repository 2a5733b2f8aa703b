"""Command line front: wave computation, simulation runs, claim verification.

Exit status: 0 all requested work succeeded (and every claim passed),
1 at least one claim failed, 2 configuration errors, 3 numerical aborts.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .energetics import energy_core
from .evolution import Grid1D, SimulationAborted, make_initial_data, simulate
from .front import front_series
from .io import dumps_toml, load_toml, write_csv, write_json, write_manifest
from .potentials import make_potential, select_epsilon, validate_assumptions
from .verify import (
    default_suite,
    filter_suite,
    run_suite,
)
from .wave import find_wave_speed, speed_identity_check, normalize_profile

__all__ = [
    "ConfigError",
    "RunConfig",
    "build_parser",
    "cmd_wave",
    "cmd_simulate",
    "cmd_verify",
    "main",
]


class ConfigError(ValueError):
    """Raised for malformed configuration files or flag values."""


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs, loadable from TOML and flag overrides."""

    family: str = "cubic"
    params: Mapping[str, float] = field(default_factory=lambda: {"a": 0.25})
    band_fracs: tuple[float, float] = (0.5, 1.5)
    x_min: float = -60.0
    x_max: float = 80.0
    dx: float = 0.05
    dt: float = 1e-3
    T: float = 50.0
    frame: str = "lab"
    initial: Mapping = field(default_factory=lambda: {"kind": "sharp_step", "x0": 0.0})
    snapshot_dt: float = 0.5
    front_margin: float = 50.0
    out: str = ""
    experiments: tuple[str, ...] = ()
    claims: tuple[str, ...] = ()
    workers: int = 1
    seed: int = 0

    def to_mapping(self) -> dict:
        data = asdict(self)
        data["params"] = dict(self.params)
        data["initial"] = dict(self.initial)
        data["band_fracs"] = list(self.band_fracs)
        data["experiments"] = list(self.experiments)
        data["claims"] = list(self.claims)
        return data

    def dumps(self) -> str:
        return dumps_toml(self.to_mapping())

    @classmethod
    def from_mapping(cls, data: Mapping) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kw = dict(data)
        for name in ("band_fracs", "experiments", "claims"):
            if name in kw:
                kw[name] = tuple(kw[name])
        for name in ("params", "initial"):
            if name in kw:
                kw[name] = dict(kw[name])
        try:
            return cls(**kw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            import tomllib as toml
        except ModuleNotFoundError:
            import tomli as toml
        return cls.from_mapping(toml.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        return cls.from_mapping(load_toml(path))


def _resolve_out(config: RunConfig) -> Path | None:
    out = config.out or os.environ.get("FRONTLAB_OUT", "")
    return Path(out) if out else None


def _resolve_workers(config: RunConfig) -> int:
    env = os.environ.get("FRONTLAB_WORKERS", "")
    if config.workers != 1:
        return config.workers
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"FRONTLAB_WORKERS must be an integer, got {env!r}") from None
    return config.workers


def _resolve_frame(config: RunConfig, c_star: float | None = None) -> float:
    if config.frame == "lab":
        return 0.0
    if config.frame == "cstar":
        if c_star is None:
            raise ConfigError("frame 'cstar' needs the wave speed")
        return c_star
    try:
        return float(config.frame)
    except ValueError:
        raise ConfigError(f"frame must be lab, cstar or a number, got {config.frame!r}") from None


def _build_potential(config: RunConfig):
    try:
        P = make_potential(config.family, **dict(config.params))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    report = validate_assumptions(P)
    if not report.passed:
        raise ConfigError(f"potential fails admissibility checks: {report}")
    return P


# --------------------------------------------------------------------------
# subcommands

def cmd_wave(config: RunConfig, check_identity: Sequence[float] = ()) -> int:
    P = _build_potential(config)
    w = find_wave_speed(P)
    res = energy_core(w.y, w.h, w.c_star, 0.0, P, dv=w.hp)
    print(f"family {config.family} params {dict(config.params)}")
    print(f"c_star          {w.c_star:.12f}")
    print(f"decay ahead     {w.rates.ahead:.12f}")
    print(f"decay behind    {w.rates.behind:.12f}")
    print(f"fd residual     {w.residual:.3e}")
    print(f"energy at c*    {res:.3e}")
    rows = []
    for c in check_identity:
        lhs, rhs = speed_identity_check(P, w, c)
        rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
        rows.append({"c": c, "lhs": lhs, "rhs": rhs, "rel_mismatch": rel})
        print(f"identity c={c:g}: lhs={lhs:.9f} rhs={rhs:.9f} rel={rel:.3e}")

    out = _resolve_out(config)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "wave.json", {
            "family": config.family,
            "params": dict(config.params),
            "c_star": w.c_star,
            "shift": w.shift,
            "rates": w.rates,
            "fd_residual": w.residual,
            "energy_at_cstar": res,
            "identity_checks": rows,
        })
        write_csv(out / "profile.csv", {"y": w.y, "h": w.h})
        write_manifest(out, [out / "wave.json", out / "profile.csv"])
    return 0


def cmd_simulate(config: RunConfig) -> int:
    P = _build_potential(config)
    band = select_epsilon(P, band_fracs=config.band_fracs)
    initial = dict(config.initial)
    kind = initial.get("kind")
    if kind is None:
        raise ConfigError("initial data needs a 'kind'")
    needs_wave = config.frame == "cstar" or kind in (
        "exact_wave", "perturbed_wave", "dip_plateau",
    )
    wave = None
    if needs_wave:
        wave = normalize_profile(find_wave_speed(P), band)
        initial.setdefault("wave", wave)
    c = _resolve_frame(config, wave.c_star if wave is not None else None)

    grid = Grid1D.from_spacing(config.x_min, config.x_max, config.dx)
    try:
        initial.pop("kind")
        u0 = make_initial_data(kind, grid, **initial)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad initial data: {exc}") from None

    traj = simulate(u0, config.T, config.dt, c, P, band=band,
                    snapshot_dt=config.snapshot_dt,
                    front_margin=config.front_margin)
    series = front_series(traj, band)
    n = len(traj.snapshots)
    print(f"simulated T={config.T:g} frame={c:g} snapshots={n}")
    finite = series.finite()
    if finite.times.size:
        print(f"front at end    {finite.position[-1]:.6f}")

    out = _resolve_out(config)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        files = []
        p = out / "series.csv"
        write_csv(p, {"t": series.times, "xbar": series.position,
                      "Xbar": series.upper_position})
        files.append(p)
        snap_dir = out / "snapshots"
        snap_dir.mkdir(exist_ok=True)
        for i, s in enumerate(traj.snapshots):
            p = snap_dir / f"snap_{i:05d}.csv"
            write_csv(p, {"x": s.field.grid.coords(), "u": s.field.values,
                          "u_t": s.time_derivative})
            files.append(p)
        p = out / "run.json"
        write_json(p, {
            "family": config.family,
            "params": dict(config.params),
            "band_fracs": list(config.band_fracs),
            "grid": {"x_min": config.x_min, "x_max": config.x_max,
                     "dx": config.dx, "n": grid.n},
            "dt": config.dt,
            "T": config.T,
            "frame": c,
            "initial": {k: v for k, v in dict(config.initial).items() if k != "wave"},
            "snapshot_dt": config.snapshot_dt,
            "seed": config.seed,
            "epsilon": band.epsilon,
        })
        files.append(p)
        write_manifest(out, files)
    return 0


def cmd_verify(config: RunConfig) -> int:
    a = dict(config.params).get("a", 0.25)
    suite = default_suite(a=a)
    try:
        specs = filter_suite(
            suite,
            claims=list(config.claims) or None,
            names=list(config.experiments) or None,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not specs:
        raise ConfigError("no experiments match the requested names/claims")

    reports = run_suite(specs, workers=_resolve_workers(config))
    for rep in reports:
        for line in rep.lines():
            print(line)

    out = _resolve_out(config)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        files = []
        for rep in reports:
            p = out / f"report_{rep.name}.json"
            write_json(p, {
                "name": rep.name,
                "kind": rep.kind,
                "passed": rep.passed,
                "runtime": rep.runtime,
                "claims": rep.claims,
                "meta": rep.meta,
            })
            files.append(p)
        write_manifest(out, files)
    return 0 if all(r.passed for r in reports) else 1


# --------------------------------------------------------------------------
# parsing and dispatch

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=Path, help="TOML config file")
    sub.add_argument("--family", help="potential family name")
    sub.add_argument("--a", type=float, help="cubic asymmetry parameter")
    sub.add_argument("--x-min", type=float, dest="x_min")
    sub.add_argument("--x-max", type=float, dest="x_max")
    sub.add_argument("--dx", type=float)
    sub.add_argument("--dt", type=float)
    sub.add_argument("--T", type=float)
    sub.add_argument("--frame", help="lab, cstar, or a frame speed")
    sub.add_argument("--initial", help="initial data kind")
    sub.add_argument("--snapshot-dt", type=float, dest="snapshot_dt")
    sub.add_argument("--front-margin", type=float, dest="front_margin")
    sub.add_argument("--claims", help="comma separated claim names")
    sub.add_argument("--experiments", help="comma separated experiment names")
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--workers", type=int)
    sub.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frontlab",
        description="bistable front propagation: waves, runs and claim checks",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    wave = subs.add_parser("wave", help="compute the travelling wave")
    _add_common(wave)
    wave.add_argument("--check-identity", dest="check_identity",
                      help="comma separated frame speeds for the energy identity")
    sim = subs.add_parser("simulate", help="run the evolution")
    _add_common(sim)
    ver = subs.add_parser("verify", help="run claim experiments")
    _add_common(ver)
    return parser


def _split_list(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.config is not None:
        try:
            config = RunConfig.load(args.config)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot load {args.config}: {exc}") from None
    else:
        config = RunConfig()

    updates: dict = {}
    for name in ("family", "x_min", "x_max", "dx", "dt", "T", "frame",
                 "snapshot_dt", "front_margin", "out", "workers", "seed"):
        value = getattr(args, name, None)
        if value is not None:
            updates[name] = value
    if getattr(args, "a", None) is not None:
        updates["params"] = {**dict(config.params), "a": args.a}
    if getattr(args, "initial", None) is not None:
        updates["initial"] = {"kind": args.initial}
    if getattr(args, "claims", None) is not None:
        updates["claims"] = _split_list(args.claims)
    if getattr(args, "experiments", None) is not None:
        updates["experiments"] = _split_list(args.experiments)
    return replace(config, **updates) if updates else config


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "wave":
            speeds = ()
            if getattr(args, "check_identity", None):
                try:
                    speeds = tuple(float(s) for s in _split_list(args.check_identity))
                except ValueError:
                    raise ConfigError(
                        f"--check-identity expects numbers, got {args.check_identity!r}"
                    ) from None
            return cmd_wave(config, check_identity=speeds)
        if args.command == "simulate":
            return cmd_simulate(config)
        return cmd_verify(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SimulationAborted as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    except (ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
