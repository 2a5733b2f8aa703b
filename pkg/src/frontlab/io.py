"""Artifact serialization: JSON reports, CSV series, TOML configs, manifests.

CSV files use a header row, comma separators and '.' decimals, with floats
written via repr so rerunning a deterministic experiment reproduces the
bytes exactly.  The TOML emitter covers the subset needed by run configs
(scalars, flat lists, nested tables) and round-trips through the stdlib
parser.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

__all__ = [
    "write_json",
    "write_csv",
    "read_csv_columns",
    "load_toml",
    "dumps_toml",
    "write_manifest",
]


def _jsonable(obj: Any):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return dataclasses.asdict(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path: str | Path, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(payload, indent=2, sort_keys=True, default=_jsonable)
    path.write_text(text + "\n")
    return path


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path: str | Path, columns: Mapping[str, Sequence]) -> Path:
    """Write named columns of equal length as a comma-separated table."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[k])) for k in names]
    lengths = {a.shape[0] for a in arrays}
    if len(lengths) > 1:
        raise ValueError(f"column lengths differ: {sorted(lengths)}")
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in zip(*arrays):
            writer.writerow([_cell(v) for v in row])
    return path


def read_csv_columns(path: str | Path) -> dict[str, np.ndarray]:
    """Read a write_csv table back as float arrays keyed by header name."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        names = next(reader)
        rows = list(reader)
    data = np.array(rows, dtype=float) if rows else np.empty((0, len(names)))
    return {name: data[:, i] for i, name in enumerate(names)}


def load_toml(path: str | Path) -> dict:
    with Path(path).open("rb") as fh:
        return tomllib.load(fh)


def _toml_scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        out = repr(v)
        # repr of integral floats already carries '.', infinities need names
        if out in ("inf", "-inf"):
            return out
        return out
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot emit {type(value).__name__} as TOML scalar")


def dumps_toml(data: Mapping[str, Any]) -> str:
    """Emit a nested mapping as TOML (scalars, flat lists, sub-tables)."""

    def emit(table: Mapping[str, Any], prefix: str, out: list[str]) -> None:
        subtables = []
        for key, value in table.items():
            if isinstance(value, Mapping):
                subtables.append((key, value))
            elif isinstance(value, (list, tuple, np.ndarray)):
                items = ", ".join(_toml_scalar(v) for v in value)
                out.append(f"{key} = [{items}]")
            else:
                out.append(f"{key} = {_toml_scalar(value)}")
        for key, value in subtables:
            name = f"{prefix}.{key}" if prefix else key
            out.append("")
            out.append(f"[{name}]")
            emit(value, name, out)

    lines: list[str] = []
    emit(data, "", lines)
    return "\n".join(lines).lstrip("\n") + "\n"


def write_manifest(out_dir: str | Path, files: Sequence[Path], extra: Mapping | None = None) -> Path:
    """Enumerate produced files (relative paths) in out_dir/manifest.json."""
    out_dir = Path(out_dir)
    payload = {
        "files": sorted(str(Path(f).relative_to(out_dir)) for f in files),
    }
    if extra:
        payload.update(extra)
    return write_json(out_dir / "manifest.json", payload)
