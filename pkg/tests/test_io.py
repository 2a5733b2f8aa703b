"""Serialization round trips: CSV, JSON, TOML, manifests."""

import dataclasses
import json
import math

import numpy as np
import pytest

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from frontlab.io import (
    dumps_toml,
    load_toml,
    read_csv_columns,
    write_csv,
    write_json,
    write_manifest,
)


def test_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(7)
    cols = {
        "t": np.arange(5, dtype=float),
        "value": rng.standard_normal(5),
        "tiny": np.array([1e-300, -2.5e-17, 0.0, math.pi, 1.0 / 3.0]),
    }
    path = write_csv(tmp_path / "series.csv", cols)
    back = read_csv_columns(path)
    assert list(back) == list(cols)
    for name in cols:
        # repr floats survive the text round trip bit for bit
        assert np.array_equal(back[name], np.asarray(cols[name]))


def test_csv_layout(tmp_path):
    path = write_csv(tmp_path / "two.csv", {"x": [0.5], "u": [1.0]})
    lines = path.read_text().splitlines()
    assert lines[0] == "x,u"
    assert lines[1] == "0.5,1.0"


def test_csv_rejects_ragged_columns(tmp_path):
    with pytest.raises(ValueError, match="lengths differ"):
        write_csv(tmp_path / "bad.csv", {"a": [1.0, 2.0], "b": [3.0]})


def test_csv_empty_table(tmp_path):
    path = write_csv(tmp_path / "empty.csv", {"a": [], "b": []})
    back = read_csv_columns(path)
    assert list(back) == ["a", "b"]
    assert back["a"].size == 0


def test_write_json_handles_dataclasses_and_arrays(tmp_path):
    @dataclasses.dataclass
    class Row:
        name: str
        values: list

    payload = {
        "row": Row("demo", [1, 2]),
        "arr": np.linspace(0.0, 1.0, 3),
        "scalar": np.float64(0.25),
        "flag": np.bool_(True),
    }
    path = write_json(tmp_path / "out.json", payload)
    data = json.loads(path.read_text())
    assert data["row"] == {"name": "demo", "values": [1, 2]}
    assert data["arr"] == [0.0, 0.5, 1.0]
    assert data["scalar"] == 0.25
    assert data["flag"] is True


def test_write_json_rejects_unknown_types(tmp_path):
    with pytest.raises(TypeError, match="cannot serialize"):
        write_json(tmp_path / "bad.json", {"obj": object()})


def test_toml_round_trip(tmp_path):
    data = {
        "family": "cubic",
        "dx": 0.05,
        "T": 50.0,
        "workers": 2,
        "quiet": False,
        "band_fracs": [0.5, 1.5],
        "claims": ["speed", "profile"],
        "params": {"a": 0.25},
        "initial": {"kind": "sharp_step", "x0": 0.0},
    }
    text = dumps_toml(data)
    assert tomllib.loads(text) == data
    path = tmp_path / "run.toml"
    path.write_text(text)
    assert load_toml(path) == data


def test_toml_scalar_formatting():
    text = dumps_toml({"a": 1.0, "b": True, "c": "x\"y", "d": 3})
    parsed = tomllib.loads(text)
    assert parsed == {"a": 1.0, "b": True, "c": 'x"y', "d": 3}
    assert 'a = 1.0' in text


def test_toml_rejects_unsupported_values():
    with pytest.raises(TypeError, match="TOML scalar"):
        dumps_toml({"bad": object()})


def test_manifest_lists_sorted_relative_paths(tmp_path):
    f1 = write_csv(tmp_path / "b.csv", {"x": [1.0]})
    f2 = write_csv(tmp_path / "sub" / "a.csv", {"x": [2.0]})
    path = write_manifest(tmp_path, [f1, f2], extra={"kind": "demo"})
    data = json.loads(path.read_text())
    assert data["files"] == ["b.csv", "sub/a.csv"]
    assert data["kind"] == "demo"
