import json

import numpy as np

from winding_gate.report import SCHEMA, canonical, write_csv, write_json


def test_canonical_is_sorted_and_pinned():
    text = canonical({"b": 0.1, "a": [1, 2.5, 1 + 2j], "c": {"z": None, "y": True}})
    assert text == '{"a":[1,2.5,[1.0,2.0]],"b":0.10000000000000001,"c":{"y":true,"z":null}}'
    assert json.loads(text)["b"] == 0.1


def test_numpy_values_and_specials():
    text = canonical({"x": np.float64(-0.0), "n": np.int64(3), "v": np.array([1.5, np.nan]),
                      "i": float("inf")})
    assert json.loads(text) == {"i": "inf", "n": 3, "v": [1.5, None], "x": 0.0}


def test_write_json_atomic(tmp_path):
    path = tmp_path / "sub" / "report.json"
    write_json(path, {"value": 1.0})
    assert json.loads(path.read_text())["schema"] == SCHEMA
    assert [p.name for p in path.parent.iterdir()] == ["report.json"]


def test_failed_write_leaves_nothing(tmp_path):
    try:
        write_json(tmp_path / "r.json", {"bad": object()})
    except TypeError:
        pass
    assert list(tmp_path.iterdir()) == []


def test_write_csv(tmp_path):
    write_csv(tmp_path / "f.csv", ("x", "y", "re", "im"), [(0.1, 0.0, 1.0, -2.0)])
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines == ["x,y,re,im", "0.10000000000000001,0,1,-2"]
