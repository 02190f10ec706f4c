from __future__ import annotations

import json
from pathlib import Path
import subprocess
import sys

import pytest

from corpus import HEX_F, HEX_MAP
from morsemoduli.cli import main
from morsemoduli.io import complex_to_dict


def write(tmp: Path, name: str, obj) -> str:
    path = tmp / name
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


@pytest.fixture
def files(tmp_path):
    return {
        "interval": write(tmp_path, "i.json", {"maximal_simplices": [["a", "b"]]}),
        "simplex": write(tmp_path, "s.json", {"maximal_simplices": [["a", "b", "c"]]}),
        "f": write(tmp_path, "f.json", {"values": {"a": "3", "b": "1", "ab": "2"}}),
        "g": write(tmp_path, "g.json", {"values": {"a": "0", "b": "1", "ab": "2"}}),
        "single": write(tmp_path, "t1.json", {"nodes": [{"id": "b", "parent": None, "value": "1"}]}),
        "cherry": write(
            tmp_path,
            "t2.json",
            {"nodes": [
                {"id": "a", "parent": "r", "value": "0"},
                {"id": "b", "parent": "r", "value": "1"},
                {"id": "r", "parent": None, "value": "2"},
            ]},
        ),
        "bars1": write(tmp_path, "b1.json", {"bars": [{"id": "x", "birth": "0", "death": "2"}]}),
        "bars2": write(tmp_path, "b2.json", {"bars": [{"id": "x", "birth": "0", "death": "3"}]}),
        "map": write(
            tmp_path,
            "m.json",
            {
                "source": complex_to_dict(HEX_MAP.source),
                "target": complex_to_dict(HEX_MAP.target),
                "assignment": dict(HEX_MAP.assignment),
            },
        ),
        "hexf": write(tmp_path, "hf.json", {"values": {k: str(v) for k, v in HEX_F.items()}}),
    }


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), (json.loads(err) if err else None)


def test_check(capsys, files):
    code, out, _ = run(capsys, "check", "--complex", files["interval"], "--function", files["f"])
    assert code == 0
    assert out["morse"] and not out["mb"] and out["weak_mb"]
    assert out["signs"] == {"a<ab": "-", "b<ab": "+"}


def test_matching(capsys, files):
    code, out, _ = run(capsys, "matching", "--complex", files["interval"], "--function", files["f"])
    assert code == 0
    assert out["matching"] == [{"lower": "a", "upper": "ab"}]
    assert out["critical"]["0"] == ["b"]


def test_regions(capsys, files):
    code, out, _ = run(capsys, "regions", "--complex", files["interval"], "--morse-only", "--count")
    assert (code, out["count"]) == (0, 3)
    code, out, _ = run(capsys, "regions", "--complex", files["simplex"], "--facets-of-critical")
    assert code == 0
    assert len(out["facets"]) == 9 and out["essential_rank"] == 6


def test_matching_complex(capsys, files):
    code, out, _ = run(capsys, "matching-complex", "--complex", files["interval"])
    assert code == 0
    # counts are keyed by simplex dimension
    assert out["counts"] == {"0": 2}
    assert len(out["simplices"]) == 2


def test_merge_tree_and_barcode(capsys, files):
    code, out, _ = run(capsys, "merge-tree", "--complex", files["interval"], "--function", files["g"])
    assert code == 0
    assert {n["id"]: n["value"] for n in out["nodes"]} == {"a": "0", "b": "1", "ab": "2"}
    code, out, _ = run(capsys, "barcode", "--tree", files["cherry"])
    assert code == 0
    assert [(b["birth"], b["death"]) for b in out["bars"]] == [("0", "2"), ("1", "2")]


def test_tree_dist_budget_exit(capsys, files):
    code, out, _ = run(capsys, "tree-dist", "--tree", files["single"], "--tree", files["cherry"], "--max-steps", "2")
    # a positive bound is never certified, so the partial result comes with exit 3
    assert code == 3
    assert out["distance"]["radicands"] == ["0", "3/2"]
    assert float(out["distance"]["value"]) == pytest.approx(1.5 ** 0.5, abs=1e-11)
    assert out["exact"] is False
    assert len(out["path"]) == 3


def test_tree_dist_zero_is_exact(capsys, files):
    code, out, _ = run(capsys, "tree-dist", "--tree", files["cherry"], "--tree", files["cherry"])
    assert code == 0 and out["exact"] and out["distance"]["radicands"] == ["0"]


def test_bar_dist(capsys, files):
    code, out, _ = run(capsys, "bar-dist", "--barcode", files["bars1"], "--barcode", files["bars2"], "--max-steps", "1")
    assert code == 3 and out["distance"]["radicands"] == ["1"]
    code, out, _ = run(capsys, "bar-dist", "--barcode", files["bars1"], "--barcode", files["bars2"])
    assert code == 0 and out["exact"]


def test_map_commands(capsys, files):
    code, out, _ = run(capsys, "pushforward", "--map", files["map"], "--function", files["hexf"])
    assert code == 0
    assert (out["values"]["G"], out["values"]["P"], out["values"]["GP"]) == ("2", "2", "7/2")
    assert "morse" in out
    code, out, _ = run(capsys, "classify-map", "--map", files["map"])
    assert code == 0 and out["simplicial"] and not out["injective"]


def test_crossings(capsys, files):
    code, out, _ = run(
        capsys, "crossings", "--complex", files["interval"], "--function", files["f"], "--function", files["g"]
    )
    assert code == 0
    assert out["count"] == 2


@pytest.mark.parametrize(
    "argv, pointer",
    [
        (["check", "--function", "{f}"], "--complex"),
        (["check", "--complex", "{interval}", "--function", "{bars1}"], "--function#/bars"),
        (["tree-dist", "--tree", "{single}"], "--tree"),
        (["tree-dist", "--tree", "{single}", "--tree", "{cherry}", "--max-steps", "0"], "--max-steps"),
    ],
)
def test_validation_errors(capsys, files, argv, pointer):
    code, out, err = run(capsys, *[a.format(**files) for a in argv])
    assert code == 2 and out is None
    assert err["pointer"].startswith(pointer)
    assert err["error"]


def test_missing_file(capsys, files, tmp_path):
    code, _, err = run(capsys, "check", "--complex", str(tmp_path / "nope.json"), "--function", files["f"])
    assert code == 2 and err["pointer"].startswith("--complex")


def test_output_file_and_determinism(files, tmp_path):
    argv = ["regions", "--complex", files["simplex"], "--morse-only"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--output", str(a)]) == 0
    assert main(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "morsemoduli", "check", "--complex", files["interval"], "--function", files["g"]],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["mb"] is True
