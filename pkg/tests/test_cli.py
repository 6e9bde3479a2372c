import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from hsr.cli import main
from hsr.geometry import load_scene, save_scene
from hsr.gen import gen_random, scene_from_2d

from conftest import tri2d

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def scene_file(tmp_path):
    path = tmp_path / "s.json"
    assert main(["gen", "random", "6", "3", "-o", str(path)]) == 0
    return path


def test_gen_prints_padded_size(tmp_path, capsys):
    path = tmp_path / "s.json"
    assert main(["gen", "random", "5", "1", "-o", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "8"
    assert load_scene(path).triangles == gen_random(5, 1).triangles


def test_seed_env_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv("HSR_SEED", "9")
    path = tmp_path / "s.json"
    main(["gen", "random", "4", "1", "-o", str(path)])
    assert load_scene(path).triangles == gen_random(4, 9).triangles


def test_viewshed_matches_oracle_bytes(scene_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["viewshed", str(scene_file), "-o", str(a)]) == 0
    assert main(["oracle", str(scene_file), "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert [t["id"] for t in doc["triangles"]] == list(range(6))


def test_svg_has_one_path_per_polygon(scene_file, tmp_path):
    out, svg = tmp_path / "v.json", tmp_path / "v.svg"
    main(["viewshed", str(scene_file), "-o", str(out), "--svg", str(svg)])
    doc = json.loads(out.read_text())
    root = ET.parse(svg).getroot()
    paths = root.findall(f"{SVG}path")
    visible = [p for p in paths if p.get("class") == "visible"]
    assert len(visible) == sum(len(t["visible"]) for t in doc["triangles"])
    assert [p.get("class") for p in paths].count("outline") == 1


def test_verify_reports_equal(scene_file, capsys):
    assert main(["verify", str(scene_file)]) == 0
    assert capsys.readouterr().out.splitlines() == ["EQUAL", "union sweep: clean"]


def test_stats_and_dump(scene_file, tmp_path, capsys):
    out = tmp_path / "st.json"
    assert main(["stats", str(scene_file), "-o", str(out), "--dump"]) == 0
    doc = json.loads(out.read_text())
    assert doc["n"] == 6 and doc["fitted_c"] > 0
    assert len(doc["per_level_complexities"]) == 4
    assert "|" in capsys.readouterr().err


def test_missing_file_exits_1(tmp_path):
    assert main(["viewshed", str(tmp_path / "nope.json")]) == 1


def test_malformed_scene_exits_1(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"viewpoint": [0, 0, 0], "triangles": [[[0, 0, 1], [1, 0, 1]]]}')
    assert main(["viewshed", str(path)]) == 1


def test_degenerate_scene_exits_2(tmp_path):
    path = tmp_path / "d.json"
    save_scene(scene_from_2d([tri2d((0, 0), (2, 0), (0, 2)), tri2d((1, 0), (3, 1), (2, 3))]), path)
    assert main(["viewshed", str(path)]) == 2


def test_depth_violation_exits_1(two_overlapping, tmp_path):
    s = two_overlapping
    path = tmp_path / "o.json"
    save_scene(s.with_triangles(s.triangles[::-1]), path)
    assert main(["viewshed", str(path)]) == 1


def test_console_script_runs(scene_file):
    r = subprocess.run(
        [sys.executable, "-m", "hsr.cli", "verify", str(scene_file)], capture_output=True, text=True
    )
    assert r.returncode == 0 and r.stdout.startswith("EQUAL")
