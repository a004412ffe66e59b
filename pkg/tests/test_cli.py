import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from boundary_lab.cli import run
from boundary_lab.deck_group import limit_set_cover
from boundary_lab.domain import system_document
from boundary_lab.systems import named_system


@pytest.fixture
def cyclic_file(tmp_path):
    path = tmp_path / "cyclic.json"
    path.write_text(json.dumps(system_document(named_system("cyclic"))))
    return path


def _json(capsys, argv):
    assert run(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_classify_fixed_point_is_bounded(capsys, cyclic_file):
    doc = _json(capsys, ["classify", "--system", str(cyclic_file), "--theta", "0"])
    assert doc["type"] == "PointReport" and doc["result"]["radial_type"] == "bounded"


def test_classify_interval_midpoint(capsys):
    doc = _json(capsys, ["classify", "--system", "cyclic", "--theta", "1:2"])
    assert doc["params"]["theta"] == 1.5 and doc["result"]["radial_type"] == "escaping"


def test_limit_set_svg_matches_cover(tmp_path, cyclic_file):
    out = tmp_path / "lam.svg"
    assert run(["limit-set", "--system", str(cyclic_file), "--depth", "6", "--out", str(out)]) == 0
    root = ET.parse(out).getroot()
    deepest = [p for p in root.iter("{http://www.w3.org/2000/svg}path") if p.get("class") == "limit"]
    assert len(deepest) == len(limit_set_cover(named_system("cyclic"), 6).arcs) == 2


def test_limit_set_csv(tmp_path):
    out = tmp_path / "lam.csv"
    assert run(["limit-set", "--system", "pants", "--depth", "1", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "word,start,length"


def test_harmonic_monte_carlo(capsys):
    doc = _json(capsys, ["harmonic", "--annulus", "2", "--z", "1", "--mc", "100000"])
    assert abs(doc["result"]["value"] - 0.5) < 0.01


def test_harmonic_closed_form_on_fat_cantor(capsys):
    doc = _json(capsys, ["harmonic", "--system", "fat_cantor"])
    assert doc["result"]["value"] == 0.5


def test_depth_and_prime_end(capsys):
    doc = _json(capsys, ["depth", "--system", "cyclic", "--theta", "0", "--horizon", "8"])
    assert doc["result"]["d"] == [1] * 8
    doc = _json(capsys, ["prime-end", "--system", "parabolic", "--theta", "0"])
    assert doc["result"]["class"] == "parabolic"
    doc = _json(capsys, ["prime-end", "--system", "pants", "--quotient"])
    assert doc["result"]["count"] == 3


def test_true_crosscut_verdicts(capsys):
    assert _json(capsys, ["true-crosscut", "--system", "pants"])["result"]["verdict"] == "cantor_limit_set"
    doc = _json(capsys, ["true-crosscut", "--system", "dense", "--depth", "12"])
    assert doc["result"]["verdict"] == "full_circle" and doc["result"]["note"] == "no gap found up to depth 12"


def test_cover_lift_and_correspond(capsys, tmp_path):
    doc = _json(capsys, ["cover", "--annulus", "2", "--theta", str(math.pi / 2)])
    assert doc["result"]["verdict"] == "escaping"
    doc = _json(capsys, ["lift", "--annulus", "10", "--loops", "1"])
    assert doc["type"] == "LiftReport"
    doc = _json(capsys, ["correspond", "--annulus", "10", "--k", "2"])
    assert doc["result"]["passed"]
    svg = tmp_path / "c.svg"
    assert run(["cover", "--punctured", "--theta", "3.14159", "--out", str(svg)]) == 0
    ET.parse(svg)


def test_render_examples(tmp_path):
    for name in ("reef_point", "reef_interval", "fat_cantor", "pants"):
        out = tmp_path / f"{name}.svg"
        assert run(["render", "--system", name, "--out", str(out)]) == 0
        ET.parse(out)


def test_outputs_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(["harmonic", "--annulus", "2", "--mc", "2000", "--seed", "5", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_computation_errors_exit_nonzero(capsys):
    assert run(["prime-end", "--system", "cyclic", "--theta", "0"]) == 1
    assert "NotEscaping" in capsys.readouterr().err
    assert run(["classify", "--system", "nowhere.json", "--theta", "0"]) == 1
    assert run(["harmonic", "--annulus", "2", "--z", "5"]) == 1


def test_usage_errors_exit_two(capsys):
    for argv in (["frobnicate"], ["classify", "--system", "cyclic"], []):
        with pytest.raises(SystemExit) as exc:
            run(argv)
        assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "boundary_lab", "true-crosscut", "--system", "cyclic"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["verdict"] == "cantor_limit_set"
