import json
import shutil
import subprocess
from fractions import Fraction as F

import pytest

from shapes import g2h, g2v
from flatsurgery.cli import main, parse_scalar
from flatsurgery.equivalence import translation_equivalent
from flatsurgery.scenarios import horizontal_star_spec
from flatsurgery.serialize import surface_from_json, surface_to_json


@pytest.fixture
def g2v_file(tmp_path):
    p = tmp_path / "g2v.json"
    p.write_text(json.dumps(surface_to_json(g2v())))
    return p


@pytest.fixture
def star_file(tmp_path):
    p = tmp_path / "star.json"
    p.write_text(json.dumps(horizontal_star_spec(2).to_json()))
    return p


def test_parse_scalar():
    assert parse_scalar("3/4") == F(3, 4)
    x = parse_scalar("1 + sqrt(2)/2")
    assert float(x) == pytest.approx(1 + 2 ** 0.5 / 2)
    assert parse_scalar("sqrt(8)") == 2 * parse_scalar("sqrt(2)")


def test_build_and_overwrite(tmp_path, star_file):
    out = tmp_path / "s.json"
    assert main(["build", "--star", str(star_file), "-o", str(out)]) == 0
    s = surface_from_json(json.loads(out.read_text()))
    assert translation_equivalent(s, g2h())
    assert main(["build", "--star", str(star_file), "-o", str(out)]) == 1
    assert main(["build", "--star", str(star_file), "-o", str(out), "--force"]) == 0


def test_analyze(g2v_file, capsys):
    assert main(["analyze", str(g2v_file)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["genus"] == 2 and data["area_str"] == "2"
    assert data["periods"]["class"] == "lattice"


def test_cylinders_dot(g2v_file, tmp_path, capsys):
    dot = tmp_path / "g.dot"
    assert main(["cylinders", str(g2v_file), "--dot", str(dot)]) == 0
    text = dot.read_text()
    assert text.count("->") == 4
    data = json.loads(capsys.readouterr().out)
    assert len(data["cylinders"]) == 3


def test_deform_errors(g2v_file, capsys):
    assert main(["deform", str(g2v_file), "--shear", "nonexistent=1"]) == 1
    assert "unknown cylinder" in capsys.readouterr().err
    assert main(["deform", str(g2v_file), "--bogus"]) == 1


def test_deform_shear_round_trip(g2v_file, tmp_path):
    out = tmp_path / "d.json"
    assert main(["deform", str(g2v_file), "--shear", "0=1/2", "-o", str(out)]) == 0
    s = surface_from_json(json.loads(out.read_text()))
    assert s.area == 2 and not translation_equivalent(s, g2v())


def test_export_round_trip(g2v_file, tmp_path):
    out = tmp_path / "e.json"
    assert main(["export", str(g2v_file), "--format", "json", "-o", str(out)]) == 0
    assert translation_equivalent(surface_from_json(json.loads(out.read_text())), g2v())
    svg = tmp_path / "e.svg"
    assert main(["export", str(g2v_file), "--format", "svg", "-o", str(svg)]) == 0
    assert svg.read_text().startswith("<svg")


def test_scenario_chains(tmp_path):
    assert main(["scenario", "--name", "chains", "-o", str(tmp_path / "r")]) == 0
    report = json.loads((tmp_path / "r" / "report.json").read_text())
    assert report["verdict"] == "pass"


@pytest.mark.skipif(shutil.which("flatsurgery") is None, reason="console script not installed")
def test_console_script(g2v_file):
    r = subprocess.run(["flatsurgery", "analyze", str(g2v_file)], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["genus"] == 2
