import json
import math

import pytest

from nulldist.cli import main
from nulldist.curves import sqrt_family_length


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_registry_list(capsys):
    code, out, _ = _run(capsys, ["registry", "list"])
    data = json.loads(out)
    assert code == 0
    assert "rising_bump" in data["warpings"] and "sqrt_nonattained" in data["curve_families"]
    assert data["sequences"]["collapse"] == "collapse"


def test_distance_closed_form(capsys):
    code, out, _ = _run(capsys, ["distance", "--p", "0,0", "--q", "0,2"])
    assert code == 0 and json.loads(out)["value"] == pytest.approx(2.0)


def test_distance_lattice(capsys):
    code, out, _ = _run(capsys, ["distance", "--p", "0,0", "--q", "0,1", "--method", "lattice",
                                 "--n-time", "41", "--n-space", "41"])
    assert code == 0 and json.loads(out)["value"] >= 1.0 - 1e-12


def test_input_errors_exit_2(capsys):
    assert _run(capsys, ["distance", "--p", "0,a", "--q", "0,1"])[0] == 2
    assert _run(capsys, ["distance", "--p", "0,0", "--q", "0,9"])[0] == 2
    assert _run(capsys, ["check", "--scenario", "/nonexistent.json"])[0] == 2
    assert _run(capsys, ["curve-length", "--family", "timelike_2"])[0] == 2
    assert _run(capsys, ["curve-length", "--family", "timelike_2", "--i", "0"])[0] == 2


def test_unknown_key_names_path(capsys, tmp_path):
    sc = tmp_path / "s.json"
    sc.write_text(json.dumps({"base": {"kind": "interval", "length": 4}, "warpingg": {}}))
    code, _, err = _run(capsys, ["check", "--scenario", str(sc)])
    assert code == 2 and "warpingg" in err


def test_check_on_sequence_scenario_is_input_error(capsys, tmp_path):
    sc = tmp_path / "s.json"
    sc.write_text(json.dumps({
        "interval": [0, 2],
        "base": {"kind": "circle", "circumference": 2 * math.pi},
        "warping": {"registry": "sine", "j_list": [4]},
        "experiment": {"kind": "converge"},
    }))
    code, _, err = _run(capsys, ["check", "--scenario", str(sc)])
    assert code == 2 and "sequence" in err


def test_curve_length_sqrt_family(capsys):
    code, out, _ = _run(capsys, ["curve-length", "--family", "sqrt_nonattained", "--i", "6"])
    data = json.loads(out)
    assert code == 0 and data["validation"] == []
    assert data["null_length"] == pytest.approx(sqrt_family_length(6), abs=1e-12)


def test_curve_length_file(capsys, tmp_path):
    curve = {"segments": [{"direction": "FutureNull", "t_start": 0, "t_end": 1, "base_start": [0], "base_end": [1]},
                          {"direction": "PastNull", "t_start": 1, "t_end": 0.5, "base_start": [1],
                           "base_end": [1.5]}]}
    sc = tmp_path / "s.json"
    sc.write_text(json.dumps({"interval": [0, 2], "base": {"kind": "interval", "length": 4}}))
    cf = tmp_path / "c.json"
    cf.write_text(json.dumps(curve))
    code, out, _ = _run(capsys, ["curve-length", "--curve", str(cf), "--scenario", str(sc)])
    assert code == 0 and json.loads(out)["null_length"] == pytest.approx(1.5)
    curve["segments"][1]["base_end"] = [1.9]
    cf.write_text(json.dumps(curve))
    code, out, _ = _run(capsys, ["curve-length", "--curve", str(cf), "--scenario", str(sc)])
    assert code == 1 and json.loads(out)["validation"]


def test_check_scenario_pass_and_property_failure(capsys, tmp_path):
    good = {"interval": [0, 2], "base": {"kind": "interval", "length": 4},
            "lattice": {"n_time": 41, "n_space": 41, "stencil_radius": 4},
            "sample": {"kind": "grid", "n_time": 3, "n_space": 3}}
    sc = tmp_path / "good.json"
    sc.write_text(json.dumps(good))
    assert _run(capsys, ["check", "--scenario", str(sc), "--out", str(tmp_path / "o.json")])[0] == 0
    bad = dict(good, interval=[-1, 1], time_function={"registry": "step"},
               sample={"kind": "points", "points": [[-0.2, 0.0], [0.6, 0.0]]})
    sc.write_text(json.dumps(bad))
    code, out, _ = _run(capsys, ["check", "--scenario", str(sc), "--suite", "midpoint"])
    assert code == 1 and not json.loads(out)["summary"]["suites"]["midpoint"]["passed"]


def test_converge_small(capsys, tmp_path):
    sc = {"interval": [0, 2], "base": {"kind": "circle", "circumference": 2 * math.pi},
          "warping": {"registry": "sine", "j_list": [4, 8]},
          "lattice": {"n_time": 121, "n_space": 64, "stencil_radius": 4},
          "sample": {"kind": "grid", "n_time": 3, "n_space": 4},
          "experiment": {"kind": "converge", "tolerance": 1.0}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(sc))
    svg = tmp_path / "c.svg"
    code, out, _ = _run(capsys, ["converge", "--scenario", str(path), "--plot", str(svg)])
    assert code == 0
    assert json.loads(out)["report"]["verdict"] == "ConvergesToLimit"
    assert svg.read_text().startswith("<svg")
