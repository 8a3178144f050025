import json
import math

import pytest

from nulldist.errors import ScenarioError
from nulldist.expr import parse_expression
from nulldist.scenario import load_scenario, parse_point, parse_scenario, run, sample_points
from nulldist.base_geometry import Interval


def test_expression_arithmetic():
    f = parse_expression("t^2 + 1")
    assert f(3.0) == 10.0
    assert parse_expression("2^3^2")(0) == 512.0
    assert parse_expression("-t**2")(2) == -4.0
    assert parse_expression("min(t, 1) + max(t, 2, 3)")(0.5) == 3.5
    assert parse_expression("sqrt(t) * exp(0) + sin(pi) + cos(0)")(4) == pytest.approx(3.0)
    assert parse_expression("e")(0) == math.e


def test_expression_piecewise():
    f = parse_expression("piecewise(0, t - 1, 1, 0, t + 1)")
    assert f(-0.5) == -1.5 and f(0.5) == 0.0 and f(2.0) == 3.0


@pytest.mark.parametrize("bad", ["", "x + 1", "__import__('os')", "t.real", "foo(t)", "t +", "sqrt(1, 2)",
                                 "piecewise(0, 1)", "min(t)", "t if t else 1", "True"])
def test_expression_rejects(bad):
    with pytest.raises(ScenarioError):
        parse_expression(bad)


def test_expression_runtime_error_is_scenario_error():
    with pytest.raises(ScenarioError):
        parse_expression("1 / t")(0.0)


BASE = {"interval": [0, 2], "base": {"kind": "interval", "length": 4.0}}


def test_unknown_keys_are_named():
    with pytest.raises(ScenarioError, match="warpingg"):
        parse_scenario(dict(BASE, warpingg={}), "s.json")
    with pytest.raises(ScenarioError, match=r"s.json.lattice: unknown key 'ntime'"):
        parse_scenario(dict(BASE, lattice={"ntime": 3}), "s.json")
    with pytest.raises(ScenarioError, match="holes"):
        parse_scenario(dict(BASE, holes=[{"kind": "point", "t": 1, "x": 0, "r": 1}]), "s.json")


def test_invalid_values():
    with pytest.raises(ScenarioError):
        parse_scenario(dict(BASE, interval=[0]))
    with pytest.raises(ScenarioError):
        parse_scenario(dict(BASE, warping={"registry": "nope"}))
    with pytest.raises(ScenarioError):
        parse_scenario(dict(BASE, warping={"expr": "t + 1"}))
    with pytest.raises(ScenarioError):
        parse_scenario(dict(BASE, experiment={"kind": "converge"}))
    with pytest.raises(ScenarioError):
        parse_scenario(dict(BASE, experiment={"kind": "check", "suites": ["bogus"]}))
    with pytest.raises(ScenarioError):
        parse_point("1,a", Interval(4.0))
    with pytest.raises(ScenarioError):
        parse_point([1.0], Interval(4.0))


def test_sequence_scenario_loads():
    sc = parse_scenario({"interval": [0, 2], "base": {"kind": "circle", "circumference": 2 * math.pi},
                         "warping": {"registry": "collapse", "j_list": [2, 4, 8]},
                         "experiment": {"kind": "converge"}})
    assert sc.sequence is not None and sc.sequence.j_list == (2, 4, 8) and sc.spacetime is None


def test_expression_warping_scenario():
    sc = parse_scenario(dict(BASE, warping={"expr": "t^2 + 1", "fmin": 1, "fmax": 5}))
    assert sc.spacetime.warping(2.0) == 5.0


def test_sampling_is_seeded():
    raw = dict(BASE, sample={"kind": "random", "n": 5}, seed=7)
    a = sample_points(parse_scenario(raw))
    b = sample_points(parse_scenario(raw))
    assert a == b and len(a) == 5


def test_load_errors(tmp_path):
    with pytest.raises(ScenarioError, match="not found"):
        load_scenario(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ScenarioError, match="invalid JSON"):
        load_scenario(bad)


def test_run_is_deterministic(tmp_path):
    raw = dict(BASE, sample={"kind": "grid", "n_time": 3, "n_space": 3},
               lattice={"n_time": 41, "n_space": 41, "stencil_radius": 4},
               experiment={"kind": "check"})
    manifests = []
    for k in range(2):
        out = {"json": str(tmp_path / f"r{k}.json"), "csv": str(tmp_path / f"r{k}.csv")}
        rec = run(parse_scenario(raw), out)
        assert rec.passed
        manifests.append(rec.outputs)
    assert manifests[0] == manifests[1]
    assert (tmp_path / "r0.json").read_bytes() == (tmp_path / "r1.json").read_bytes()
    assert json.loads((tmp_path / "r0.json").read_text())["passed"]


def test_distance_scenario():
    rec = run(parse_scenario(dict(BASE, experiment={"kind": "distance", "p": [0, 0], "q": [0, 1]})))
    assert rec.result["value"] == pytest.approx(1.0)


def test_numbered_aliases_resolve():
    raw = {"interval": [0, 2], "base": {"kind": "circle", "circumference": 2 * math.pi},
           "experiment": {"kind": "converge", "limit": "dinfty53"}}
    sc = parse_scenario(dict(raw, warping={"registry": "example53", "j_list": [2, 4]}))
    assert sc.sequence.family == "collapse"
    sc = parse_scenario(dict(BASE, warping={"registry": "example51", "h0": 0.5, "j": 4}))
    assert sc.spacetime.warping.registry_id == "rising_bump"
