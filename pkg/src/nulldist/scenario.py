"""Scenario files: parsing, registry resolution, dispatch and run records.

A scenario is a JSON object. Every key is checked against the schema below
before anything runs, so a misspelt key fails fast with its path.

    {
      "interval": [0, 2],
      "base": {"kind": "circle", "circumference": 6.283185307179586},
      "warping": {"registry": "rising_bump", "h0": 0.5, "j": 4}
                 | {"registry": "collapse", "j_list": [2, 4, 8]}
                 | {"expr": "t^2+1", "fmin": 1, "fmax": 5},
      "conformal": {"expr": "1+t^2"},
      "time_function": {"registry": "canonical"} | {"expr": "t+t^3/3"},
      "holes": [{"kind": "point", "t": 1, "x": 1}],
      "lattice": {"n_time": 401, "n_space": 401, "stencil_radius": 4},
      "sample": {"kind": "grid", "n_time": 8, "n_space": 8},
      "experiment": {"kind": "distance", "p": [0, -1], "q": [0, 1], "method": "lattice"},
      "seed": 0,
      "output": {"json": "out.json", "csv": "matrix.csv", "svg": "plot.svg"}
    }
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .base_geometry import Circle, Interval, RiemannianBase, base_from_dict
from .checks import encodes_causality_check, sandwich_violations
from .convergence import (
    SEQUENCES,
    WarpingSequence,
    d0_limit,
    default_config,
    collapse_limit,
    grid_sample,
    run_convergence_experiment,
    unit_product_limit,
)
from .engine import METHODS, null_distance
from .errors import NullDistError, ScenarioError
from .expr import parse_expression
from .lattice import LatticeConfig, lattice_distance_matrix
from .metric_analysis import FiniteMetricSpace, metric_axioms_check, midpoint_property_check
from .spacetime import (
    PointHole,
    SegmentHole,
    SpacetimePoint,
    TimeFunction,
    WarpedSpacetime,
    WARPING_ALIASES,
    WarpingFunction,
    time_function,
    warping_function,
)
from .svg import convergence_svg

TOP_KEYS = {"interval", "base", "warping", "conformal", "time_function", "holes", "lattice", "sample",
            "experiment", "seed", "output", "label"}
LATTICE_KEYS = {"n_time", "n_space", "stencil_radius", "refine", "extra_levels", "cone_levels"}
SAMPLE_KEYS = {"grid": {"n_time", "n_space"}, "points": {"points"}, "random": {"n"}}
EXPERIMENT_KEYS = {
    "distance": {"p", "q", "method"},
    "converge": {"limit", "tolerance"},
    "check": {"suites", "tolerance_factor"},
    "matrix": set(),
}
OUTPUT_KEYS = {"json", "csv", "svg"}
HOLE_KEYS = {"point": {"t", "x", "radius_cells"}, "segment": {"t", "x_lo", "x_hi", "radius_cells"}}
CHECK_SUITES = ("axioms", "midpoint", "causality", "sandwich")
SEQUENCE_ALIASES = {"sine": "uniform_sine", **WARPING_ALIASES}
LIMIT_ALIASES = {"dinfty53": "collapse"}
LIMITS = {"rising_bump": "d0", "falling_bump": "unit", "collapse": "collapse", "uniform_sine": "unit"}


@dataclass
class Scenario:
    """A fully parsed and validated scenario."""

    raw: dict
    interval: tuple[float, float]
    base: RiemannianBase
    time_function: TimeFunction
    lattice: LatticeConfig | None
    sample: dict
    experiment: dict
    outputs: dict
    seed: int = 0
    spacetime: WarpedSpacetime | None = None
    sequence: WarpingSequence | None = None
    label: str = ""

    @property
    def hash(self) -> str:
        return scenario_hash(self.raw)


@dataclass
class RunRecord:
    scenario_hash: str
    version: str
    seed: int
    wall_time: float
    outputs: dict[str, str] = field(default_factory=dict)
    result: dict = field(default_factory=dict)
    passed: bool = True

    def to_dict(self) -> dict:
        return {
            "scenario_hash": self.scenario_hash,
            "version": self.version,
            "seed": self.seed,
            "wall_time": self.wall_time,
            "outputs": self.outputs,
            "passed": self.passed,
        }


def scenario_hash(raw: dict) -> str:
    return hashlib.sha256(json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def _check_keys(obj: Any, allowed: set[str], path: str) -> dict:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{path}: expected an object")
    for key in obj:
        if key not in allowed:
            raise ScenarioError(f"{path}: unknown key {key!r}")
    return obj


def _number(v: Any, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{path}: expected a number, got {v!r}")
    return float(v)


def _parse_warping(cfg: dict, interval, path: str) -> tuple[WarpingFunction | None, WarpingSequence | None]:
    if "expr" in cfg:
        _check_keys(cfg, {"expr", "fmin", "fmax", "label"}, path)
        for k in ("fmin", "fmax"):
            if k not in cfg:
                raise ScenarioError(f"{path}: expression warpings need {k!r}")
        fn = parse_expression(cfg["expr"])
        return WarpingFunction(fn, _number(cfg["fmin"], f"{path}.fmin"), _number(cfg["fmax"], f"{path}.fmax"),
                               cfg.get("label", cfg["expr"])), None
    if "registry" not in cfg:
        raise ScenarioError(f"{path}: needs 'registry' or 'expr'")
    params = {k: v for k, v in cfg.items() if k != "registry"}
    name = cfg["registry"]
    if "j_list" in params:
        family = SEQUENCE_ALIASES.get(name, name)
        if family not in SEQUENCES:
            raise ScenarioError(f"{path}.registry: {name!r} is not a warping sequence")
        params["j_list"] = tuple(int(j) for j in params["j_list"])
        try:
            return None, SEQUENCES[family](**params)
        except TypeError as exc:
            raise ScenarioError(f"{path}: bad parameters for sequence {name!r}: {exc}") from None
    if name in ("quadratic", "random_trig") and "interval" not in params:
        params["interval"] = interval
    return warping_function(name, **params), None


def _parse_time(cfg: dict, path: str) -> TimeFunction:
    if "expr" in cfg:
        _check_keys(cfg, {"expr", "label"}, path)
        fn = parse_expression(cfg["expr"])
        return TimeFunction(fn, "smooth", cfg.get("label", cfg["expr"]))
    if "registry" not in cfg:
        raise ScenarioError(f"{path}: needs 'registry' or 'expr'")
    return time_function(cfg["registry"], **{k: v for k, v in cfg.items() if k != "registry"})


def _parse_holes(items: Any, path: str) -> list:
    if not isinstance(items, list):
        raise ScenarioError(f"{path}: expected a list")
    holes = []
    for k, h in enumerate(items):
        p = f"{path}[{k}]"
        kind = h.get("kind") if isinstance(h, dict) else None
        if kind not in HOLE_KEYS:
            raise ScenarioError(f"{p}.kind: expected 'point' or 'segment'")
        _check_keys(h, HOLE_KEYS[kind] | {"kind"}, p)
        args = {key: _number(v, f"{p}.{key}") for key, v in h.items() if key != "kind"}
        holes.append(PointHole(**args) if kind == "point" else SegmentHole(**args))
    return holes


def parse_scenario(raw: dict, source: str = "<scenario>") -> Scenario:
    """Validate a scenario dictionary and resolve its registry references."""
    _check_keys(raw, TOP_KEYS, source)
    try:
        interval = raw.get("interval", [0.0, 2.0])
        if not isinstance(interval, list) or len(interval) != 2:
            raise ScenarioError(f"{source}.interval: expected [t0, t1]")
        interval = (_number(interval[0], "interval[0]"), _number(interval[1], "interval[1]"))
        if "base" not in raw:
            raise ScenarioError(f"{source}: missing key 'base'")
        base = base_from_dict(_check_keys(raw["base"], {"kind", "length", "center", "complete", "circumference",
                                                         "l1", "l2", "radius"}, f"{source}.base"))
        warping, sequence = None, None
        if "warping" in raw:
            if not isinstance(raw["warping"], dict):
                raise ScenarioError(f"{source}.warping: expected an object")
            warping, sequence = _parse_warping(raw["warping"], interval, f"{source}.warping")
        tf = _parse_time(raw["time_function"], f"{source}.time_function") if "time_function" in raw else \
            time_function("canonical")
        conformal = None
        if "conformal" in raw:
            _check_keys(raw["conformal"], {"expr"}, f"{source}.conformal")
            conformal = parse_expression(raw["conformal"]["expr"])
        holes = _parse_holes(raw.get("holes", []), f"{source}.holes")
        lattice = None
        if "lattice" in raw:
            lat = _check_keys(raw["lattice"], LATTICE_KEYS, f"{source}.lattice")
            lattice = LatticeConfig(
                int(lat.get("n_time", 401)), int(lat.get("n_space", 401)), int(lat.get("stencil_radius", 4)),
                tuple(tuple(r) for r in lat.get("refine", ())), tuple(lat.get("extra_levels", ())),
                int(lat.get("cone_levels", 1)),
            )
        sample = dict(raw.get("sample", {"kind": "grid", "n_time": 8, "n_space": 8}))
        if sample.get("kind") not in SAMPLE_KEYS:
            raise ScenarioError(f"{source}.sample.kind: expected one of {sorted(SAMPLE_KEYS)}")
        _check_keys(sample, SAMPLE_KEYS[sample["kind"]] | {"kind"}, f"{source}.sample")
        experiment = dict(raw.get("experiment", {"kind": "matrix"}))
        if experiment.get("kind") not in EXPERIMENT_KEYS:
            raise ScenarioError(f"{source}.experiment.kind: expected one of {sorted(EXPERIMENT_KEYS)}")
        _check_keys(experiment, EXPERIMENT_KEYS[experiment["kind"]] | {"kind"}, f"{source}.experiment")
        if experiment["kind"] == "distance":
            for k in ("p", "q"):
                if k not in experiment:
                    raise ScenarioError(f"{source}.experiment: missing key {k!r}")
            if experiment.get("method", "auto") not in METHODS:
                raise ScenarioError(f"{source}.experiment.method: expected one of {METHODS}")
        if experiment["kind"] == "converge" and sequence is None:
            raise ScenarioError(f"{source}.warping: converge experiments need a sequence (registry with j_list)")
        if experiment["kind"] == "check":
            for s in experiment.get("suites", CHECK_SUITES):
                if s not in CHECK_SUITES:
                    raise ScenarioError(f"{source}.experiment.suites: unknown suite {s!r}")
        outputs = dict(_check_keys(raw.get("output", {}), OUTPUT_KEYS, f"{source}.output"))
        seed = int(raw.get("seed", 0))
        spacetime = None
        if sequence is None:
            spacetime = WarpedSpacetime(interval, base, warping, conformal, holes, raw.get("label", ""))
    except ScenarioError:
        raise
    except NullDistError as exc:
        raise ScenarioError(f"{source}: {exc}") from None
    return Scenario(raw, interval, base, tf, lattice, sample, experiment, outputs, seed, spacetime, sequence,
                    raw.get("label", ""))


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ScenarioError(f"{path}: file not found") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_scenario(raw, str(path))


def parse_point(value: Any, base: RiemannianBase) -> SpacetimePoint:
    """(t, x...) from a list or a comma separated string."""
    if isinstance(value, str):
        try:
            value = [float(v) for v in value.split(",")]
        except ValueError:
            raise ScenarioError(f"cannot read point {value!r}") from None
    if not isinstance(value, (list, tuple)) or len(value) != 1 + base.dim:
        raise ScenarioError(f"point {value!r} needs t and {base.dim} base coordinate(s)")
    return SpacetimePoint(float(value[0]), tuple(float(v) for v in value[1:]))


def sample_points(scenario: Scenario) -> list[SpacetimePoint]:
    s = scenario.sample
    base = scenario.base
    if s["kind"] == "points":
        return [parse_point(p, base) for p in s["points"]]
    if s["kind"] == "grid":
        if not isinstance(base, (Circle, Interval)):
            raise ScenarioError("grid samples need an interval or circle base; use 'random' or 'points'")
        return grid_sample(base, int(s.get("n_time", 8)), int(s.get("n_space", 8)), scenario.interval)
    rng = np.random.default_rng(scenario.seed)
    n = int(s.get("n", 16))
    t0, t1 = scenario.interval
    ts = rng.uniform(t0, t1, n)
    xs = base.sample(n, scenario.seed)
    return [SpacetimePoint(float(t), x) for t, x in zip(ts, xs)]


def matrix_csv(points: list[SpacetimePoint], M: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["point"] + [f"p{k}" for k in range(len(points))])
    for k, row in enumerate(M):
        w.writerow([";".join(repr(c) for c in points[k].as_tuple())] + [repr(float(v)) for v in row])
    return buf.getvalue()


def _limit_for(sequence: WarpingSequence, name: str | None):
    name = LIMIT_ALIASES.get(name, name) or LIMITS.get(sequence.family, "unit")
    if name == "d0":
        return d0_limit(sequence.params.get("h0", 0.5))
    if name == "collapse":
        return collapse_limit()
    if name == "unit":
        return unit_product_limit()
    raise ScenarioError(f"unknown limit {name!r}")


def _lattice_factory(scenario: Scenario, family: str):
    lat = scenario.lattice
    if lat is None:
        return None
    if lat.refine:
        return lat
    return lambda j: default_config(family, j, lat.n_space, lat.n_time, lat.stencil_radius)


def run_check(scenario: Scenario) -> dict:
    """Property suites on the scenario's lattice matrix."""
    st = scenario.spacetime
    tf = scenario.time_function
    if st is None:
        raise ScenarioError(f"{scenario.label or '<scenario>'}: check needs a single warping, not a sequence")
    points = sample_points(scenario)
    M, lat = lattice_distance_matrix(st, tf, points, scenario.lattice)
    factor = float(scenario.experiment.get("tolerance_factor", 3.0))
    tol = factor * lat.tolerance
    space = FiniteMetricSpace(points, M, scenario.label, lat.tolerance)
    results = {}
    for suite in scenario.experiment.get("suites", CHECK_SUITES):
        if suite == "axioms":
            results[suite] = metric_axioms_check(space, 2 * lat.tolerance)
        elif suite == "midpoint":
            r = midpoint_property_check(space, lat, lat.tolerance)
            results[suite] = {k: v for k, v in r.items() if k != "failures"} | {"failures": len(r["failures"])}
        elif suite == "causality":
            pairs = [(points[a], points[b]) for a in range(len(points)) for b in range(a + 1, len(points))]
            dists = [M[a, b] for a in range(len(points)) for b in range(a + 1, len(points))]
            r = encodes_causality_check(st, tf, pairs, tol, dists, margin=tol)
            results[suite] = {k: v for k, v in r.items() if k != "violators"} | {"violators": len(r["violators"])}
        elif suite == "sandwich":
            if tf.registry_id != "canonical" or st.holes:
                results[suite] = {"skipped": "bracket holds for canonical time without holes", "passed": True}
            else:
                v = sandwich_violations(st, points, M, lat.tolerance)
                results[suite] = {"violations": len(v), "passed": not v}
    return {"suites": results, "lattice_tolerance": lat.tolerance, "sample_size": len(points),
            "passed": all(r["passed"] for r in results.values()), "matrix": M, "points": points}


def run(scenario: Scenario, overrides: dict | None = None) -> RunRecord:
    """Dispatch the scenario's experiment and write its outputs.

    Written files contain no timing data, so reruns with the same scenario
    and seed produce byte-identical outputs.
    """
    outputs = dict(scenario.outputs)
    outputs.update({k: v for k, v in (overrides or {}).items() if v})
    start = time.perf_counter()
    kind = scenario.experiment["kind"]
    files: dict[str, str] = {}
    matrix = points = None
    passed = True
    try:
        if kind == "distance":
            st = scenario.spacetime
            p = parse_point(scenario.experiment["p"], scenario.base)
            q = parse_point(scenario.experiment["q"], scenario.base)
            res = null_distance(st, p, q, scenario.time_function, scenario.experiment.get("method", "auto"),
                                scenario.lattice)
            result = res.to_dict()
        elif kind == "matrix":
            points = sample_points(scenario)
            matrix, lat = lattice_distance_matrix(scenario.spacetime, scenario.time_function, points,
                                                  scenario.lattice)
            result = {"sample_size": len(points), "lattice_tolerance": lat.tolerance, "method": "Lattice",
                      "max_entry": float(matrix.max()) if matrix.size else 0.0}
        elif kind == "converge":
            seq = scenario.sequence
            report = run_convergence_experiment(
                seq, _limit_for(seq, scenario.experiment.get("limit")), scenario.base,
                sample_points(scenario) if "sample" in scenario.raw else None,
                _lattice_factory(scenario, seq.family), float(scenario.experiment.get("tolerance", 5e-2)),
                scenario.interval,
            )
            result = report.to_dict()
            for row in result["rows"]:
                row.pop("runtime", None)
            passed = all(r.sandwich_violations == 0 and not r.envelope_violations for r in report.rows)
            if outputs.get("svg"):
                Path(outputs["svg"]).write_text(convergence_svg(report))
                files["svg"] = outputs["svg"]
        else:
            check = run_check(scenario)
            matrix, points = check.pop("matrix"), check.pop("points")
            result = check
            passed = check["passed"]
    except ScenarioError:
        raise
    except NullDistError as exc:
        exc.args = (f"scenario {scenario.label or scenario.hash[:12]}: {exc}",)
        raise
    if outputs.get("json"):
        Path(outputs["json"]).write_text(json.dumps(result, indent=2, sort_keys=True) + "\n")
        files["json"] = outputs["json"]
    if outputs.get("csv") and matrix is not None:
        Path(outputs["csv"]).write_text(matrix_csv(points, matrix))
        files["csv"] = outputs["csv"]
    manifest = {k: hashlib.sha256(Path(v).read_bytes()).hexdigest() for k, v in files.items()}
    return RunRecord(scenario.hash, __version__, scenario.seed, time.perf_counter() - start, manifest, result,
                     passed)
