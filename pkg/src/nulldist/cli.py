"""Command line front end: nulldist distance | curve-length | converge | check | registry list.

Exit codes: 0 pass, 1 property failure, 2 input error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .base_geometry import Circle, Interval
from .convergence import SEQUENCES
from .curves import FAMILIES, curve_from_dict, fractal_family, null_length, sqrt_family_length, validate
from .errors import NullDistError, ScenarioError
from .lattice import LatticeConfig
from .scenario import (
    CHECK_SUITES,
    LIMIT_ALIASES,
    LIMITS,
    SEQUENCE_ALIASES,
    load_scenario,
    parse_point,
    parse_scenario,
    run,
)
from .spacetime import TIME_REGISTRY, WARPING_REGISTRY, WarpedSpacetime, time_function

EXIT_PASS, EXIT_PROPERTY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
FAMILY_TIME = {"sqrt_nonattained": "sqrt"}
BASE_KINDS = ("interval", "circle", "flat_torus", "round_sphere")


def _emit(obj: dict) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _lattice_from_args(args) -> LatticeConfig | None:
    if args.n_time is None and args.n_space is None and args.stencil is None:
        return None
    return LatticeConfig(args.n_time or 401, args.n_space or 401, args.stencil or 4)


def cmd_distance(args) -> int:
    if args.scenario:
        sc = load_scenario(args.scenario)
        if sc.spacetime is None:
            raise ScenarioError("distance queries need a single warping, not a sequence")
        st, base, tf, cfg = sc.spacetime, sc.base, sc.time_function, sc.lattice
    else:
        base = Interval(4.0)
        st, tf, cfg = WarpedSpacetime.product((0.0, 2.0), base), time_function("canonical"), None
    if args.tau:
        tf = time_function(args.tau)
    cfg = _lattice_from_args(args) or cfg
    from .engine import null_distance

    res = null_distance(st, parse_point(args.p, base), parse_point(args.q, base), tf, args.method, cfg)
    _emit(res.to_dict())
    return EXIT_PASS


def cmd_curve_length(args) -> int:
    if args.curve:
        if not args.scenario:
            raise ScenarioError("--curve needs --scenario for the spacetime to validate against")
        sc = load_scenario(args.scenario)
        curve = curve_from_dict(json.loads(Path(args.curve).read_text()))
        tf = time_function(args.tau) if args.tau else sc.time_function
        report = validate(curve, sc.spacetime)
        out = {"curve": curve.label or args.curve, "segments": len(curve), "validation": report}
    else:
        if args.family is None or args.i is None:
            raise ScenarioError("give --family and --i, or --curve with --scenario")
        from .curves import family_spacetime

        curve = fractal_family(args.family, args.i)
        tf = time_function(args.tau or FAMILY_TIME.get(args.family, "canonical"))
        report = validate(curve, family_spacetime(args.family))
        out = {"family": args.family, "i": args.i, "segments": len(curve), "validation": report}
        if args.family == "sqrt_nonattained" and tf.registry_id == "sqrt":
            out["formula"] = sqrt_family_length(args.i)
    out["time_function"] = tf.registry_id or tf.label
    out["null_length"] = null_length(curve, tf)
    _emit(out)
    return EXIT_PROPERTY if report else EXIT_PASS


def cmd_converge(args) -> int:
    if args.scenario:
        sc = load_scenario(args.scenario)
    else:
        if args.family is None:
            raise ScenarioError("give --family or --scenario")
        warping = {"registry": args.family, "j_list": [int(j) for j in args.j.split(",")]}
        if args.h0 is not None:
            warping["h0"] = args.h0
        raw = {
            "interval": [0.0, 2.0],
            "base": {"kind": "circle", "circumference": args.circumference},
            "warping": warping,
            "experiment": {"kind": "converge"},
        }
        if args.limit:
            raw["experiment"]["limit"] = args.limit
        if args.n_time or args.n_space or args.stencil:
            raw["lattice"] = {"n_time": args.n_time or 1025, "n_space": args.n_space or 256,
                              "stencil_radius": args.stencil or 8}
        sc = parse_scenario(raw, "<command line>")
    record = run(sc, {"json": args.out, "svg": args.plot})
    _emit({"record": record.to_dict(), "report": record.result})
    return EXIT_PASS if record.passed else EXIT_PROPERTY


def cmd_check(args) -> int:
    sc = load_scenario(args.scenario)
    if sc.experiment["kind"] != "check" or args.suite:
        raw = dict(sc.raw)
        raw["experiment"] = {"kind": "check", "suites": args.suite.split(",") if args.suite else list(CHECK_SUITES)}
        sc = parse_scenario(raw, args.scenario)
    record = run(sc, {"json": args.out, "csv": args.csv})
    _emit({"record": record.to_dict(), "summary": record.result})
    return EXIT_PASS if record.passed else EXIT_PROPERTY


def cmd_registry(args) -> int:
    _emit({
        "warpings": sorted(WARPING_REGISTRY),
        "time_functions": sorted(TIME_REGISTRY) + ["scaled"],
        "sequences": {name: LIMITS.get(name, "unit") for name in sorted(SEQUENCES)},
        "curve_families": sorted(FAMILIES),
        "bases": list(BASE_KINDS),
        "check_suites": list(CHECK_SUITES),
        "aliases": dict(sorted({**SEQUENCE_ALIASES, **LIMIT_ALIASES}.items())),
    })
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nulldist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def lattice_opts(p):
        p.add_argument("--n-time", type=int)
        p.add_argument("--n-space", type=int)
        p.add_argument("--stencil", type=int)

    d = sub.add_parser("distance", help="null distance between two points")
    d.add_argument("--scenario")
    d.add_argument("--p", required=True, help='comma separated "t,x"')
    d.add_argument("--q", required=True)
    d.add_argument("--method", default="auto", choices=["auto", "closed", "lattice", "profile"])
    d.add_argument("--tau", help="time function registry name")
    lattice_opts(d)
    d.set_defaults(func=cmd_distance)

    c = sub.add_parser("curve-length", help="null length of a curve family member or curve file")
    c.add_argument("--family", choices=sorted(FAMILIES))
    c.add_argument("--i", type=int)
    c.add_argument("--curve")
    c.add_argument("--scenario")
    c.add_argument("--tau")
    c.set_defaults(func=cmd_curve_length)

    v = sub.add_parser("converge", help="convergence table for a warping sequence")
    v.add_argument("--scenario")
    v.add_argument("--family", choices=sorted(SEQUENCES) + sorted(SEQUENCE_ALIASES))
    v.add_argument("--h0", type=float)
    v.add_argument("--j", default="2,4,8,16")
    v.add_argument("--limit", choices=["d0", "collapse", "unit"] + sorted(LIMIT_ALIASES))
    v.add_argument("--circumference", type=float, default=2 * math.pi)
    v.add_argument("--out")
    v.add_argument("--plot")
    lattice_opts(v)
    v.set_defaults(func=cmd_converge)

    k = sub.add_parser("check", help="property suites on a scenario")
    k.add_argument("--scenario", required=True)
    k.add_argument("--suite", help=f"comma separated subset of {','.join(CHECK_SUITES)}")
    k.add_argument("--out")
    k.add_argument("--csv")
    k.set_defaults(func=cmd_check)

    r = sub.add_parser("registry", help="registered warpings, time functions and families")
    r.add_argument("action", choices=["list"])
    r.set_defaults(func=cmd_registry)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NullDistError as exc:
        print(f"nulldist: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"nulldist: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
