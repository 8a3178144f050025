"""Piecewise causal curves, the null length functional and explicit curve families.

Curves are stored by their breakpoints; the null length is the sum of
|tau(end) - tau(start)| over the monotone pieces, so nothing is integrated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .base_geometry import BasePoint, Interval, _point
from .errors import ConstructionError, DomainError
from .spacetime import (
    CAUSAL_TOL,
    PointHole,
    SegmentHole,
    SpacetimePoint,
    TimeFunction,
    WarpedSpacetime,
)

CONTINUITY_TOL = 1e-12
MAX_FAMILY_INDEX = 30


class Direction(enum.Enum):
    FUTURE_NULL = "FutureNull"
    PAST_NULL = "PastNull"
    FUTURE_TIMELIKE = "FutureTimelike"
    PAST_TIMELIKE = "PastTimelike"

    @property
    def future(self) -> bool:
        return self in (Direction.FUTURE_NULL, Direction.FUTURE_TIMELIKE)

    @property
    def null(self) -> bool:
        return self in (Direction.FUTURE_NULL, Direction.PAST_NULL)


@dataclass(frozen=True)
class CausalSegment:
    """One monotone causal piece running along a minimizing base geodesic."""

    direction: Direction
    t_start: float
    t_end: float
    base_start: BasePoint
    base_end: BasePoint
    orientation: int = 1

    @property
    def start(self) -> SpacetimePoint:
        return SpacetimePoint(self.t_start, self.base_start)

    @property
    def end(self) -> SpacetimePoint:
        return SpacetimePoint(self.t_end, self.base_end)

    def reversed(self) -> "CausalSegment":
        flip = {
            Direction.FUTURE_NULL: Direction.PAST_NULL,
            Direction.PAST_NULL: Direction.FUTURE_NULL,
            Direction.FUTURE_TIMELIKE: Direction.PAST_TIMELIKE,
            Direction.PAST_TIMELIKE: Direction.FUTURE_TIMELIKE,
        }
        return CausalSegment(flip[self.direction], self.t_end, self.t_start, self.base_end, self.base_start,
                             -self.orientation)


def classify(spacetime: WarpedSpacetime, p: SpacetimePoint, q: SpacetimePoint) -> Direction:
    """Direction of the causal piece from p to q; raises if p, q are not causally related."""
    d = spacetime.base.distance(p.x, q.x)
    r = spacetime.causal_reach(p.t, q.t)
    if q.t == p.t and d == 0:
        raise ConstructionError("degenerate segment with coinciding endpoints")
    if d > r + CAUSAL_TOL:
        raise ConstructionError(f"points {p} and {q} are not causally related (d={d}, reach={r})")
    null = abs(d - r) <= CAUSAL_TOL
    if q.t > p.t:
        return Direction.FUTURE_NULL if null else Direction.FUTURE_TIMELIKE
    return Direction.PAST_NULL if null else Direction.PAST_TIMELIKE


def make_segment(spacetime: WarpedSpacetime, p: SpacetimePoint, q: SpacetimePoint) -> CausalSegment:
    return CausalSegment(classify(spacetime, p, q), p.t, q.t, p.x, q.x)


@dataclass(frozen=True)
class PiecewiseCausalCurve:
    """Concatenation of causal segments; exact breakpoints kept when known.

    exact holds the integer breakpoint data of the recursive families, so
    coordinates are rounded only when evaluated.
    """

    segments: tuple[CausalSegment, ...]
    exact: "ExactVertices | None" = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        if not self.segments:
            raise ConstructionError("a curve needs at least one segment")

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def start(self) -> SpacetimePoint:
        return self.segments[0].start

    @property
    def end(self) -> SpacetimePoint:
        return self.segments[-1].end

    def vertices(self) -> list[SpacetimePoint]:
        return [self.segments[0].start] + [s.end for s in self.segments]

    def restrict(self, a: int, b: int) -> "PiecewiseCausalCurve":
        """The sub-curve between breakpoint indices a < b."""
        if not 0 <= a < b <= len(self.segments):
            raise DomainError(f"invalid breakpoint range [{a}, {b}]")
        return PiecewiseCausalCurve(self.segments[a:b], label=self.label)

    def reversed(self) -> "PiecewiseCausalCurve":
        return PiecewiseCausalCurve(tuple(s.reversed() for s in reversed(self.segments)), label=self.label)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "segments": [
                {"direction": s.direction.value, "t_start": s.t_start, "t_end": s.t_end,
                 "base_start": list(s.base_start.coords), "base_end": list(s.base_end.coords)}
                for s in self.segments
            ],
        }


def curve_from_vertices(spacetime: WarpedSpacetime, vertices: Sequence[SpacetimePoint], label: str = "",
                        exact=None) -> PiecewiseCausalCurve:
    vs = list(vertices)
    if len(vs) < 2:
        raise ConstructionError("a curve needs at least two vertices")
    return PiecewiseCausalCurve(tuple(make_segment(spacetime, a, b) for a, b in zip(vs[:-1], vs[1:])), exact, label)


def curve_from_dict(data: dict) -> PiecewiseCausalCurve:
    segs = []
    for s in data["segments"]:
        segs.append(CausalSegment(Direction(s["direction"]), float(s["t_start"]), float(s["t_end"]),
                                  _point(s["base_start"]), _point(s["base_end"])))
    return PiecewiseCausalCurve(tuple(segs), label=data.get("label", ""))


def null_length(curve: PiecewiseCausalCurve, tf: TimeFunction) -> float:
    """Sum of |tau(end) - tau(start)| over the pieces (correctly rounded sum)."""
    return math.fsum(abs(tf.increment(s.t_start, s.t_end)) for s in curve.segments)


def validate(curve: PiecewiseCausalCurve, spacetime: WarpedSpacetime) -> list[dict]:
    """Violated invariants per segment; an empty list means the curve is admissible."""
    report = []
    base = spacetime.base
    for k, s in enumerate(curve.segments):
        try:
            spacetime.validate(s.start)
            spacetime.validate(s.end)
        except DomainError as exc:
            report.append({"segment": k, "problem": "domain", "detail": str(exc)})
            continue
        d = base.distance(s.base_start, s.base_end)
        r = spacetime.causal_reach(s.t_start, s.t_end)
        if s.direction.future and not s.t_end > s.t_start:
            report.append({"segment": k, "problem": "time orientation", "detail": "future piece not increasing"})
        if not s.direction.future and not s.t_end < s.t_start:
            report.append({"segment": k, "problem": "time orientation", "detail": "past piece not decreasing"})
        if s.direction.null and abs(d - r) > CAUSAL_TOL:
            report.append({"segment": k, "problem": "not null", "detail": f"d_sigma={d}, reach={r}"})
        if not s.direction.null and not d < r:
            report.append({"segment": k, "problem": "not timelike", "detail": f"d_sigma={d}, reach={r}"})
        if spacetime.holes and _meets_hole(spacetime, s):
            report.append({"segment": k, "problem": "hole", "detail": "segment passes through a removed set"})
        if k + 1 < len(curve.segments):
            n = curve.segments[k + 1]
            gap = max(abs(n.t_start - s.t_end), base.distance(n.base_start, s.base_end))
            if gap > CONTINUITY_TOL:
                report.append({"segment": k, "problem": "discontinuous", "detail": f"gap {gap:.3e} to next"})
    return report


def _meets_hole(spacetime: WarpedSpacetime, s: CausalSegment) -> bool:
    # holes live over flat interval bases, where the pieces are straight in the chart
    a, b = sorted((s.t_start, s.t_end))
    for hole in spacetime.holes:
        if not a <= hole.t <= b:
            continue
        if b == a:
            xs = [s.base_start[0]]
        else:
            frac = (hole.t - s.t_start) / (s.t_end - s.t_start)
            xs = [s.base_start[0] + frac * (s.base_end[0] - s.base_start[0])]
        x = xs[0]
        if isinstance(hole, PointHole) and abs(x - hole.x) <= CAUSAL_TOL:
            return True
        if isinstance(hole, SegmentHole) and hole.x_lo - CAUSAL_TOL <= x <= hole.x_hi + CAUSAL_TOL:
            return True
    return False


# ---------------------------------------------------------------------------
# zig-zag lifts of base geodesics


def _invert_reach(spacetime: WarpedSpacetime, t_from: float, target: float, t_hi: float) -> float:
    """Smallest t in [t_from, t_hi] with reach(t_from, t) = target (bisection)."""
    lo, hi = t_from, t_hi
    if spacetime.causal_reach(t_from, t_hi) < target - CAUSAL_TOL:
        raise ConstructionError("band too narrow to fit the requested teeth")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if spacetime.causal_reach(t_from, mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(hi)):
            break
    return hi


def generate_zigzag(
    spacetime: WarpedSpacetime, p: SpacetimePoint, q: SpacetimePoint, n_teeth: int, band: tuple[float, float]
) -> PiecewiseCausalCurve:
    """Piecewise null curve from p to q made of n_teeth up-down teeth inside band.

    The projection moves monotonically along the minimizing geodesic. Valleys
    are spaced evenly in the reach primitive between t_p and t_q, and each
    peak is placed so that its tooth covers 1/n_teeth of the base distance.
    """
    if n_teeth < 1:
        raise ConstructionError("need at least one tooth")
    a, b = band
    t0, t1 = spacetime.interval
    if not (t0 <= a < b <= t1) or not (a <= p.t <= b and a <= q.t <= b):
        raise ConstructionError("band must lie in I and contain both endpoints")
    base = spacetime.base
    D = base.distance(p.x, q.x)
    if D == 0:
        raise ConstructionError("endpoints share a base point; no teeth needed")
    Fp = 0.0
    Fq = spacetime.causal_reach(p.t, q.t) * (1 if q.t >= p.t else -1)
    step = D / n_teeth
    if abs(Fq) >= step:
        raise ConstructionError("pair too close to causal for this many teeth")

    def level_at(F_target: float) -> float:
        if F_target == 0:
            return p.t
        if F_target > 0:
            return _invert_reach(spacetime, p.t, F_target, max(p.t, q.t))
        # below p: search downward by symmetry
        lo, hi = min(p.t, q.t), p.t
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if spacetime.causal_reach(mid, p.t) > -F_target:
                lo = mid
            else:
                hi = mid
        return lo

    valleys = [p.t] + [level_at(Fp + (Fq - Fp) * k / n_teeth) for k in range(1, n_teeth)] + [q.t]
    times = [valleys[0]]
    covered = [0.0]
    for k in range(n_teeth):
        v0, v1 = valleys[k], valleys[k + 1]
        # reach(v0, h) + reach(v1, h) = step, solved for the peak h
        r01 = spacetime.causal_reach(v0, v1)
        lowv, highv = (v0, v1) if v0 <= v1 else (v1, v0)
        extra = 0.5 * (step - r01)
        h = _invert_reach(spacetime, highv, extra, b) if extra > 0 else highv
        up = spacetime.causal_reach(v0, h)
        times += [h, v1]
        covered += [covered[-1] + up, covered[-1] + step]
    covered[-1] = D
    verts = [
        SpacetimePoint(t, base.interpolate(p.x, q.x, min(1.0, c / D))) for t, c in zip(times, covered)
    ]
    verts[0], verts[-1] = p, q
    segs = []
    for u, w in zip(verts[:-1], verts[1:]):
        direction = Direction.FUTURE_NULL if w.t > u.t else Direction.PAST_NULL
        segs.append(CausalSegment(direction, u.t, w.t, u.x, w.x))
    return PiecewiseCausalCurve(tuple(segs), label=f"zigzag(n={n_teeth})")


# ---------------------------------------------------------------------------
# recursive families in 1+1 Minkowski space
#
# Breakpoints are dyadic or triadic rationals. They are kept exactly as integer
# numerator arrays over one common denominator, so (x, t) = (X / D, T / D).


@dataclass(frozen=True)
class ExactVertices:
    X: np.ndarray
    T: np.ndarray
    D: int

    def fractions(self) -> list[tuple[Fraction, Fraction]]:
        """(t, x) pairs as Fractions."""
        return [(Fraction(int(t), self.D), Fraction(int(x), self.D)) for x, t in zip(self.X, self.T)]

    def floats(self) -> tuple[np.ndarray, np.ndarray]:
        return self.T.astype(float) / self.D, self.X.astype(float) / self.D


def _ints(values, D: int) -> np.ndarray:
    dtype = np.int64 if D < 2**40 else object
    return np.array(values, dtype=dtype)


def _halving(V: ExactVertices, shifts: tuple[tuple[int, int], tuple[int, int]]) -> ExactVertices:
    # two half-size copies, each shifted by (sx, st) in units of the old denominator
    D = V.D
    (ax, at), (bx, bt) = shifts
    X = np.concatenate([V.X + ax * D, (V.X + bx * D)[1:]])
    T = np.concatenate([V.T + at * D, (V.T + bt * D)[1:]])
    return ExactVertices(X, T, 2 * D)


def _timelike_2(i: int) -> ExactVertices:
    # (0,0) -> (1/2, 3/2) -> (1,1), then halves glued at (1/2, 1/2)
    V = ExactVertices(_ints([0, 1, 2], 2), _ints([0, 3, 2], 2), 2)
    for _ in range(i - 1):
        V = _halving(V, ((0, 0), (1, 1)))
    return V


def _sqrt_nonattained(i: int) -> ExactVertices:
    # |s| on [-1, 1], then s -> (s -+ 1)/2, t -> (1 + t)/2 on each half
    V = ExactVertices(_ints([-1, 0, 1], 1), _ints([1, 0, 1], 1), 1)
    for _ in range(i - 1):
        V = _halving(V, ((-1, 1), (1, 1)))
    return V


def _null_5(i: int) -> ExactVertices:
    # teeth of depth 2^-(i-1) over the level-(i-1) triadic Cantor intervals of the diagonal
    D = 2 ** (i - 1) * 3**i
    a = 3**i
    starts = [0]
    L = D
    for _ in range(i - 1):
        L //= 3
        starts = [u for s0 in starts for u in (s0, s0 + 2 * L)]
    third = L // 3
    X, T = [0], [0]
    for u in starts:
        for s0 in (u, u + 2 * third):
            if X[-1] != s0 or T[-1] != s0:
                X.append(s0)
                T.append(s0)
            X += [s0 - a, s0 - a + third, s0 + third]
            T += [s0 + a, s0 + a + third, s0 + third]
    if X[-1] != D:
        X.append(D)
        T.append(D)
    return ExactVertices(_ints(X, D), _ints(T, D), D)


def _removed_point(i: int) -> ExactVertices:
    D = 2**i
    return ExactVertices(_ints([0, 2 * D - 1, 2 * D], D), _ints([0, 2 * D + 1, 2 * D], D), D)


def _removed_line(i: int) -> ExactVertices:
    D = 2 ** (i + 1)
    return ExactVertices(_ints([0, 1, 2, D + 2, 2, 1, 0], D), _ints([0, 1, 0, D, 2 * D, 2 * D - 1, 2 * D], D), D)


FAMILIES = {
    "timelike_2": _timelike_2,
    "null_5": _null_5,
    "sqrt_nonattained": _sqrt_nonattained,
    "removed_point": _removed_point,
    "removed_line": _removed_line,
}


def family_spacetime(family_id: str) -> WarpedSpacetime:
    """A Minkowski strip holding every member of a family, with its hole if any."""
    if family_id == "removed_point":
        return WarpedSpacetime.product((-1.0, 3.0), Interval(6.0, 1.0), holes=[PointHole(1.0, 1.0)])
    if family_id == "removed_line":
        return WarpedSpacetime.product((-1.0, 3.0), Interval(6.0, 0.0), holes=[SegmentHole(1.0, -1.0, 1.0)])
    return WarpedSpacetime.product((-1.0, 3.0), Interval(6.0, 0.0))


def family_vertices(family_id: str, i: int) -> ExactVertices:
    """Exact breakpoints of member i."""
    if family_id not in FAMILIES:
        raise DomainError(f"unknown curve family {family_id!r}")
    if not 1 <= i <= MAX_FAMILY_INDEX:
        raise DomainError(f"family index must be in [1, {MAX_FAMILY_INDEX}], got {i}")
    return FAMILIES[family_id](i)


def fractal_family(family_id: str, i: int) -> PiecewiseCausalCurve:
    """Member i of one of the explicit curve families, built from exact breakpoints."""
    V = family_vertices(family_id, i)
    dT = np.diff(V.T)
    dX = np.abs(np.diff(V.X))
    if np.any(dT == 0) or np.any(dX > np.abs(dT)):
        raise ConstructionError(f"family {family_id} produced a non-causal piece")
    t, x = V.floats()
    kinds = {
        (True, True): Direction.FUTURE_NULL,
        (True, False): Direction.FUTURE_TIMELIKE,
        (False, True): Direction.PAST_NULL,
        (False, False): Direction.PAST_TIMELIKE,
    }
    pts = [BasePoint(float(v)) for v in x]
    fut = (dT > 0).tolist()
    nul = (dX == np.abs(dT)).tolist()
    tl = t.tolist()
    segs = tuple(
        CausalSegment(kinds[fut[k], nul[k]], tl[k], tl[k + 1], pts[k], pts[k + 1]) for k in range(len(dT))
    )
    return PiecewiseCausalCurve(segs, V, f"{family_id}[{i}]")


def sqrt_family_length(i: int) -> float:
    """2^((i+1)/2) (2^((i-1)/2) - (2^(i-1) - 1)^(1/2)) in cancellation-free form."""
    a = 2.0 ** ((i - 1) / 2.0)
    b = math.sqrt(2.0 ** (i - 1) - 1.0)
    return 2.0 ** ((i + 1) / 2.0) / (a + b)


def family_limit_curve(spacetime: WarpedSpacetime | None = None) -> PiecewiseCausalCurve:
    """The null diagonal from (0, 0) to (x, t) = (1, 1), limit of timelike_2 and null_5."""
    seg = CausalSegment(Direction.FUTURE_NULL, 0.0, 1.0, BasePoint(0.0), BasePoint(1.0))
    return PiecewiseCausalCurve((seg,), label="diagonal")


def sup_distance_to_diagonal(curve: PiecewiseCausalCurve) -> float:
    """Largest |t - x| over the vertices (the pieces are straight, so vertices suffice)."""
    return max(abs(v.t - v.x[0]) for v in curve.vertices())
