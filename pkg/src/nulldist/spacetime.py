"""Warped-product spacetimes I x_f Sigma, their cones and their causal relation.

The metric is g = psi(t)^2 (-dt^2 + f(t)^2 sigma) with psi = 1 unless a conformal
factor is supplied. Null curves move with sigma-speed 1/f(t), so the set of base
points reachable from x between times a and b is the d_sigma ball of radius
int_a^b dt / f(t).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .base_geometry import BasePoint, Interval, RiemannianBase, _point
from .errors import DomainError, PreconditionError
from .quadrature import adaptive_simpson

AUDIT_POINTS = 10_000
AUDIT_TOL = 1e-9
REACH_TOL = 1e-9
CAUSAL_TOL = 1e-9


@dataclass(frozen=True)
class SpacetimePoint:
    """A point (t, x) with x a point of the base."""

    t: float
    x: BasePoint

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "x", _point(self.x))

    def as_tuple(self) -> tuple[float, ...]:
        return (self.t,) + self.x.coords


def point(t: float, *x: float) -> SpacetimePoint:
    return SpacetimePoint(t, BasePoint(*x))


@dataclass(frozen=True)
class WarpingFunction:
    """Positive warping function with declared bounds f_min <= f <= f_max.

    breakpoints lists the places where f is not smooth; they split quadrature
    panels and are offered to the lattice as time levels.
    """

    evaluator: Callable[[float], float]
    f_min: float
    f_max: float
    label: str
    registry_id: str | None = None
    params: dict = field(default_factory=dict, compare=False)
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if not (self.f_min > 0):
            raise DomainError(f"warping lower bound must be positive, got {self.f_min}")
        if self.f_max < self.f_min:
            raise DomainError("warping upper bound below lower bound")

    def __call__(self, t: float) -> float:
        return self.evaluator(t)

    def is_unit(self) -> bool:
        return self.f_min == 1.0 and self.f_max == 1.0

    def audit(self, interval: tuple[float, float], tol: float = AUDIT_TOL) -> tuple[float, float]:
        """Check the declared bounds on a dense grid of I; returns the observed range."""
        t0, t1 = interval
        grid = np.concatenate([np.linspace(t0, t1, AUDIT_POINTS), np.asarray(self.breakpoints, float)])
        grid = grid[(grid >= t0) & (grid <= t1)]
        vals = np.array([self.evaluator(float(t)) for t in grid])
        if not np.all(np.isfinite(vals)):
            raise DomainError(f"warping {self.label} is not finite on [{t0}, {t1}]")
        lo, hi = float(vals.min()), float(vals.max())
        if lo < self.f_min - tol or hi > self.f_max + tol:
            raise DomainError(
                f"warping {self.label} leaves its declared range [{self.f_min}, {self.f_max}] "
                f"on [{t0}, {t1}]: observed [{lo}, {hi}]"
            )
        return lo, hi


class Relation(enum.Enum):
    BEFORE = "Before"
    AFTER = "After"
    NONE = "None"


@dataclass(frozen=True)
class PointHole:
    """A removed point; the lattice deletes nodes within radius_cells grid cells."""

    t: float
    x: float
    radius_cells: float = 1.5


@dataclass(frozen=True)
class SegmentHole:
    """A removed spacelike segment {t} x [x_lo, x_hi]."""

    t: float
    x_lo: float
    x_hi: float
    radius_cells: float = 1.5


Hole = PointHole | SegmentHole


class WarpedSpacetime:
    """The spacetime I x_f Sigma, optionally conformally rescaled and with holes."""

    def __init__(
        self,
        interval: Sequence[float],
        base: RiemannianBase,
        warping: WarpingFunction | None = None,
        conformal: Callable[[float], float] | None = None,
        holes: Sequence[Hole] = (),
        label: str = "",
    ):
        t0, t1 = float(interval[0]), float(interval[1])
        if not t0 < t1:
            raise DomainError(f"time interval must satisfy t0 < t1, got [{t0}, {t1}]")
        self.interval = (t0, t1)
        self.base = base
        self.warping = warping if warping is not None else unit_warping()
        self.warping.audit(self.interval)
        self.conformal = conformal
        if conformal is not None:
            grid = np.linspace(t0, t1, 257)
            if min(conformal(float(t)) for t in grid) <= 0:
                raise DomainError("conformal factor must be positive")
        self.holes = tuple(holes)
        if self.holes and not isinstance(base, Interval):
            raise PreconditionError("holes are supported only over interval bases")
        self.label = label or self.warping.label
        self._reach_cache: dict[tuple[float, float], float] = {}

    @classmethod
    def product(cls, interval, base, **kw) -> "WarpedSpacetime":
        return cls(interval, base, unit_warping(), **kw)

    def __repr__(self) -> str:
        return f"WarpedSpacetime({self.interval}, {self.base!r}, {self.warping.label})"

    @property
    def f_min(self) -> float:
        return self.warping.f_min

    @property
    def f_max(self) -> float:
        return self.warping.f_max

    @property
    def is_product(self) -> bool:
        return self.warping.is_unit() and self.conformal is None

    @property
    def complete(self) -> bool:
        return self.base.complete and not self.holes

    def with_conformal(self, psi: Callable[[float], float]) -> "WarpedSpacetime":
        return WarpedSpacetime(self.interval, self.base, self.warping, psi, self.holes, self.label)

    def with_holes(self, holes: Sequence[Hole]) -> "WarpedSpacetime":
        return WarpedSpacetime(self.interval, self.base, self.warping, self.conformal, holes, self.label)

    def null_speed(self, t: float) -> float:
        """sigma-speed of null curves at time t, read off the metric coefficients."""
        f = self.warping(t)
        if self.conformal is None:
            return 1.0 / f
        psi = self.conformal(t)
        g_tt = psi * psi
        g_ss = psi * psi * f * f
        return math.sqrt(g_tt / g_ss)

    def point(self, t: float, *x: float) -> SpacetimePoint:
        p = SpacetimePoint(t, BasePoint(*x))
        return self.validate(p)

    def validate(self, p: SpacetimePoint) -> SpacetimePoint:
        t0, t1 = self.interval
        slack = 1e-12 * max(1.0, abs(t0), abs(t1))
        if not (t0 - slack <= p.t <= t1 + slack):
            raise DomainError(f"time {p.t} outside I = [{t0}, {t1}]")
        return SpacetimePoint(min(max(p.t, t0), t1), self.base.validate(p.x))

    def check_time(self, t: float) -> None:
        t0, t1 = self.interval
        slack = 1e-12 * max(1.0, abs(t0), abs(t1))
        if not (t0 - slack <= t <= t1 + slack):
            raise DomainError(f"time {t} outside I = [{t0}, {t1}]")

    def causal_reach(self, t_a: float, t_b: float) -> float:
        """int over [min, max] of dt / f(t) (with the conformal factor cancelled)."""
        self.check_time(t_a)
        self.check_time(t_b)
        a, b = (t_a, t_b) if t_a <= t_b else (t_b, t_a)
        if a == b:
            return 0.0
        key = (a, b)
        hit = self._reach_cache.get(key)
        if hit is not None:
            return hit
        val = adaptive_simpson(self.null_speed, a, b, REACH_TOL, breakpoints=self.warping.breakpoints)
        if len(self._reach_cache) < 200_000:
            self._reach_cache[key] = val
        return val

    def is_causally_related(self, p: SpacetimePoint, q: SpacetimePoint) -> Relation:
        p, q = self.validate(p), self.validate(q)
        if p == q:
            return Relation.BEFORE
        d = self.base.distance(p.x, q.x)
        if p.t <= q.t and self._joinable(p, q, d):
            return Relation.BEFORE
        if q.t <= p.t and self._joinable(q, p, d):
            return Relation.AFTER
        return Relation.NONE

    def _joinable(self, early: SpacetimePoint, late: SpacetimePoint, d: float) -> bool:
        if d > self.causal_reach(early.t, late.t) + CAUSAL_TOL:
            return False
        for hole in self.holes:
            if _hole_blocks(self, hole, early, late):
                return False
        return True

    def hole_contains(self, p: SpacetimePoint) -> bool:
        for hole in self.holes:
            if abs(p.t - hole.t) <= CAUSAL_TOL:
                if isinstance(hole, PointHole) and abs(p.x[0] - hole.x) <= CAUSAL_TOL:
                    return True
                if isinstance(hole, SegmentHole) and hole.x_lo - CAUSAL_TOL <= p.x[0] <= hole.x_hi + CAUSAL_TOL:
                    return True
        return False


def _hole_blocks(st: WarpedSpacetime, hole: Hole, early: SpacetimePoint, late: SpacetimePoint) -> bool:
    """True when every causal curve from early to late meets the hole.

    Over an interval base the curves from early to late cross the time slice
    of the hole exactly on the closed interval X cut out by the two cones; the
    hole blocks the pair iff it covers X. Holes are treated one at a time.
    """
    if not (early.t < hole.t < late.t):
        return False
    r1 = st.causal_reach(early.t, hole.t)
    r2 = st.causal_reach(hole.t, late.t)
    base = st.base
    lo = max(early.x[0] - r1, late.x[0] - r2, base.lo)
    hi = min(early.x[0] + r1, late.x[0] + r2, base.hi)
    if isinstance(hole, PointHole):
        return hi - lo <= CAUSAL_TOL and abs(0.5 * (lo + hi) - hole.x) <= CAUSAL_TOL
    return hole.x_lo - CAUSAL_TOL <= lo and hi <= hole.x_hi + CAUSAL_TOL


def causal_reach(spacetime: WarpedSpacetime, t_a: float, t_b: float) -> float:
    return spacetime.causal_reach(t_a, t_b)


def is_causally_related(spacetime: WarpedSpacetime, p: SpacetimePoint, q: SpacetimePoint) -> Relation:
    return spacetime.is_causally_related(p, q)


# ---------------------------------------------------------------------------
# time functions


@dataclass(frozen=True)
class TimeFunction:
    """A (generalized) time function tau(t, x) = phi(t).

    kind is "canonical", "smooth" or "generalized"; generalized functions may
    jump, and their jump locations are listed so lattices can resolve them.
    """

    phi: Callable[[float], float]
    kind: str = "smooth"
    label: str = ""
    registry_id: str | None = None
    continuous: bool = True
    jumps: tuple[float, ...] = ()
    increment_fn: Callable[[float, float], float] | None = None

    def __call__(self, t: float) -> float:
        return float(self.phi(t))

    def increment(self, a: float, b: float) -> float:
        """phi(b) - phi(a), through a cancellation-free form when one is registered."""
        if self.increment_fn is not None:
            return float(self.increment_fn(a, b))
        return float(self.phi(b)) - float(self.phi(a))

    def values(self, ts: np.ndarray) -> np.ndarray:
        return np.array([self.phi(float(t)) for t in ts], dtype=float)

    def audit(self, interval: tuple[float, float], n: int = AUDIT_POINTS) -> None:
        """Strict monotonicity along increasing t on a grid of I (plus the jump points)."""
        t0, t1 = interval
        grid = np.union1d(np.linspace(t0, t1, n), [j for j in self.jumps if t0 <= j <= t1])
        vals = self.values(grid)
        if not np.all(np.diff(vals) > 0):
            raise DomainError(f"time function {self.label} is not strictly increasing on [{t0}, {t1}]")


def evaluate_time(tf: TimeFunction, p: SpacetimePoint) -> float:
    return tf(p.t)


def _step(t: float) -> float:
    if t > 0:
        return t + 1.0
    if t < 0:
        return t - 1.0
    return 0.0


def _sqrt_jump(t: float) -> float:
    if t > 1:
        return math.sqrt(t) + 1.0
    if t >= 0:
        return math.sqrt(t)
    return t


def _sqrt_bar(t: float) -> float:
    return math.sqrt(t) if t >= 0 else t


def _sqrt_gap(a: float, b: float) -> float:
    # sqrt(b) - sqrt(a) without cancellation, for a, b >= 0
    s = math.sqrt(a) + math.sqrt(b)
    return (b - a) / s if s > 0 else 0.0


def _sqrt_jump_increment(a: float, b: float) -> float:
    if a > b:
        return -_sqrt_jump_increment(b, a)
    if 0 <= a and b <= 1:
        return _sqrt_gap(a, b)
    if 1 < a:
        return _sqrt_gap(a, b)
    return _sqrt_jump(b) - _sqrt_jump(a)


def _sqrt_bar_increment(a: float, b: float) -> float:
    if 0 <= a and 0 <= b:
        return _sqrt_gap(a, b)
    return _sqrt_bar(b) - _sqrt_bar(a)


def canonical_time() -> TimeFunction:
    return TimeFunction(lambda t: t, "canonical", "t", "canonical")


def scaled_time(c: float) -> TimeFunction:
    if not c > 0:
        raise DomainError("time scaling must be positive")
    return TimeFunction(lambda t: c * t, "smooth", f"{c}*t", "scaled")


TIME_REGISTRY: dict[str, Callable[[], TimeFunction]] = {
    "canonical": canonical_time,
    "cubic": lambda: TimeFunction(lambda t: t**3, "smooth", "t^3", "cubic"),
    "step": lambda: TimeFunction(_step, "generalized", "step", "step", continuous=False, jumps=(0.0,)),
    "sqrt": lambda: TimeFunction(_sqrt_jump, "generalized", "sqrt with jump", "sqrt", continuous=False, jumps=(1.0,),
                                 increment_fn=_sqrt_jump_increment),
    "sqrt_bar": lambda: TimeFunction(_sqrt_bar, "generalized", "sqrt", "sqrt_bar", jumps=(0.0,),
                                     increment_fn=_sqrt_bar_increment),
    "phi_cubic": lambda: TimeFunction(lambda t: t + t**3 / 3.0, "smooth", "t + t^3/3", "phi_cubic"),
}


def time_function(name: str, **params) -> TimeFunction:
    if name == "scaled":
        return scaled_time(float(params.get("c", 1.0)))
    if name not in TIME_REGISTRY:
        raise DomainError(f"unknown time function {name!r}")
    if params:
        raise DomainError(f"time function {name!r} takes no parameters")
    return TIME_REGISTRY[name]()


# ---------------------------------------------------------------------------
# warping functions


def smoothstep(v: float) -> float:
    """3v^2 - 2v^3 clamped to [0, 1]; flat at both ends."""
    if v <= 0.0:
        return 0.0
    if v >= 1.0:
        return 1.0
    return v * v * (3.0 - 2.0 * v)


def unit_warping() -> WarpingFunction:
    return WarpingFunction(lambda t: 1.0, 1.0, 1.0, "f=1", "unit")


def constant_warping(c: float) -> WarpingFunction:
    c = float(c)
    return WarpingFunction(lambda t: c, c, c, f"f={c}", "constant", {"c": c})


def quadratic_warping(interval: tuple[float, float] = (0.0, 2.0)) -> WarpingFunction:
    """f(t) = t^2 + 1 with its exact range on I."""
    t0, t1 = interval
    hi = max(t0 * t0, t1 * t1) + 1.0
    lo = 1.0 if t0 <= 0.0 <= t1 else min(t0 * t0, t1 * t1) + 1.0
    return WarpingFunction(lambda t: t * t + 1.0, lo, hi, "f=t^2+1", "quadratic")


def bump_warping(h0: float, j: int) -> WarpingFunction:
    """f_j(t) = h(j t) on [0, 1/j] and 1 afterwards, h = h0 on [0, 1/2], then a smooth ramp to 1.

    h0 < 1 gives the increasing family, h0 > 1 the decreasing one.
    """
    h0 = float(h0)
    if not h0 > 0:
        raise DomainError("h0 must be positive")
    if j < 1:
        raise DomainError("index j must be at least 1")

    def h(u: float) -> float:
        if u <= 0.5:
            return h0
        return h0 + (1.0 - h0) * smoothstep(2.0 * u - 1.0)

    def f(t: float) -> float:
        if t <= 1.0 / j:
            return h(j * t)
        return 1.0

    rid = "rising_bump" if h0 < 1 else "falling_bump"
    return WarpingFunction(
        f, min(h0, 1.0), max(h0, 1.0), f"bump(h0={h0}, j={j})", rid, {"h0": h0, "j": j},
        breakpoints=(0.5 / j, 1.0 / j),
    )


def collapse_warping(j: int) -> WarpingFunction:
    """f_j = 1/j on [0, 1-1/j], smooth ramp to 1 on (1-1/j, 1), 1 on [1, 2]."""
    if j < 1:
        raise DomainError("index j must be at least 1")
    a = 1.0 - 1.0 / j

    def f(t: float) -> float:
        if t <= a:
            return 1.0 / j
        if t >= 1.0:
            return 1.0
        return 1.0 / j + (j - 1.0) / j * smoothstep(j * t - (j - 1.0))

    return WarpingFunction(f, 1.0 / j, 1.0, f"collapse(j={j})", "collapse", {"j": j}, breakpoints=(a, 1.0))


def sine_perturbed_warping(j: int, amplitude: float = 1.0) -> WarpingFunction:
    """f_j(t) = 1 + amplitude * sin(t) / j, uniformly within amplitude/j of 1."""
    eps = abs(amplitude) / j
    if eps >= 1:
        raise DomainError("perturbation would make the warping non-positive")
    return WarpingFunction(
        lambda t: 1.0 + amplitude * math.sin(t) / j, 1.0 - eps, 1.0 + eps,
        f"1+{amplitude}sin(t)/{j}", "sine", {"j": j, "amplitude": amplitude},
    )


def random_trig_warping(seed: int, interval: tuple[float, float], n_terms: int = 3) -> WarpingFunction:
    """Random positive trigonometric polynomial with rigorous bounds.

    Bounds are the extremes on a 10^4 grid widened by half a grid step times a
    Lipschitz constant, so they hold on the whole interval, not only the grid.
    """
    rng = np.random.default_rng(seed)
    c0 = float(rng.uniform(1.0, 2.0))
    amps = rng.uniform(-0.8, 0.8, n_terms) * c0 / n_terms
    freqs = rng.uniform(0.5, 4.0, n_terms)
    phases = rng.uniform(0.0, 2 * math.pi, n_terms)

    def f(t: float) -> float:
        return c0 + float(np.sum(amps * np.sin(freqs * t + phases)))

    t0, t1 = interval
    grid = np.linspace(t0, t1, AUDIT_POINTS)
    vals = c0 + np.sin(np.outer(grid, freqs) + phases) @ amps
    lip = float(np.sum(np.abs(amps) * freqs))
    margin = lip * (grid[1] - grid[0]) / 2.0 + 1e-12
    return WarpingFunction(
        f, float(vals.min()) - margin, float(vals.max()) + margin, f"trig(seed={seed})", "random_trig",
        {"seed": seed},
    )


def _h0_in(h0: float, lo: float, hi: float) -> float:
    if not lo < h0 < hi:
        raise DomainError(f"h0 must lie in ({lo}, {hi}) for this family, got {h0}")
    return float(h0)


WARPING_REGISTRY: dict[str, Callable[..., WarpingFunction]] = {
    "unit": lambda: unit_warping(),
    "constant": lambda c: constant_warping(c),
    "quadratic": lambda interval=(0.0, 2.0): quadratic_warping(tuple(interval)),
    "rising_bump": lambda h0=0.5, j=1: bump_warping(_h0_in(h0, 0.0, 1.0), int(j)),
    "falling_bump": lambda h0=2.0, j=1: bump_warping(_h0_in(h0, 1.0, math.inf), int(j)),
    "collapse": lambda j=1: collapse_warping(int(j)),
    "sine": lambda j=1, amplitude=1.0: sine_perturbed_warping(int(j), amplitude),
    "random_trig": lambda seed=0, interval=(0.0, 2.0): random_trig_warping(int(seed), tuple(interval)),
}


# numbered identifiers accepted in scenario files and on the command line
WARPING_ALIASES = {"example51": "rising_bump", "example52": "falling_bump", "example53": "collapse"}


def warping_function(name: str, **params) -> WarpingFunction:
    name = WARPING_ALIASES.get(name, name)
    if name not in WARPING_REGISTRY:
        raise DomainError(f"unknown warping {name!r}")
    try:
        return WARPING_REGISTRY[name](**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for warping {name!r}: {exc}") from None
