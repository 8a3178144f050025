"""Riemannian bases with closed-form geodesic distance.

Every base exposes the same small surface: exact distance, interpolation along a
minimizing geodesic, deterministic quasi-uniform sampling and a few scalar
characteristics (dimension, volume, diameter) used by the mass proxy and by the
lattice oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# generalized golden ratio for two-dimensional Kronecker sequences
PLASTIC = 1.324717957244746


@dataclass(frozen=True)
class BasePoint:
    """A point of a base manifold in the base's own chart."""

    coords: tuple[float, ...]

    def __init__(self, *coords: float | Sequence[float]):
        if len(coords) == 1 and isinstance(coords[0], (tuple, list, np.ndarray)):
            coords = tuple(coords[0])
        object.__setattr__(self, "coords", tuple(float(c) for c in coords))

    def __getitem__(self, k: int) -> float:
        return self.coords[k]

    def __len__(self) -> int:
        return len(self.coords)


def _point(x: BasePoint | float | Sequence[float]) -> BasePoint:
    if isinstance(x, BasePoint):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return BasePoint(float(x))
    return BasePoint(tuple(x))


class RiemannianBase:
    """Abstract base manifold (Sigma, sigma)."""

    kind: str = "abstract"
    dim: int = 1
    complete: bool = True

    def validate(self, x: BasePoint) -> BasePoint:
        raise NotImplementedError

    def distance(self, x: BasePoint, y: BasePoint) -> float:
        raise NotImplementedError

    def interpolate(self, x: BasePoint, y: BasePoint, s: float) -> BasePoint:
        raise NotImplementedError

    def sample(self, n: int, seed: int) -> list[BasePoint]:
        raise NotImplementedError

    def volume(self) -> float:
        raise NotImplementedError

    def diameter(self) -> float:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def _check_s(self, s: float) -> float:
        if not 0.0 <= s <= 1.0:
            raise DomainError(f"interpolation parameter {s} outside [0, 1]")
        return float(s)


def _kronecker_offset(seed: int, size: int = 1) -> np.ndarray:
    return np.random.default_rng(seed).random(size)


@dataclass(frozen=True, eq=True)
class Interval(RiemannianBase):
    """Closed segment [center - L/2, center + L/2] with the Euclidean metric.

    `complete` is carried as a flag only; the segment is complete as a metric
    space with boundary, while open variants are used by the incomplete
    causality counterexamples.
    """

    length: float
    center: float = 0.0
    complete: bool = True
    kind = "interval"
    dim = 1

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError(f"interval length must be positive, got {self.length}")

    @property
    def lo(self) -> float:
        return self.center - 0.5 * self.length

    @property
    def hi(self) -> float:
        return self.center + 0.5 * self.length

    def validate(self, x) -> BasePoint:
        x = _point(x)
        if len(x) != 1:
            raise DomainError(f"interval points have one coordinate, got {x.coords}")
        v = x[0]
        slack = 1e-12 * max(1.0, abs(self.lo), abs(self.hi))
        if not (self.lo - slack <= v <= self.hi + slack) or math.isnan(v):
            raise DomainError(f"coordinate {v} outside interval [{self.lo}, {self.hi}]")
        return x

    def distance(self, x, y) -> float:
        x, y = self.validate(x), self.validate(y)
        return abs(x[0] - y[0])

    def interpolate(self, x, y, s: float) -> BasePoint:
        x, y = self.validate(x), self.validate(y)
        s = self._check_s(s)
        if s == 1.0:
            return y
        return BasePoint(x[0] + s * (y[0] - x[0]))

    def sample(self, n: int, seed: int) -> list[BasePoint]:
        if n < 1:
            raise DomainError("sample size must be at least 1")
        u0 = _kronecker_offset(seed)[0]
        u = (u0 + GOLDEN * np.arange(n)) % 1.0
        return [BasePoint(self.lo + self.length * float(v)) for v in u]

    def volume(self) -> float:
        return self.length

    def diameter(self) -> float:
        return self.length

    def to_dict(self) -> dict:
        return {"kind": "interval", "length": self.length, "center": self.center}


@dataclass(frozen=True, eq=True)
class Circle(RiemannianBase):
    """Round circle of circumference C; the chart is arclength in [0, C)."""

    circumference: float
    complete: bool = True
    kind = "circle"
    dim = 1

    def __post_init__(self):
        if not self.circumference > 0:
            raise DomainError("circumference must be positive")

    def validate(self, x) -> BasePoint:
        x = _point(x)
        if len(x) != 1 or not math.isfinite(x[0]):
            raise DomainError(f"circle points have one finite coordinate, got {x.coords}")
        v = x[0] % self.circumference
        # modulo of a tiny negative number can round up to C itself
        if v >= self.circumference:
            v = 0.0
        return BasePoint(v)

    def _signed_gap(self, a: float, b: float) -> float:
        """Displacement from a to b along the shorter arc, ties taken positively."""
        c = self.circumference
        d = (b - a) % c
        if d > 0.5 * c:
            d -= c
        return d

    def distance(self, x, y) -> float:
        x, y = self.validate(x), self.validate(y)
        # |a - b| rounds the same both ways, which keeps the distance exactly symmetric
        d = abs(x[0] - y[0])
        return min(d, self.circumference - d)

    def interpolate(self, x, y, s: float) -> BasePoint:
        x, y = self.validate(x), self.validate(y)
        s = self._check_s(s)
        if s == 1.0:
            return y
        return self.validate(x[0] + s * self._signed_gap(x[0], y[0]))

    def sample(self, n: int, seed: int) -> list[BasePoint]:
        if n < 1:
            raise DomainError("sample size must be at least 1")
        u0 = _kronecker_offset(seed)[0]
        u = (u0 + GOLDEN * np.arange(n)) % 1.0
        return [self.validate(self.circumference * float(v)) for v in u]

    def volume(self) -> float:
        return self.circumference

    def diameter(self) -> float:
        return 0.5 * self.circumference

    def to_dict(self) -> dict:
        return {"kind": "circle", "circumference": self.circumference}


@dataclass(frozen=True, eq=True)
class FlatTorus(RiemannianBase):
    """Flat torus R^2 / (L1 Z x L2 Z) with chart [0, L1) x [0, L2)."""

    l1: float
    l2: float
    complete: bool = True
    kind = "flat_torus"
    dim = 2

    def __post_init__(self):
        if not (self.l1 > 0 and self.l2 > 0):
            raise DomainError("torus side lengths must be positive")

    def validate(self, x) -> BasePoint:
        x = _point(x)
        if len(x) != 2 or not all(math.isfinite(c) for c in x.coords):
            raise DomainError(f"torus points have two finite coordinates, got {x.coords}")
        a, b = x[0] % self.l1, x[1] % self.l2
        return BasePoint(0.0 if a >= self.l1 else a, 0.0 if b >= self.l2 else b)

    @staticmethod
    def _gap(a: float, b: float, period: float) -> float:
        d = (b - a) % period
        if d > 0.5 * period:
            d -= period
        return d

    def distance(self, x, y) -> float:
        x, y = self.validate(x), self.validate(y)
        d1, d2 = abs(x[0] - y[0]), abs(x[1] - y[1])
        return math.hypot(min(d1, self.l1 - d1), min(d2, self.l2 - d2))

    def interpolate(self, x, y, s: float) -> BasePoint:
        x, y = self.validate(x), self.validate(y)
        s = self._check_s(s)
        if s == 1.0:
            return y
        return self.validate(
            (x[0] + s * self._gap(x[0], y[0], self.l1), x[1] + s * self._gap(x[1], y[1], self.l2))
        )

    def sample(self, n: int, seed: int) -> list[BasePoint]:
        if n < 1:
            raise DomainError("sample size must be at least 1")
        off = _kronecker_offset(seed, 2)
        k = np.arange(n)
        u = (off[0] + k / PLASTIC) % 1.0
        v = (off[1] + k / PLASTIC**2) % 1.0
        return [self.validate((self.l1 * float(a), self.l2 * float(b))) for a, b in zip(u, v)]

    def volume(self) -> float:
        return self.l1 * self.l2

    def diameter(self) -> float:
        return 0.5 * math.hypot(self.l1, self.l2)

    def to_dict(self) -> dict:
        return {"kind": "flat_torus", "l1": self.l1, "l2": self.l2}


@dataclass(frozen=True, eq=True)
class RoundSphere(RiemannianBase):
    """Round 2-sphere of radius r; chart is (colatitude in [0, pi], longitude in [0, 2 pi))."""

    radius: float
    complete: bool = True
    kind = "round_sphere"
    dim = 2

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("sphere radius must be positive")

    def validate(self, x) -> BasePoint:
        x = _point(x)
        if len(x) != 2 or not all(math.isfinite(c) for c in x.coords):
            raise DomainError(f"sphere points have two finite coordinates, got {x.coords}")
        theta, phi = x.coords
        if not -1e-12 <= theta <= math.pi + 1e-12:
            raise DomainError(f"colatitude {theta} outside [0, pi]")
        phi = phi % TWO_PI
        return BasePoint(min(max(theta, 0.0), math.pi), 0.0 if phi >= TWO_PI else phi)

    @staticmethod
    def _unit(p: BasePoint) -> np.ndarray:
        theta, phi = p.coords
        st = math.sin(theta)
        return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])

    def _angle(self, u: np.ndarray, v: np.ndarray) -> float:
        # atan2 form stays accurate for nearly equal and nearly antipodal points
        return math.atan2(float(np.linalg.norm(np.cross(u, v))), float(np.dot(u, v)))

    def distance(self, x, y) -> float:
        x, y = self.validate(x), self.validate(y)
        if x == y:
            return 0.0
        return self.radius * self._angle(self._unit(x), self._unit(y))

    def interpolate(self, x, y, s: float) -> BasePoint:
        x, y = self.validate(x), self.validate(y)
        s = self._check_s(s)
        if s == 1.0:
            return y
        u, v = self._unit(x), self._unit(y)
        omega = self._angle(u, v)
        if omega < 1e-15:
            return x
        w = v - math.cos(omega) * u
        nw = float(np.linalg.norm(w))
        if nw < 1e-12:
            # antipodal: choose the meridian-aligned great circle deterministically
            w = np.cross(u, np.array([0.0, 0.0, 1.0]))
            if np.linalg.norm(w) < 1e-12:
                w = np.array([1.0, 0.0, 0.0])
            nw = float(np.linalg.norm(w))
        w = w / nw
        p = math.cos(s * omega) * u + math.sin(s * omega) * w
        theta = math.acos(max(-1.0, min(1.0, float(p[2]))))
        phi = math.atan2(float(p[1]), float(p[0]))
        return self.validate((theta, phi))

    def sample(self, n: int, seed: int) -> list[BasePoint]:
        if n < 1:
            raise DomainError("sample size must be at least 1")
        off = _kronecker_offset(seed)[0]
        k = np.arange(n) + 0.5
        z = 1.0 - 2.0 * k / n
        phi = TWO_PI * ((off + k * GOLDEN) % 1.0)
        theta = np.arccos(np.clip(z, -1.0, 1.0))
        return [self.validate((float(a), float(b))) for a, b in zip(theta, phi)]

    def volume(self) -> float:
        return 4.0 * math.pi * self.radius**2

    def diameter(self) -> float:
        return math.pi * self.radius

    def to_dict(self) -> dict:
        return {"kind": "round_sphere", "radius": self.radius}


def base_distance(base: RiemannianBase, x, y) -> float:
    """Exact geodesic distance d_sigma(x, y)."""
    return base.distance(x, y)


def geodesic_interpolate(base: RiemannianBase, x, y, s: float) -> BasePoint:
    """Point at fraction s along a minimizing geodesic from x to y."""
    return base.interpolate(x, y, s)


def sample_points(base: RiemannianBase, n: int, seed: int) -> list[BasePoint]:
    """Deterministic low-discrepancy sample of n base points."""
    return base.sample(n, seed)


def base_from_dict(cfg: dict) -> RiemannianBase:
    """Build a base from its scenario-file description."""
    cfg = dict(cfg)
    kind = cfg.pop("kind", None)
    fields = {
        "interval": (Interval, {"length", "center", "complete"}),
        "circle": (Circle, {"circumference"}),
        "flat_torus": (FlatTorus, {"l1", "l2"}),
        "round_sphere": (RoundSphere, {"radius"}),
    }
    if kind not in fields:
        raise DomainError(f"unknown base kind {kind!r}")
    cls, allowed = fields[kind]
    unknown = set(cfg) - allowed
    if unknown:
        raise DomainError(f"unknown base key {sorted(unknown)[0]!r}")
    return cls(**cfg)
