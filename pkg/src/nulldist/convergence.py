"""Sequences of warped spacetimes, their limit metrics and convergence tables."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .base_geometry import Circle, RiemannianBase
from .distance import null_distance_sigma
from .errors import DomainError, NullDistError
from .lattice import Lattice, LatticeConfig, lattice_distance_matrix
from .metric_analysis import (
    FiniteMetricSpace,
    gh_upper_bound,
    mass_proxy,
    swif_upper_bound,
    uniform_distance,
    worst_pair,
)
from .spacetime import (
    SpacetimePoint,
    WarpedSpacetime,
    WarpingFunction,
    bump_warping,
    collapse_warping,
    sine_perturbed_warping,
)

INTERVAL = (0.0, 2.0)


# ---------------------------------------------------------------------------
# limit formulas


def _dhat_sigma(p: SpacetimePoint, q: SpacetimePoint, base: RiemannianBase) -> float:
    return max(abs(p.t - q.t), base.distance(p.x, q.x))


def evaluate_limit_d0(h0: float, p: SpacetimePoint, q: SpacetimePoint, base: RiemannianBase) -> float:
    """min(d_sigma_hat(p, q), t_p + t_q + h0 * dist(J^-(p) on Sigma_0, J^-(q) on Sigma_0)).

    Under the unit cones the pasts of p and q meet the slice t = 0 in balls of
    radii t_p and t_q, so their set distance is max(0, d_sigma - t_p - t_q).
    """
    d = base.distance(p.x, q.x)
    through_bottom = p.t + q.t + h0 * max(0.0, d - p.t - q.t)
    return min(_dhat_sigma(p, q, base), through_bottom)


def evaluate_limit_collapse(p: SpacetimePoint, q: SpacetimePoint, base: RiemannianBase) -> float:
    """Limit of the collapsing family: fibres below t = 1 shrink to a point."""
    if p.t > 1.0 and q.t > 1.0:
        return min(_dhat_sigma(p, q, base), (p.t - 1.0) + (q.t - 1.0))
    return abs(p.t - q.t)


def pointwise_envelope(eps: float, f_min: float, d_inf: float) -> tuple[float, float]:
    """Bracket for d_j when ||f_j - f_inf||_sup <= eps < f_min / 4 (closed at f_min / 4).

    hi = d + eps (1 + 8 eps / f_min + 8 d / f_min), lo = d - eps (1 + 3 d / f_min).
    """
    if not f_min > 0:
        raise DomainError("f_min must be positive")
    if not 0.0 <= eps <= f_min / 4.0:
        raise DomainError(f"eps = {eps} outside (0, f_min/4] with f_min = {f_min}")
    hi = d_inf + eps * (1.0 + 8.0 * eps / f_min + 8.0 * d_inf / f_min)
    lo = d_inf - eps * (1.0 + 3.0 * d_inf / f_min)
    return lo, hi


@dataclass(frozen=True)
class LimitMetric:
    kind: str
    evaluator: Callable[[SpacetimePoint, SpacetimePoint, RiemannianBase], float]
    label: str = ""

    def matrix(self, points: Sequence[SpacetimePoint], base: RiemannianBase) -> np.ndarray:
        n = len(points)
        M = np.zeros((n, n))
        for a in range(n):
            for b in range(a + 1, n):
                M[a, b] = M[b, a] = self.evaluator(points[a], points[b], base)
        return M


def d0_limit(h0: float) -> LimitMetric:
    return LimitMetric("D0Formula", lambda p, q, b: evaluate_limit_d0(h0, p, q, b), f"d0(h0={h0})")


def collapse_limit() -> LimitMetric:
    return LimitMetric("CollapseLimit", evaluate_limit_collapse, "d_inf collapse")


def unit_product_limit() -> LimitMetric:
    return LimitMetric("NullDistanceOf(f=1)", _dhat_sigma, "d_sigma_hat")


# ---------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class WarpingSequence:
    """j -> f_j together with the bi-Lipschitz constant against the unit product.

    lam(j) bounds d_j / d_sigma_hat from both sides (1/lam <= ratio <= lam);
    sup_distance(j) is ||f_j - f_inf|| when the family converges uniformly.
    """

    family: str
    generator: Callable[[int], WarpingFunction]
    j_list: tuple[int, ...]
    lam: Callable[[int], float]
    params: dict = field(default_factory=dict)
    sup_distance: Callable[[int], float] | None = None

    def __post_init__(self):
        if not self.j_list or any(j < 1 for j in self.j_list):
            raise DomainError("j_list must be nonempty with positive entries")
        if list(self.j_list) != sorted(self.j_list):
            raise DomainError("j_list must be increasing")


def uniform_sine_sequence(j_list: Sequence[int] = (4, 8, 16, 32), amplitude: float = 1.0) -> WarpingSequence:
    return WarpingSequence(
        "uniform_sine", lambda j: sine_perturbed_warping(j, amplitude), tuple(j_list),
        lambda j: 1.0 / (1.0 - abs(amplitude) / j), {"amplitude": amplitude},
        sup_distance=lambda j: abs(amplitude) / j,
    )


def rising_bump_sequence(h0: float = 0.5, j_list: Sequence[int] = (2, 4, 8, 16)) -> WarpingSequence:
    if not 0.0 < h0 < 1.0:
        raise DomainError("the increasing bump family needs h0 in (0, 1)")
    return WarpingSequence("rising_bump", lambda j: bump_warping(h0, j), tuple(j_list), lambda j: 1.0 / h0, {"h0": h0})


def falling_bump_sequence(h0: float = 2.0, j_list: Sequence[int] = (2, 4, 8, 16)) -> WarpingSequence:
    if not h0 > 1.0:
        raise DomainError("the decreasing bump family needs h0 > 1")
    return WarpingSequence("falling_bump", lambda j: bump_warping(h0, j), tuple(j_list), lambda j: h0, {"h0": h0})


def collapse_sequence(j_list: Sequence[int] = (2, 4, 8, 16)) -> WarpingSequence:
    return WarpingSequence("collapse", collapse_warping, tuple(j_list), lambda j: float(j))


SEQUENCES = {
    "uniform_sine": uniform_sine_sequence,
    "rising_bump": rising_bump_sequence,
    "falling_bump": falling_bump_sequence,
    "collapse": collapse_sequence,
}


def default_config(family: str, j: int, n_space: int = 256, n_time: int = 1025, stencil: int = 8) -> LatticeConfig:
    """Lattice resolution adapted to where f_j varies or is small."""
    if family in ("rising_bump", "falling_bump"):
        return LatticeConfig(n_time, n_space, stencil, refine=((0.0, 1.0 / j, 400),))
    if family == "collapse":
        a = 1.0 - 1.0 / j
        return LatticeConfig(n_time, n_space, stencil, refine=((max(0.0, a - 0.05), 1.0, 400),))
    return LatticeConfig(n_time, n_space, stencil)


def grid_sample(base: RiemannianBase, n_t: int = 8, n_x: int = 8, interval=INTERVAL) -> list[SpacetimePoint]:
    """n_t x n_x grid over I x Sigma (angles equally spaced on a circle)."""
    ts = np.linspace(interval[0], interval[1], n_t)
    if isinstance(base, Circle):
        xs = base.circumference * np.arange(n_x) / n_x
    else:
        xs = np.linspace(base.lo, base.hi, n_x)
    return [SpacetimePoint(float(t), (float(x),)) for t in ts for x in xs]


# ---------------------------------------------------------------------------
# experiments


@dataclass
class ConvergenceRow:
    j: int
    eps: float
    gh_bound: float
    swif_bound: float
    lam: float
    mass: float
    worst_pair: tuple[int, int]
    runtime: float
    lattice_tolerance: float
    sandwich_violations: int = 0
    envelope_violations: int | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__, worst_pair=list(self.worst_pair))


@dataclass
class ConvergenceReport:
    family: str
    limit: str
    rows: list[ConvergenceRow]
    verdict: str
    gap: float | None
    sample_size: int
    tolerance: float
    matrices: dict = field(default_factory=dict, repr=False)
    points: list = field(default_factory=list, repr=False)
    notes: list = field(default_factory=list)

    def eps(self) -> list[float]:
        return [r.eps for r in self.rows]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "limit": self.limit,
            "verdict": self.verdict,
            "gap": self.gap,
            "sample_size": self.sample_size,
            "tolerance": self.tolerance,
            "rows": [r.to_dict() for r in self.rows],
            "notes": self.notes,
        }


def _verdict(eps: list[float], tolerance: float) -> tuple[str, float | None]:
    if eps[-1] <= tolerance:
        return "ConvergesToLimit", None
    gap = min(eps)
    if not gap > 0:
        raise NullDistError("bounded-away verdict requires a positive gap")
    return "BoundedAwayFromLimit", gap


def run_convergence_experiment(
    sequence: WarpingSequence,
    limit: LimitMetric,
    base: RiemannianBase,
    points: Sequence[SpacetimePoint] | None = None,
    config: Callable[[int], LatticeConfig] | LatticeConfig | None = None,
    tolerance: float = 5e-2,
    interval: tuple[float, float] = INTERVAL,
    keep_lattices: bool = False,
) -> ConvergenceReport:
    """Per j: lattice matrix of d_j, uniform distance to the limit, GH/SWIF bounds.

    The uniform distance is a maximum over the finite sample, which is a lower
    estimate of the sup over the whole spacetime.
    """
    from .checks import sandwich_violations

    points = list(points) if points is not None else grid_sample(base, interval=interval)
    lim = FiniteMetricSpace(points, limit.matrix(points, base), limit.label)
    rows: list[ConvergenceRow] = []
    matrices: dict = {}
    for j in sequence.j_list:
        start = time.perf_counter()
        cfg = config(j) if callable(config) else (config or default_config(sequence.family, j))
        st = WarpedSpacetime(interval, base, sequence.generator(j))
        try:
            M, lat = lattice_distance_matrix(st, None, points, cfg)
        except NullDistError as exc:
            raise type(exc)(f"j={j}: {exc}") from exc
        space = FiniteMetricSpace(points, M, f"{sequence.family} j={j}", lat.tolerance)
        eps = uniform_distance(space, lim)
        lam = sequence.lam(j)
        mass = mass_proxy(st, lam)
        n = 1 + base.dim
        violations = len(sandwich_violations(st, points, M, lat.tolerance))
        env = None
        if sequence.sup_distance is not None:
            env = _envelope_violations(points, M, lim.matrix, sequence.sup_distance(j), lat.tolerance)
        rows.append(
            ConvergenceRow(
                j, eps, gh_upper_bound(eps), swif_upper_bound(eps, lam, n, mass), lam, mass.value,
                worst_pair(space, lim), time.perf_counter() - start, lat.tolerance, violations, env,
            )
        )
        matrices[j] = (M, lat) if keep_lattices else M
    verdict, gap = _verdict([r.eps for r in rows], tolerance)
    notes = [
        f"uniform distance estimated on {len(points)} sample points (lower estimate of the sup)",
        "mass is a bi-Lipschitz volume proxy; boundary mass term omitted",
    ]
    return ConvergenceReport(sequence.family, limit.label, rows, verdict, gap, len(points), tolerance,
                             matrices, points, notes)


def _envelope_violations(points, M, L, eps, tol) -> int:
    # the unit product has f_min = 1
    count = 0
    n = len(points)
    for a in range(n):
        for b in range(a + 1, n):
            lo, hi = pointwise_envelope(eps, 1.0, L[a, b])
            if M[a, b] < lo - tol or M[a, b] > hi + tol:
                count += 1
    return count


def collapse_diagnostic(
    base: RiemannianBase,
    j: int,
    levels: Sequence[float],
    config: LatticeConfig | None = None,
    tol_factor: float = 3.0,
    lattice: Lattice | None = None,
) -> dict:
    """Fibre diameters sup_{x, y} d_j((t, x), (t, y)) of the collapsing family.

    On a circle the lattice is rotation invariant, so the diameter of the
    fibre at level t is the largest distance from (t, 0) to its own level.
    A level counts as collapsed when the diameter is below pi/j + tol_factor * tol
    (the warped bound with f_j <= 1/j there, inflated by the lattice tolerance)
    and also strictly below the unwarped fibre diameter, so that f = 1 never
    reports a collapse.
    """
    if not isinstance(base, Circle):
        raise DomainError("collapse diagnostic uses the rotation symmetry of a circle base")
    if lattice is None:
        st = WarpedSpacetime(INTERVAL, base, collapse_warping(j))
        lattice = Lattice(st, None, config or default_config("collapse", j), tuple(levels))
    nS = len(lattice.S)
    rows = []
    idx = [int(np.argmin(np.abs(lattice.T - t))) for t in levels]
    trees = lattice.distances_from([lattice.node(i, 0) for i in idx])
    for t, i, tree in zip(levels, idx, trees):
        diam = float(np.max(tree[i * nS:(i + 1) * nS]))
        slack = tol_factor * lattice.tolerance
        threshold = base.diameter() / j + slack
        shrunk = diam < base.diameter() - slack
        rows.append({"t": t, "diameter": diam, "collapsed": diam <= threshold and shrunk, "threshold": threshold})
    return {"j": j, "levels": rows, "lattice_tolerance": lattice.tolerance}
