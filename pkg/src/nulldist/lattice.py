"""Causal-lattice shortest paths: a discrete realization of the null distance.

Nodes are (t_i, s_j) with time levels t_i and base samples s_j. The admissible
edges of the full lattice join (i, j) and (i', j') whenever
|j - j'| <= R and d_sigma(s_j, s_j') <= reach(t_i, t_i'), with weight
|tau(t_i') - tau(t_i)|; every lattice path is a piecewise causal curve, so
shortest paths are upper bounds on the null distance.

The full edge set has O(n_time^2) edges per node. It is replaced by an
equivalent sparse graph: for each level i and hop count k <= R keep only the
edge to the first level i* whose reach from t_i covers k base steps, plus the
vertical edges (i, j) - (i+1, j). Any full edge (i, j) -> (i', j + k) with
i' >= i* factors as (i, j) -> (i*, j + k) followed by vertical edges up to i',
and because tau is monotone in t the weights add up to the same total. Hence
both graphs have identical shortest-path distances.

Each sparse edge still rounds its end time up to the next level, and along a
long null stretch these roundings add up. Levels spaced evenly in the reach
primitive (LatticeConfig.cone_levels) let null steps land exactly on a level,
which removes most of that bias when f varies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .base_geometry import Circle, Interval
from .distance import DistanceResult, Method, time_lower_bound, warped_bounds
from .errors import DomainError, PreconditionError, UnreachableError
from .spacetime import (
    CAUSAL_TOL,
    PointHole,
    Relation,
    SegmentHole,
    SpacetimePoint,
    TimeFunction,
    WarpedSpacetime,
    canonical_time,
)

LEVEL_MERGE = 1e-12


@dataclass(frozen=True)
class LatticeConfig:
    """Resolution of a causal lattice.

    refine adds uniformly spaced levels (a, b, n) inside I on top of the
    n_time uniform ones; extra_levels adds individual levels. cone_levels = m
    adds the levels whose reach from the bottom of I is a multiple of
    (base step) / m, so that a null step of k base cells started on one of them
    ends exactly on another instead of rounding up to the next level.
    """

    n_time: int = 401
    n_space: int = 401
    stencil_radius: int = 4
    refine: tuple[tuple[float, float, int], ...] = ()
    extra_levels: tuple[float, ...] = ()
    cone_levels: int = 1

    def __post_init__(self):
        if self.n_time < 2 or self.n_space < 2:
            raise DomainError("lattice needs at least two time levels and two base samples")
        if self.stencil_radius < 1:
            raise DomainError("stencil radius must be at least 1")
        if self.cone_levels < 0:
            raise DomainError("cone_levels must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "n_time": self.n_time,
            "n_space": self.n_space,
            "stencil_radius": self.stencil_radius,
            "refine": [list(r) for r in self.refine],
            "extra_levels": list(self.extra_levels),
            "cone_levels": self.cone_levels,
        }


def _cone_aligned_levels(spacetime: WarpedSpacetime, du: float, n_coarse: int = 257) -> np.ndarray:
    """Times t_n in I with reach(t_0, t_n) = n du, found by bisection inside a coarse reach table."""
    t0, t1 = spacetime.interval
    coarse = np.linspace(t0, t1, n_coarse)
    Fc = np.concatenate([[0.0], np.cumsum([spacetime.causal_reach(float(a), float(b))
                                           for a, b in zip(coarse[:-1], coarse[1:])])])
    out = []
    for n in range(1, int(Fc[-1] / du) + 1):
        u = n * du
        k = min(int(np.searchsorted(Fc, u, side="left")), n_coarse - 1)
        a, b = float(coarse[k - 1]), float(coarse[k])
        target = u - Fc[k - 1]
        for _ in range(80):
            mid = 0.5 * (a + b)
            if spacetime.causal_reach(float(coarse[k - 1]), mid) < target:
                a = mid
            else:
                b = mid
            if b - a <= 1e-15 * max(1.0, abs(b)):
                break
        out.append(b)
    return np.array(out, dtype=float)


def _merge_levels(levels: np.ndarray) -> np.ndarray:
    levels = np.sort(levels)
    keep = np.concatenate([[True], np.diff(levels) > LEVEL_MERGE])
    return levels[keep]


class Lattice:
    """A built causal lattice for one spacetime and one time function."""

    def __init__(
        self,
        spacetime: WarpedSpacetime,
        tf: TimeFunction | None = None,
        config: LatticeConfig | None = None,
        levels: tuple[float, ...] = (),
    ):
        self.spacetime = spacetime
        self.tf = tf if tf is not None else canonical_time()
        self.config = config if config is not None else LatticeConfig()
        base = spacetime.base
        if not isinstance(base, (Interval, Circle)):
            raise PreconditionError("the lattice oracle supports interval and circle bases only")
        cfg = self.config
        t0, t1 = spacetime.interval

        if isinstance(base, Circle):
            self.periodic = True
            self.S = base.circumference * np.arange(cfg.n_space) / cfg.n_space
            self.ds = base.circumference / cfg.n_space
            if 2 * cfg.stencil_radius >= cfg.n_space:
                raise DomainError("stencil radius must be below half the number of circle samples")
        else:
            self.periodic = False
            self.S = np.linspace(base.lo, base.hi, cfg.n_space)
            self.ds = base.length / (cfg.n_space - 1)

        pieces = [np.linspace(t0, t1, cfg.n_time)]
        for a, b, n in cfg.refine:
            a, b = max(a, t0), min(b, t1)
            if b > a:
                pieces.append(np.linspace(a, b, int(n)))
        specials = list(cfg.extra_levels) + list(levels) + list(self.tf.jumps) + [h.t for h in spacetime.holes]
        pieces.append(np.array([s for s in specials if t0 <= s <= t1], dtype=float))
        if cfg.cone_levels:
            pieces.append(_cone_aligned_levels(spacetime, self.ds / cfg.cone_levels))
        self.T = _merge_levels(np.concatenate(pieces))
        self.dt_max = float(np.max(np.diff(self.T)))
        self.dt_uniform = (t1 - t0) / (cfg.n_time - 1)

        # cumulative reach primitive F(t_i) = int_{t_0}^{t_i} dt / f
        gaps = np.array([spacetime.causal_reach(float(a), float(b)) for a, b in zip(self.T[:-1], self.T[1:])])
        self.F = np.concatenate([[0.0], np.cumsum(gaps)])
        self.tau = self.tf.values(self.T)
        self.alive = self._alive_mask()
        self.graph = self._build_graph()
        self.tolerance = max(self.dt_max, spacetime.f_max * self.ds)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.T), len(self.S)

    def node(self, i: int, j: int) -> int:
        return i * len(self.S) + j

    # -- construction -----------------------------------------------------

    def _hole_box(self, hole) -> tuple[float, float, float]:
        r = hole.radius_cells
        if isinstance(hole, PointHole):
            return hole.x - r * self.ds, hole.x + r * self.ds, r * self.dt_uniform
        return hole.x_lo - r * self.ds, hole.x_hi + r * self.ds, r * self.dt_uniform

    def _alive_mask(self) -> np.ndarray:
        alive = np.ones((len(self.T), len(self.S)), dtype=bool)
        for hole in self.spacetime.holes:
            xlo, xhi, rt = self._hole_box(hole)
            rows = np.abs(self.T - hole.t) <= rt + LEVEL_MERGE
            cols = (self.S >= xlo - LEVEL_MERGE) & (self.S <= xhi + LEVEL_MERGE)
            alive[np.ix_(rows, cols)] = False
        return alive

    def _build_graph(self):
        nT, nS = self.shape
        R = self.config.stencil_radius
        rows, cols, weights = [], [], []
        idx = np.arange(nT)
        j = np.arange(nS)
        for k in range(R + 1):
            if k == 0:
                target = idx + 1
            else:
                target = np.searchsorted(self.F, self.F + k * self.ds - CAUSAL_TOL, side="left")
                target = np.maximum(target, idx + 1)
            ok = target < nT
            src_levels = idx[ok]
            dst_levels = target[ok]
            w_levels = np.abs(self.tau[dst_levels] - self.tau[src_levels])
            for sign in ((0,) if k == 0 else (1, -1)):
                jj = j + sign * k
                if self.periodic:
                    jj = jj % nS
                    valid_j = np.ones(nS, dtype=bool)
                else:
                    valid_j = (jj >= 0) & (jj < nS)
                js, jd = j[valid_j], jj[valid_j]
                src = (src_levels[:, None] * nS + js[None, :]).ravel()
                dst = (dst_levels[:, None] * nS + jd[None, :]).ravel()
                w = np.repeat(w_levels, len(js))
                keep = self.alive.ravel()[src] & self.alive.ravel()[dst]
                if self.spacetime.holes:
                    keep &= ~self._crosses_hole(src, dst, nS)
                rows.append(src[keep])
                cols.append(dst[keep])
                weights.append(w[keep])
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        weights = np.concatenate(weights)
        n = nT * nS
        # csgraph treats explicit zeros as missing edges; tau is strictly
        # increasing so all weights are positive
        return coo_matrix((weights, (rows, cols)), shape=(n, n)).tocsr()

    def _crosses_hole(self, src: np.ndarray, dst: np.ndarray, nS: int) -> np.ndarray:
        ta, tb = self.T[src // nS], self.T[dst // nS]
        xa, xb = self.S[src % nS], self.S[dst % nS]
        out = np.zeros(len(src), dtype=bool)
        for hole in self.spacetime.holes:
            xlo, xhi, _ = self._hole_box(hole)
            inside = (ta < hole.t) & (hole.t < tb)
            frac = np.where(inside, (hole.t - ta) / np.where(tb > ta, tb - ta, 1.0), 0.0)
            xc = xa + frac * (xb - xa)
            out |= inside & (xc >= xlo - LEVEL_MERGE) & (xc <= xhi + LEVEL_MERGE)
        return out

    # -- queries ----------------------------------------------------------

    def snap(self, p: SpacetimePoint) -> tuple[int, int, float, float]:
        """Nearest node to p; returns (i, j, time displacement, base displacement)."""
        p = self.spacetime.validate(p)
        i = int(np.argmin(np.abs(self.T - p.t)))
        x = p.x[0]
        if self.periodic:
            j = int(round(x / self.ds)) % len(self.S)
        else:
            j = int(round((x - self.S[0]) / self.ds))
            j = min(max(j, 0), len(self.S) - 1)
        ds = self.spacetime.base.distance(p.x, (float(self.S[j]),))
        return i, j, abs(float(self.T[i]) - p.t), ds

    def node_point(self, i: int, j: int) -> SpacetimePoint:
        return SpacetimePoint(float(self.T[i]), (float(self.S[j]),))

    def snap_slack(self, dt: float, ds: float) -> float:
        if dt == 0.0 and ds == 0.0:
            return 0.0
        return max(self.dt_max, self.spacetime.f_max * self.ds)

    def distances_from(self, nodes: list[int], limit: float = np.inf) -> np.ndarray:
        return dijkstra(self.graph, directed=False, indices=nodes, limit=limit)

    def node_distance(self, a: tuple[int, int], b: tuple[int, int]) -> float:
        """Lattice distance between two nodes, with the exact causal shortcut."""
        pa, pb = self.node_point(*a), self.node_point(*b)
        if self.spacetime.is_causally_related(pa, pb) is not Relation.NONE:
            return abs(float(self.tau[b[0]] - self.tau[a[0]]))
        if not (self.alive[a] and self.alive[b]):
            raise DomainError("query point lies inside a removed region")
        d = self.distances_from([self.node(*a)])[0, self.node(*b)]
        if not np.isfinite(d):
            raise UnreachableError(f"no admissible lattice path between {pa} and {pb}")
        return float(d)


def _bracket(spacetime, tf, p, q) -> float:
    if tf.registry_id == "canonical" and not spacetime.holes:
        return warped_bounds(spacetime, p, q)[0]
    return time_lower_bound(tf, p, q)


def lattice_null_distance(
    spacetime: WarpedSpacetime,
    tf: TimeFunction | None,
    p: SpacetimePoint,
    q: SpacetimePoint,
    config: LatticeConfig | None = None,
    include_query_levels: bool = True,
    lattice: Lattice | None = None,
) -> DistanceResult:
    """Upper bound on the null distance by a shortest causal-lattice path."""
    tf = tf if tf is not None else canonical_time()
    p, q = spacetime.validate(p), spacetime.validate(q)
    for r in (p, q):
        if spacetime.hole_contains(r):
            raise DomainError(f"point {r} lies in a removed region")
    if lattice is None:
        levels = (p.t, q.t) if include_query_levels else ()
        lattice = Lattice(spacetime, tf, config, levels)
    ip, jp, dtp, dsp = lattice.snap(p)
    iq, jq, dtq, dsq = lattice.snap(q)
    value = lattice.node_distance((ip, jp), (iq, jq))
    slack = lattice.snap_slack(dtp, dsp) + lattice.snap_slack(dtq, dsq)
    lo = min(_bracket(spacetime, tf, p, q), value)
    return DistanceResult(
        value,
        lo,
        value + slack,
        Method.LATTICE,
        {
            "snap": {"p": [dtp, dsp], "q": [dtq, dsq]},
            "lattice_tolerance": lattice.tolerance,
            "shape": list(lattice.shape),
            "stencil_radius": lattice.config.stencil_radius,
        },
    )


def lattice_distance_matrix(
    spacetime: WarpedSpacetime,
    tf: TimeFunction | None,
    points: list[SpacetimePoint],
    config: LatticeConfig | None = None,
    lattice: Lattice | None = None,
) -> tuple[np.ndarray, Lattice]:
    """Symmetric matrix of lattice null distances between sample points.

    Points are snapped to nodes (their times are added as levels). Causally
    related pairs get |dtau| exactly. For circle bases one shortest-path tree
    per distinct time level suffices, by rotation invariance of the lattice.
    """
    tf = tf if tf is not None else canonical_time()
    pts = [spacetime.validate(p) for p in points]
    if lattice is None:
        lattice = Lattice(spacetime, tf, config, tuple(sorted({p.t for p in pts})))
    snapped = [lattice.snap(p)[:2] for p in pts]
    for (i, j), p in zip(snapped, pts):
        if not lattice.alive[i, j]:
            raise DomainError(f"point {p} lies in a removed region")
    n = len(pts)
    nS = len(lattice.S)
    M = np.zeros((n, n))
    node_pts = [lattice.node_point(i, j) for i, j in snapped]
    related = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(a + 1, n):
            related[a, b] = related[b, a] = (
                spacetime.is_causally_related(node_pts[a], node_pts[b]) is not Relation.NONE
            )
    if lattice.periodic and not spacetime.holes:
        levels = sorted({i for i, _ in snapped})
        trees = dict(zip(levels, lattice.distances_from([lattice.node(i, 0) for i in levels])))
        for a, (ia, ja) in enumerate(snapped):
            tree = trees[ia]
            for b, (ib, jb) in enumerate(snapped):
                if a != b:
                    M[a, b] = tree[ib * nS + (jb - ja) % nS]
    else:
        sources = sorted({lattice.node(i, j) for i, j in snapped})
        trees = dict(zip(sources, lattice.distances_from(sources)))
        for a, (ia, ja) in enumerate(snapped):
            tree = trees[lattice.node(ia, ja)]
            for b, (ib, jb) in enumerate(snapped):
                if a != b:
                    M[a, b] = tree[lattice.node(ib, jb)]
    for a in range(n):
        for b in range(n):
            if a != b and related[a, b]:
                M[a, b] = abs(float(lattice.tau[snapped[b][0]] - lattice.tau[snapped[a][0]]))
            if snapped[a] == snapped[b]:
                M[a, b] = 0.0
    if not np.all(np.isfinite(M)):
        raise UnreachableError("some sample points are not connected in the lattice")
    # both entries are lengths of admissible curves, so the smaller is valid for both
    M = np.minimum(M, M.T)
    return M, lattice
