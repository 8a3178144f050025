"""Finite metric spaces: uniform and Hausdorff distances, GH/SWIF bounds, axiom checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError
from .spacetime import SpacetimePoint, WarpedSpacetime


@dataclass
class FiniteMetricSpace:
    """Sample points with a symmetric distance matrix (zero diagonal).

    The triangle inequality is only checked, never assumed; `tolerance` is the
    discretization tolerance of whatever produced the matrix.
    """

    points: list[SpacetimePoint]
    matrix: np.ndarray
    label: str = ""
    tolerance: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        n = len(self.points)
        if self.matrix.shape != (n, n):
            raise DomainError(f"matrix shape {self.matrix.shape} does not match {n} points")
        if np.any(self.matrix < 0):
            raise DomainError("distances must be nonnegative")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def definite(self) -> bool:
        off = self.matrix[~np.eye(len(self), dtype=bool)]
        return bool(off.size == 0 or off.min() > 0)

    def min_off_diagonal(self) -> float:
        off = self.matrix[~np.eye(len(self), dtype=bool)]
        return float(off.min()) if off.size else math.inf


@dataclass(frozen=True)
class MassProxy:
    """Bi-Lipschitz volume bound standing in for the current mass."""

    dimension: int
    value: float
    method: str = "BiLipschitzVolume"
    note: str = "proxy: lambda^m |I| vol(Sigma); boundary mass term not included"

    def __post_init__(self):
        if self.value < 0:
            raise DomainError("mass must be nonnegative")


def _same_points(A: FiniteMetricSpace, B: FiniteMetricSpace) -> None:
    if len(A) != len(B) or any(p != q for p, q in zip(A.points, B.points)):
        raise DomainError("uniform distance needs identical point lists")


def uniform_distance(A: FiniteMetricSpace, B: FiniteMetricSpace) -> float:
    """max |d_A - d_B| over all pairs; a lower estimate of the continuum sup."""
    _same_points(A, B)
    if len(A) == 0:
        return 0.0
    return float(np.max(np.abs(A.matrix - B.matrix)))


def worst_pair(A: FiniteMetricSpace, B: FiniteMetricSpace) -> tuple[int, int]:
    _same_points(A, B)
    k = int(np.argmax(np.abs(A.matrix - B.matrix)))
    return divmod(k, len(A))


def gh_upper_bound(eps: float) -> float:
    """d_GH((X, d_j), (X, d_inf)) <= 2 eps."""
    if eps < 0:
        raise DomainError("eps must be nonnegative")
    return 2.0 * eps


def swif_upper_bound(eps: float, lam: float, n: int, mass: MassProxy | float) -> float:
    """Intrinsic flat bound 2^((n+1)/2) lambda^(n+1) 2 eps M."""
    if eps < 0:
        raise DomainError("eps must be nonnegative")
    if lam < 1:
        raise DomainError(f"bi-Lipschitz constant must be at least 1, got {lam}")
    m = mass.value if isinstance(mass, MassProxy) else float(mass)
    return 2.0 ** ((n + 1) / 2.0) * lam ** (n + 1) * 2.0 * eps * m


def mass_proxy(spacetime: WarpedSpacetime, lam: float) -> MassProxy:
    """lambda^m |I| vol(Sigma) with m = 1 + dim(Sigma)."""
    if lam < 1:
        raise DomainError("bi-Lipschitz constant must be at least 1")
    t0, t1 = spacetime.interval
    m = 1 + spacetime.base.dim
    return MassProxy(m, lam**m * (t1 - t0) * spacetime.base.volume())


def mass_proxy_value(lam: float, length: float, volume: float, dim_base: int) -> MassProxy:
    """The proxy from raw data; allows the degenerate |I| = 0."""
    m = 1 + dim_base
    return MassProxy(m, lam**m * length * volume)


def hausdorff_distance(ambient: FiniteMetricSpace, A: Sequence[int], B: Sequence[int]) -> float:
    """max of the two directed sup-inf distances between index sets."""
    A, B = list(A), list(B)
    if not A or not B:
        raise DomainError("Hausdorff distance needs nonempty sets")
    sub = ambient.matrix[np.ix_(A, B)]
    return float(max(sub.min(axis=1).max(), sub.min(axis=0).max()))


def metric_axioms_check(space: FiniteMetricSpace, tol: float, tol_def: float = 0.0) -> dict:
    """Symmetry (exact), zero diagonal, triangle within tol, and definiteness."""
    M = space.matrix
    n = len(space)
    symmetric = bool(np.array_equal(M, M.T))
    diag_zero = bool(np.all(np.diag(M) == 0))
    worst = 0.0
    for k in range(n):
        # d(i, j) - d(i, k) - d(k, j) over all i, j for the intermediate k
        excess = M - (M[:, k][:, None] + M[k, :][None, :])
        worst = max(worst, float(excess.max()) if n else 0.0)
    triangle = worst <= tol
    min_off = space.min_off_diagonal()
    definite = n < 2 or min_off > tol_def
    return {
        "symmetric": symmetric,
        "zero_diagonal": diag_zero,
        "triangle_excess": worst,
        "triangle": triangle,
        "min_off_diagonal": min_off,
        "definite": definite,
        "passed": symmetric and diag_zero and triangle and definite,
    }


def midpoint_property_check(
    space: FiniteMetricSpace, lattice, tol: float, pairs: Sequence[tuple[int, int]] | None = None
) -> dict:
    """Search lattice nodes for approximate midpoints of sampled pairs.

    For each pair (p, q) a node m must satisfy
    max(d(p, m), d(m, q)) <= d(p, q) / 2 + tol, with d(., m) read from the
    shortest-path trees of the lattice that produced the matrix.
    """
    n = len(space)
    if pairs is None:
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    snapped = [lattice.snap(p)[:2] for p in space.points]
    sources = sorted({lattice.node(i, j) for i, j in snapped})
    trees = dict(zip(sources, lattice.distances_from(sources)))
    alive = lattice.alive.ravel()
    failures = []
    worst = -math.inf
    for a, b in pairs:
        ta = trees[lattice.node(*snapped[a])]
        tb = trees[lattice.node(*snapped[b])]
        reach = np.where(alive, np.maximum(ta, tb), np.inf)
        best = float(reach.min())
        slack = best - 0.5 * space.matrix[a, b]
        worst = max(worst, slack)
        if slack > tol:
            failures.append({"a": a, "b": b, "distance": float(space.matrix[a, b]), "best_half": best})
    return {"pairs": len(pairs), "failures": failures, "worst_excess": worst, "tolerance": tol,
            "passed": not failures}
