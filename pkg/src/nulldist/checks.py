"""Structural checks on computed null distances.

Each check returns a plain report dictionary with a boolean "passed" entry so
the command line can serialize it directly.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .distance import null_distance_sigma
from .errors import PreconditionError
from .lattice import LatticeConfig, lattice_distance_matrix
from .spacetime import (
    AUDIT_POINTS,
    Relation,
    SpacetimePoint,
    TimeFunction,
    WarpedSpacetime,
    canonical_time,
)


def encodes_causality_check(
    spacetime: WarpedSpacetime,
    tf: TimeFunction,
    pairs: Sequence[tuple[SpacetimePoint, SpacetimePoint]],
    tol: float,
    distances: Sequence[float],
    margin: float = 0.0,
) -> dict:
    """Compare "d = tau(q) - tau(p)" with the causal relation on every pair.

    Pairs are oriented so that tau(p) <= tau(q); a pair agrees when the
    distance identity holds exactly for the causally related pairs. For
    pairs outside the cone, d - dtau tends to zero at the cone boundary, so a
    finite tolerance cannot decide them there: pairs with
    |d_sigma - reach| < margin are reported as ambiguous and not judged.
    """
    rows = []
    violators = []
    ambiguous = 0
    for (p, q), d in zip(pairs, distances):
        if tf(p.t) > tf(q.t):
            p, q = q, p
        gap = tf.increment(p.t, q.t)
        related = spacetime.is_causally_related(p, q) is Relation.BEFORE
        excess = spacetime.base.distance(p.x, q.x) - spacetime.causal_reach(p.t, q.t)
        if not related and abs(excess) < margin:
            ambiguous += 1
            continue
        identity = abs(d - gap) <= tol
        ok = identity == related
        rows.append({"p": list(p.as_tuple()), "q": list(q.as_tuple()), "distance": d, "dtau": gap,
                     "identity": identity, "related": related, "agrees": ok})
        if not ok:
            violators.append(rows[-1])
    return {
        "pairs": len(rows),
        "agreements": len(rows) - len(violators),
        "ambiguous": ambiguous,
        "violators": violators,
        "tolerance": tol,
        "margin": margin,
        "passed": not violators,
    }


def product_distance(p: SpacetimePoint, q: SpacetimePoint, spacetime: WarpedSpacetime) -> float:
    """Riemannian product distance sqrt(dt^2 + d_sigma^2)."""
    return math.hypot(q.t - p.t, spacetime.base.distance(p.x, q.x))


def anti_lipschitz_modulus(
    spacetime: WarpedSpacetime,
    tf: TimeFunction,
    pairs: Sequence[tuple[SpacetimePoint, SpacetimePoint]],
    background: Callable[[SpacetimePoint, SpacetimePoint, WarpedSpacetime], float] = product_distance,
) -> dict:
    """Largest C with tau(q) - tau(p) >= C d(p, q) over the sampled causal pairs."""
    ratios = []
    for p, q in pairs:
        rel = spacetime.is_causally_related(p, q)
        if rel is Relation.NONE or p == q:
            continue
        if rel is Relation.AFTER:
            p, q = q, p
        d = background(p, q, spacetime)
        if d > 0:
            ratios.append((tf(q.t) - tf(p.t)) / d)
    if not ratios:
        return {"modulus": 0.0, "inconclusive": True, "causal_pairs": 0}
    return {"modulus": max(0.0, min(ratios)), "inconclusive": False, "causal_pairs": len(ratios)}


def completeness_certificate(
    spacetime: WarpedSpacetime,
    tf: TimeFunction,
    pairs: Sequence[tuple[SpacetimePoint, SpacetimePoint]],
    distances: Sequence[float],
    tol: float = 1e-12,
) -> dict:
    """Check d(p, q) >= C d_h(p, q) with C the sampled anti-Lipschitz modulus.

    A modulus at or below tol counts as zero, so the report fails for time
    functions whose sampled modulus is lost in floating point.
    """
    if not spacetime.complete:
        raise PreconditionError("completeness certificate needs a complete base without holes")
    mod = anti_lipschitz_modulus(spacetime, tf, pairs)
    C = mod["modulus"]
    distinct = [(p, q, d) for (p, q), d in zip(pairs, distances) if p != q]
    if not distinct:
        return {"modulus": C, "failures": [], "passed": True, "trivial": True}
    failures = []
    for p, q, d in distinct:
        need = C * product_distance(p, q, spacetime)
        if d < need - tol:
            failures.append({"p": list(p.as_tuple()), "q": list(q.as_tuple()), "distance": d, "required": need})
    return {"modulus": C, "failures": failures, "passed": C > tol and not failures, "trivial": False}


def conformal_invariance_check(
    spacetime: WarpedSpacetime,
    psi: Callable[[float], float],
    points: Sequence[SpacetimePoint],
    config: LatticeConfig,
    tf: TimeFunction | None = None,
) -> dict:
    """Lattice distances for g and psi^2 g, which have the same cones."""
    tf = tf if tf is not None else canonical_time()
    M1, _ = lattice_distance_matrix(spacetime, tf, list(points), config)
    M2, _ = lattice_distance_matrix(spacetime.with_conformal(psi), tf, list(points), config)
    diff = float(np.max(np.abs(M1 - M2))) if M1.size else 0.0
    return {
        "max_difference": diff,
        "bitwise_equal": bool(np.array_equal(M1, M2)),
        "passed": diff <= 1e-12,
    }


def audit_order(f1, f2, interval: tuple[float, float], tol: float = 1e-12) -> bool:
    grid = np.linspace(interval[0], interval[1], AUDIT_POINTS)
    return all(f1(float(t)) <= f2(float(t)) + tol for t in grid)


def cone_monotonicity_check(
    smaller: WarpedSpacetime,
    larger: WarpedSpacetime,
    points: Sequence[SpacetimePoint],
    config: LatticeConfig,
    tol: float,
    tf: TimeFunction | None = None,
) -> dict:
    """Smaller warping means wider cones and hence a smaller null distance."""
    if smaller.interval != larger.interval or smaller.base != larger.base:
        raise PreconditionError("cone comparison needs the same interval and base")
    if not audit_order(smaller.warping, larger.warping, smaller.interval):
        raise PreconditionError("warpings are not pointwise ordered")
    M1, _ = lattice_distance_matrix(smaller, tf, list(points), config)
    M2, _ = lattice_distance_matrix(larger, tf, list(points), config)
    excess = M1 - M2
    worst = float(excess.max()) if excess.size else 0.0
    return {"max_excess": worst, "tolerance": tol, "passed": worst <= tol, "smaller": M1, "larger": M2}


def sandwich_violations(
    spacetime: WarpedSpacetime, points: Sequence[SpacetimePoint], M: np.ndarray, tol: float
) -> list[dict]:
    """Pairs whose distance leaves the warped-product bracket by more than tol."""
    from .distance import warped_bounds

    out = []
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            lo, hi = warped_bounds(spacetime, points[a], points[b])
            d = M[a, b]
            if d < lo - tol or d > hi + tol:
                out.append({"a": a, "b": b, "distance": float(d), "bracket": [lo, hi]})
    return out


def product_reference(spacetime: WarpedSpacetime, points: Sequence[SpacetimePoint]) -> np.ndarray:
    n = len(points)
    return np.array([[null_distance_sigma(spacetime, points[a], points[b]) for b in range(n)] for a in range(n)])
