"""Time-profile dynamic program over a fixed base geodesic.

A curve that projects monotonically onto a minimizing geodesic of length D is
described by its time profile l(u), u in [0, D]. Over one arc step du, going
from level a to level b costs |t_b - t_a| if reach(a, b) >= du (a causal
piece), and otherwise the missing distance is covered by arbitrarily fine
null teeth at the cheapest level c between a and b, which costs f(c) per unit
of base distance. Because f depends on t only, the step cost matrix is the
same for every arc step and the program is a repeated min-plus product.
"""

from __future__ import annotations

import numpy as np

from .base_geometry import Circle, Interval
from .distance import DistanceResult, Method, warped_bounds
from .errors import PreconditionError
from .spacetime import Relation, SpacetimePoint, WarpedSpacetime


def _step_costs(spacetime: WarpedSpacetime, T: np.ndarray, du: float) -> np.ndarray:
    n = len(T)
    gaps = np.array([spacetime.causal_reach(float(a), float(b)) for a, b in zip(T[:-1], T[1:])])
    F = np.concatenate([[0.0], np.cumsum(gaps)])
    fvals = np.array([spacetime.warping(float(t)) for t in T])
    reach = np.abs(F[None, :] - F[:, None])
    dt = np.abs(T[None, :] - T[:, None])
    # cheapest level between a and b, by running minima
    fmin = np.empty((n, n))
    for a in range(n):
        run = np.minimum.accumulate(fvals[a:])
        fmin[a, a:] = run
        fmin[a:, a] = run
    short = np.maximum(du - reach, 0.0)
    return dt + fmin * short


def profile_null_distance(
    spacetime: WarpedSpacetime, p: SpacetimePoint, q: SpacetimePoint, n_levels: int = 201, n_steps: int | None = None
) -> DistanceResult:
    """Infimum over monotone-projection curves, computed on a (u, t) grid.

    Levels are uniform in I together with t_p and t_q. The value is the
    limit of lengths of admissible zig-zag curves over the geodesic, hence an
    upper bound on the null distance.
    """
    if not isinstance(spacetime.base, (Interval, Circle)):
        raise PreconditionError("profile solver supports interval and circle bases only")
    p, q = spacetime.validate(p), spacetime.validate(q)
    if spacetime.is_causally_related(p, q) is not Relation.NONE:
        raise PreconditionError("profile solver needs a non-causal pair; causal pairs have distance |dtau|")
    D = spacetime.base.distance(p.x, q.x)
    t0, t1 = spacetime.interval
    T = np.union1d(np.linspace(t0, t1, n_levels), [p.t, q.t])
    T = np.union1d(T, [b for b in spacetime.warping.breakpoints if t0 < b < t1])
    n_steps = n_steps if n_steps is not None else n_levels
    du = D / n_steps
    C = _step_costs(spacetime, T, du)
    ip = int(np.searchsorted(T, p.t))
    iq = int(np.searchsorted(T, q.t))
    V = np.full(len(T), np.inf)
    V[ip] = 0.0
    for _ in range(n_steps):
        V = np.min(V[:, None] + C, axis=0)
    value = float(V[iq])
    lo = min(warped_bounds(spacetime, p, q)[0], value)
    return DistanceResult(value, lo, value, Method.PROFILE, {"n_levels": len(T), "n_steps": n_steps})
