"""The null distance detects causality, unless the spacetime has holes.

On a warped product, a pair is causally related exactly when its null
distance equals the time difference. Removing the point (1, 1) from Minkowski
space breaks this for (0, 0) and (2, 2): they are no longer causally related,
but zigzags around the hole still give distance 2.
"""

import numpy as np

from nulldist import Interval, WarpedSpacetime, point
from nulldist.checks import encodes_causality_check
from nulldist.lattice import LatticeConfig, lattice_distance_matrix
from nulldist.spacetime import PointHole, quadratic_warping, time_function


def _check(st, tf, pts, config, margin_factor):
    M, lat = lattice_distance_matrix(st, tf, pts, config)
    pairs = [(pts[a], pts[b]) for a in range(len(pts)) for b in range(a + 1, len(pts))]
    dists = [M[a, b] for a in range(len(pts)) for b in range(a + 1, len(pts))]
    tol = 3 * lat.tolerance
    return encodes_causality_check(st, tf, pairs, tol, dists, margin=margin_factor * tol)


def main() -> None:
    interval = (0.0, 2.0)
    st = WarpedSpacetime(interval, Interval(4.0), quadratic_warping(interval))
    rng = np.random.default_rng(0)
    pts = [point(float(t), float(x)) for t, x in zip(rng.uniform(0, 2, 10), rng.uniform(-2, 2, 10))]
    r = _check(st, time_function("canonical"), pts, LatticeConfig(201, 201, 4), 1.0)
    print(f"f = t^2 + 1: {r['agreements']} of {r['pairs']} decided pairs agree, {len(r['violators'])} violators")

    holed = WarpedSpacetime.product((-1, 3), Interval(6.0, 1.0), holes=[PointHole(1.0, 1.0, 0.25)])
    r = _check(holed, time_function("canonical"), [point(0, 0), point(2, 2)], LatticeConfig(401, 601, 4), 0.0)
    for v in r["violators"]:
        print(f"removed point: {v['p']} and {v['q']} are not related, yet the distance is {v['distance']:.4f}")


if __name__ == "__main__":
    main()
