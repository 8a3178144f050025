"""Null distance on a product strip and on a warped product.

On the Minkowski strip the null distance has the closed form
max(|dt|, d_sigma). The lattice gives an upper bound that approaches it.
With f(t) = t^2 + 1 the distance between (0, -1) and (0, 1) is 2. No curve
attains it: zigzags hugging the slice t = 0 only approach it from above.
"""

from nulldist import Interval, WarpedSpacetime, point
from nulldist.distance import warped_bounds
from nulldist.engine import null_distance
from nulldist.lattice import LatticeConfig
from nulldist.spacetime import quadratic_warping


def main() -> None:
    strip = WarpedSpacetime.product((0.0, 2.0), Interval(4.0))
    p, q = point(0.0, 0.0), point(0.5, 1.5)
    exact = null_distance(strip, p, q, method="closed")
    approx = null_distance(strip, p, q, method="lattice", config=LatticeConfig(201, 201, 4))
    print(f"strip: closed form {exact.value:.6f}, lattice {approx.value:.6f}")

    interval = (0.0, 2.0)
    warped = WarpedSpacetime(interval, Interval(4.0), quadratic_warping(interval))
    p, q = point(0.0, -1.0), point(0.0, 1.0)
    lo, hi = warped_bounds(warped, p, q)
    print(f"warped bounds [{lo:.4f}, {hi:.4f}]")
    for n in (51, 101, 201, 401):
        value = null_distance(warped, p, q, method="lattice", config=LatticeConfig(n, n, 4)).value
        print(f"  lattice {n:>3} x {n:<3}: {value:.5f}")
    print("values decrease toward 2 and stay above it")


if __name__ == "__main__":
    main()
