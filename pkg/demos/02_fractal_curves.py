"""Fractal curve families and their null lengths.

Each family converges uniformly to the diagonal from (0, 0) to (1, 1), whose
null length is 1. The timelike family keeps length 2 and the null family keeps
length 5. For the square-root time function the lengths decrease to 1 but
never reach it.
"""

from nulldist.curves import (
    fractal_family,
    null_length,
    sqrt_family_length,
    sup_distance_to_diagonal,
)
from nulldist.spacetime import time_function


def main() -> None:
    canonical, sqrt_time = time_function("canonical"), time_function("sqrt")
    print(" i  sup dist   timelike  null   sqrt length       formula")
    for i in (1, 2, 4, 8, 12):
        tl = fractal_family("timelike_2", i)
        nl = fractal_family("null_5", i)
        sq = fractal_family("sqrt_nonattained", i)
        print(f"{i:>2}  {sup_distance_to_diagonal(tl):.2e}  {null_length(tl, canonical):>6.3f}  "
              f"{null_length(nl, canonical):>5.3f}  {null_length(sq, sqrt_time):.12f}  {sqrt_family_length(i):.12f}")


if __name__ == "__main__":
    main()
