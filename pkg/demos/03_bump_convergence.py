"""Warping sequences and their limits.

f_j rises from h0 at t = 0 to 1 by t = 1/j. The null distances d_j converge
uniformly to a metric that is cheap through the bottom slice. That limit is
not the null distance of f = 1. The script prints the convergence table and
writes a log-log plot of eps_j with its GH and SWIF bounds.
"""

import math
import sys

from nulldist import Circle
from nulldist.convergence import d0_limit, rising_bump_sequence, grid_sample, run_convergence_experiment
from nulldist.lattice import LatticeConfig
from nulldist.svg import convergence_svg


def main(out: str = "bump_convergence.svg") -> None:
    base = Circle(2 * math.pi)
    seq = rising_bump_sequence(0.5, (2, 4, 8))
    config = lambda j: LatticeConfig(257, 128, 6, refine=((0.0, 1.0 / j, 200),))
    report = run_convergence_experiment(seq, d0_limit(0.5), base, grid_sample(base, 5, 8), config, tolerance=0.1)
    print(" j   eps_j    GH bound  SWIF bound  sandwich violations")
    for r in report.rows:
        print(f"{r.j:>2}  {r.eps:.4f}  {r.gh_bound:.4f}   {r.swif_bound:9.2f}   {r.sandwich_violations}")
    print(f"verdict: {report.verdict}")
    with open(out, "w") as fh:
        fh.write(convergence_svg(report))
    print(f"plot written to {out}")


if __name__ == "__main__":
    main(*sys.argv[1:])
