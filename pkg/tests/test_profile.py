import math

import pytest

from nulldist.base_geometry import Circle, Interval
from nulldist.errors import PreconditionError
from nulldist.lattice import LatticeConfig, lattice_null_distance
from nulldist.profile import profile_null_distance
from nulldist.spacetime import WarpedSpacetime, bump_warping, constant_warping, point, quadratic_warping


def test_constant_warping_gives_c_times_distance():
    st = WarpedSpacetime((0, 2), Interval(4.0), constant_warping(1.5))
    r = profile_null_distance(st, point(0.5, -1), point(0.5, 1), n_levels=81)
    assert r.value == pytest.approx(3.0, abs=1e-9)


def test_quadratic_warping_approaches_two():
    st = WarpedSpacetime((0, 2), Interval(4.0), quadratic_warping((0, 2)))
    r = profile_null_distance(st, point(0, -1), point(0, 1), n_levels=101)
    assert 2.0 - 1e-9 <= r.value <= 2.0 + 1e-2


def test_bump_family_at_level_zero():
    h0, j = 0.5, 4
    st = WarpedSpacetime((0, 2), Circle(2 * math.pi), bump_warping(h0, j))
    r = profile_null_distance(st, point(0, 0.0), point(0, 2.0), n_levels=101)
    assert r.value == pytest.approx(h0 * 2.0, abs=1e-6)


def test_profile_agrees_with_lattice_within_tolerance():
    st = WarpedSpacetime((0, 1), Interval(4.0), quadratic_warping((0, 1)))
    p, q = point(0.3, -1.2), point(0.6, 1.1)
    prof = profile_null_distance(st, p, q, n_levels=101)
    # sloped stretches round every edge up to the next level, so the lattice needs dense levels
    lat = lattice_null_distance(st, None, p, q, LatticeConfig(1601, 201, 4))
    assert abs(prof.value - lat.value) <= lat.details["lattice_tolerance"]


def test_causal_pairs_are_rejected(minkowski):
    with pytest.raises(PreconditionError):
        profile_null_distance(minkowski, point(0, 0), point(1, 0.5))
