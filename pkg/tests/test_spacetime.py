import math

import pytest

from nulldist.base_geometry import Circle, Interval
from nulldist.errors import DomainError, PreconditionError
from nulldist.spacetime import (
    PointHole,
    Relation,
    SegmentHole,
    WarpedSpacetime,
    WarpingFunction,
    bump_warping,
    collapse_warping,
    constant_warping,
    point,
    quadratic_warping,
    random_trig_warping,
    sine_perturbed_warping,
    time_function,
    warping_function,
)


def test_reach_of_unit_and_constant_warpings(minkowski):
    assert minkowski.causal_reach(0.0, 1.5) == pytest.approx(1.5, abs=1e-12)
    st = WarpedSpacetime((0, 2), Interval(4.0), constant_warping(2.0))
    assert st.causal_reach(2.0, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_reach_of_quadratic_warping_is_arctan():
    st = WarpedSpacetime((0, 2), Interval(4.0), quadratic_warping((0, 2)))
    assert st.causal_reach(0.0, 2.0) == pytest.approx(math.atan(2.0), abs=1e-9)


def test_relation_in_minkowski(minkowski):
    assert minkowski.is_causally_related(point(0, 0), point(2, 1)) is Relation.BEFORE
    assert minkowski.is_causally_related(point(2, 1), point(0, 0)) is Relation.AFTER
    assert minkowski.is_causally_related(point(0, -1), point(0, 1)) is Relation.NONE
    # a null pair sits on the cone and counts as related
    assert minkowski.is_causally_related(point(0, 0), point(1, 1)) is Relation.BEFORE


def test_point_hole_blocks_only_the_null_line_through_it():
    st = WarpedSpacetime.product((-1, 3), Interval(6.0, 1.0), holes=[PointHole(1.0, 1.0)])
    assert st.is_causally_related(point(0, 0), point(2, 2)) is Relation.NONE
    assert st.is_causally_related(point(0, 0), point(2, 1.5)) is Relation.BEFORE
    assert st.hole_contains(point(1, 1))


def test_segment_hole_blocks_the_whole_cone_section():
    st = WarpedSpacetime.product((-1, 3), Interval(6.0, 0.0), holes=[SegmentHole(1.0, -1.0, 1.0)])
    assert st.is_causally_related(point(0, 0), point(2, 0.5)) is Relation.NONE
    assert st.is_causally_related(point(0, 0), point(2, 2)) is Relation.NONE
    assert st.is_causally_related(point(0, 0.5), point(2, 2.5)) is Relation.BEFORE


def test_holes_need_interval_base():
    with pytest.raises(PreconditionError):
        WarpedSpacetime.product((0, 2), Circle(1.0), holes=[PointHole(1.0, 0.5)])


def test_points_outside_domain_rejected(minkowski):
    with pytest.raises(DomainError):
        minkowski.validate(point(2.5, 0))
    with pytest.raises(DomainError):
        minkowski.validate(point(1.0, 3.0))


def test_conformal_factor_does_not_change_reach(minkowski):
    psi = minkowski.with_conformal(lambda t: 1 + t * t)
    assert psi.causal_reach(0.0, 1.7) == pytest.approx(minkowski.causal_reach(0.0, 1.7), abs=1e-12)


def test_declared_bounds_are_audited():
    bad = WarpingFunction(lambda t: t + 1.0, 1.0, 2.0, "t+1")
    with pytest.raises(DomainError):
        WarpedSpacetime((0, 2), Interval(1.0), bad)
    with pytest.raises(DomainError):
        WarpingFunction(lambda t: 1.0, 0.0, 1.0, "zero floor")


@pytest.mark.parametrize("j", [1, 2, 5, 16])
def test_registered_families_respect_their_ranges(j):
    for f, lo, hi in [
        (bump_warping(0.5, j), 0.5, 1.0),
        (bump_warping(2.0, j), 1.0, 2.0),
        (collapse_warping(j), 1.0 / j, 1.0),
    ]:
        assert f.audit((0.0, 2.0)) is not None
        assert f.f_min == pytest.approx(lo) and f.f_max == pytest.approx(hi)
    assert bump_warping(0.5, j)(0.0) == 0.5
    assert bump_warping(0.5, j)(1.0 / j + 1e-9) == 1.0


def test_collapse_family_is_pointwise_decreasing():
    for j in range(1, 12):
        a, b = collapse_warping(j), collapse_warping(j + 1)
        for k in range(201):
            t = 2 * k / 200
            assert b(t) <= a(t) + 1e-15


def test_sine_and_random_warpings():
    f = sine_perturbed_warping(4)
    assert f.f_min == 0.75 and f.f_max == 1.25
    for seed in range(5):
        g = random_trig_warping(seed, (0.0, 2.0))
        g.audit((0.0, 2.0))
        assert g.f_min > 0


def test_registry_validates_h0():
    assert warping_function("rising_bump", h0=0.3, j=2).f_min == 0.3
    with pytest.raises(DomainError):
        warping_function("rising_bump", h0=1.5, j=2)
    with pytest.raises(DomainError):
        warping_function("falling_bump", h0=0.5, j=2)
    with pytest.raises(DomainError):
        warping_function("nope")


def test_time_function_registry():
    assert time_function("sqrt")(1.0) == 1.0
    assert time_function("sqrt")(4.0) == 3.0
    assert time_function("step")(0.0) == 0.0 and time_function("step")(0.5) == 1.5
    assert time_function("scaled", c=2.0)(1.5) == 3.0
    for name in ("canonical", "cubic", "step", "sqrt", "sqrt_bar", "phi_cubic"):
        time_function(name).audit((-1.0, 2.0))
    with pytest.raises(DomainError):
        time_function("cubic", c=1)


def test_sqrt_increment_is_cancellation_free():
    tf = time_function("sqrt")
    a, b = 1.0 - 2.0**-40, 1.0
    exact = 2.0**-40 / (1.0 + math.sqrt(a))
    assert tf.increment(a, b) == pytest.approx(exact, rel=1e-15)
    assert tf.increment(0.5, 2.0) == pytest.approx(math.sqrt(2.0) + 1.0 - math.sqrt(0.5), abs=1e-15)
