import math

import pytest

from nulldist.base_geometry import Circle, Interval
from nulldist.distance import DistanceResult, Method, closed, product_null_distance, warped_bounds
from nulldist.engine import closed_form, null_distance
from nulldist.errors import DomainError, PreconditionError
from nulldist.lattice import LatticeConfig
from nulldist.spacetime import WarpedSpacetime, constant_warping, point, quadratic_warping, time_function


def test_product_formula_cases(minkowski):
    assert product_null_distance(minkowski, point(0, -1), point(0, 1)).value == 2.0
    assert product_null_distance(minkowski, point(0, 0), point(2, 1)).value == 2.0
    assert product_null_distance(minkowski, point(1, 0.5), point(1, 0.5)).value == 0.0
    r = product_null_distance(minkowski, point(0.5, -1.0), point(1.0, 1.0))
    assert r.method is Method.CLOSED_FORM and r.lower_bound == r.value == r.upper_bound == 2.0


def test_product_formula_on_circle(cylinder):
    assert product_null_distance(cylinder, point(0, 0.0), point(0.5, math.pi)).value == pytest.approx(math.pi)


def test_product_formula_preconditions():
    st = WarpedSpacetime((0, 2), Interval(4.0), constant_warping(2.0))
    with pytest.raises(PreconditionError):
        product_null_distance(st, point(0, 0), point(0, 1))
    with pytest.raises(PreconditionError):
        product_null_distance(WarpedSpacetime.product((0, 2), Interval(4)), point(0, 0), point(0, 1),
                              time_function("cubic"))


def test_warped_bounds_quadratic_example():
    st = WarpedSpacetime((0, 2), Interval(4.0), quadratic_warping((0, 2)))
    assert warped_bounds(st, point(0, -1), point(0, 1)) == (2.0, 10.0)


def test_warped_bounds_causal_and_unit(minkowski):
    assert warped_bounds(minkowski, point(0, 0), point(1, 0.2)) == (1.0, 1.0)
    lo, hi = warped_bounds(minkowski, point(0.3, -1), point(0.5, 1))
    assert lo == hi == 2.0


def test_constant_warping_bracket_collapses():
    st = WarpedSpacetime((0, 2), Interval(4.0), constant_warping(3.0))
    lo, hi = warped_bounds(st, point(0, -1), point(0, 1))
    assert lo == hi == 6.0


def test_distance_result_invariants():
    with pytest.raises(ValueError):
        DistanceResult(1.0, 1.5, 2.0, Method.LATTICE)
    with pytest.raises(ValueError):
        DistanceResult(1.0, 0.5, 1.0, Method.CLOSED_FORM)
    assert closed(0.25).to_dict() == {"value": 0.25, "lower_bound": 0.25, "upper_bound": 0.25, "method": "ClosedForm"}


def test_engine_dispatch(minkowski):
    assert null_distance(minkowski, point(0, -1), point(0, 1)).method is Method.CLOSED_FORM
    st = WarpedSpacetime((0, 0.1), Interval(4.0), quadratic_warping((0, 0.1)))
    r = null_distance(st, point(0, -1), point(0, 1), config=LatticeConfig(41, 401, 4))
    assert r.method is Method.LATTICE and r.value > 2.0
    with pytest.raises(PreconditionError):
        closed_form(st, time_function("canonical"), point(0, -1), point(0, 1))
    with pytest.raises(DomainError):
        null_distance(st, point(0, -1), point(0, 1), method="magic")


def test_engine_closed_form_for_causal_pairs_uses_tau():
    st = WarpedSpacetime((0, 2), Interval(4.0), quadratic_warping((0, 2)))
    r = null_distance(st, point(0, 0), point(2, 0.1), time_function("cubic"), method="closed")
    assert r.value == 8.0
