import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nulldist.base_geometry import Circle, FlatTorus, Interval
from nulldist.checks import product_reference
from nulldist.curves import curve_from_vertices, null_length
from nulldist.distance import product_null_distance, warped_bounds
from nulldist.metric_analysis import (
    FiniteMetricSpace,
    gh_upper_bound,
    hausdorff_distance,
    metric_axioms_check,
    swif_upper_bound,
    uniform_distance,
)
from nulldist.spacetime import Relation, WarpedSpacetime, constant_warping, point, quadratic_warping, time_function

MINK = WarpedSpacetime.product((0.0, 2.0), Interval(4.0))
CYL = WarpedSpacetime.product((0.0, 2.0), Circle(2 * math.pi))
WARPED = WarpedSpacetime((0.0, 1.0), Interval(4.0), quadratic_warping((0.0, 1.0)))

times = st.floats(0.0, 2.0)
coords = st.floats(-2.0, 2.0)
angles = st.floats(0.0, 2 * math.pi, exclude_max=True)
pts = st.builds(point, times, coords)
cyl_pts = st.builds(point, times, angles)


@given(pts, pts, pts)
def test_product_distance_is_a_metric(p, q, r):
    d = lambda a, b: product_null_distance(MINK, a, b).value
    assert d(p, q) == d(q, p)
    assert d(p, r) <= d(p, q) + d(q, r) + 1e-12
    assert (d(p, q) == 0) == (p == q)


@given(cyl_pts, cyl_pts, cyl_pts)
def test_cylinder_distance_is_a_metric(p, q, r):
    d = lambda a, b: product_null_distance(CYL, a, b).value
    assert d(p, q) == d(q, p)
    assert d(p, r) <= d(p, q) + d(q, r) + 1e-12


@st.composite
def zigzags(draw):
    """Alternating future and past null segments inside [0, 2] x [-2, 2]."""
    t, x = draw(st.floats(0.0, 2.0)), draw(st.floats(-1.5, 1.5))
    direction = draw(st.sampled_from([-1.0, 1.0]))
    verts = [point(t, x)]
    for k in range(draw(st.integers(1, 8))):
        up = k % 2 == 0
        room = (2.0 - t) if up else t
        room = min(room, 2.0 - direction * x)
        step = draw(st.floats(0.05, 1.0)) * room
        if step < 1e-3:
            break
        t = t + step if up else t - step
        x = x + direction * step
        verts.append(point(t, x))
    assume(len(verts) >= 2)
    return curve_from_vertices(MINK, verts)


@settings(max_examples=60)
@given(zigzags(), st.data())
def test_null_length_additive_and_reversible(curve, data):
    tf = time_function("canonical")
    n = len(curve)
    total = null_length(curve, tf)
    assert null_length(curve.reversed(), tf) == pytest.approx(total, abs=1e-12)
    if n >= 2:
        k = data.draw(st.integers(1, n - 1))
        split = null_length(curve.restrict(0, k), tf) + null_length(curve.restrict(k, n), tf)
        assert split == pytest.approx(total, abs=1e-12)
    assert total >= abs(curve.end.t - curve.start.t) - 1e-12
    assert total >= product_null_distance(MINK, curve.start, curve.end).value - 1e-12


@given(st.builds(point, st.floats(0, 1), coords), st.builds(point, st.floats(0, 1), coords))
def test_warped_bounds_are_ordered(p, q):
    lo, hi = warped_bounds(WARPED, p, q)
    assert 0 <= lo <= hi
    assert lo >= abs(p.t - q.t)
    assert warped_bounds(WARPED, q, p) == (lo, hi)


@given(pts, pts, st.floats(0.1, 5.0))
def test_constant_warping_bounds_are_exact_scaling(p, q, c):
    st_c = WarpedSpacetime((0.0, 2.0), Interval(4.0), constant_warping(c))
    lo, hi = warped_bounds(st_c, p, q)
    d = st_c.base.distance(p.x, q.x)
    assert lo == pytest.approx(hi, abs=1e-12)
    if st_c.is_causally_related(p, q) is Relation.NONE:
        assert lo == pytest.approx(max(abs(p.t - q.t), c * d), abs=1e-12)
    else:
        assert lo == abs(p.t - q.t)


@given(st.floats(0, 10), st.floats(0, 10), st.floats(1, 3), st.integers(1, 3), st.floats(0.1, 10))
def test_bounds_monotone_and_homogeneous(e1, e2, lam, n, mass):
    a, b = sorted((e1, e2))
    assert gh_upper_bound(a) <= gh_upper_bound(b)
    assert swif_upper_bound(a, lam, n, mass) <= swif_upper_bound(b, lam, n, mass)
    assert gh_upper_bound(3 * a) == pytest.approx(3 * gh_upper_bound(a))
    assert swif_upper_bound(3 * a, lam, n, mass) == pytest.approx(3 * swif_upper_bound(a, lam, n, mass))


sample = st.lists(pts, min_size=2, max_size=6, unique=True)


@settings(max_examples=40)
@given(sample, st.floats(0.0, 1.0))
def test_uniform_distance_is_a_metric_on_matrices(points, s):
    M = product_reference(MINK, points)
    A = FiniteMetricSpace(points, M)
    B = FiniteMetricSpace(points, M * (1 + s))
    C = FiniteMetricSpace(points, M * (1 + 2 * s))
    assert uniform_distance(A, A) == 0
    assert uniform_distance(A, B) == uniform_distance(B, A)
    assert uniform_distance(A, C) <= uniform_distance(A, B) + uniform_distance(B, C) + 1e-12
    assert metric_axioms_check(A, 1e-12)["passed"]


@settings(max_examples=40)
@given(sample, st.data())
def test_hausdorff_zero_iff_equal_sets(points, data):
    M = product_reference(MINK, points)
    S = FiniteMetricSpace(points, M)
    idx = list(range(len(points)))
    A = data.draw(st.lists(st.sampled_from(idx), min_size=1, unique=True))
    B = data.draw(st.lists(st.sampled_from(idx), min_size=1, unique=True))
    h = hausdorff_distance(S, A, B)
    assert (h == 0) == (set(A) == set(B))
    assert hausdorff_distance(S, B, A) == h


@given(st.builds(lambda a, b: (a, b), st.floats(-10, 10), st.floats(-10, 10)),
       st.builds(lambda a, b: (a, b), st.floats(-10, 10), st.floats(-10, 10)))
def test_torus_distance_symmetric(x, y):
    T = FlatTorus(2.0, 3.0)
    assert T.distance(x, y) == T.distance(y, x)
    assert T.distance(x, y) <= math.hypot(1.0, 1.5) + 1e-12
