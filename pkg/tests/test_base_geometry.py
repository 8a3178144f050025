import math

import pytest

from nulldist.base_geometry import (
    BasePoint,
    Circle,
    FlatTorus,
    Interval,
    RoundSphere,
    base_distance,
    base_from_dict,
    geodesic_interpolate,
    sample_points,
)
from nulldist.errors import DomainError


def test_interval_distance_and_bounds():
    I = Interval(4.0)
    assert I.lo == -2.0 and I.hi == 2.0
    assert base_distance(I, -1.0, 1.5) == 2.5
    with pytest.raises(DomainError):
        I.distance(-3.0, 0.0)


def test_circle_wraps_and_takes_short_arc():
    C = Circle(2 * math.pi)
    assert C.distance(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)
    assert C.distance(0.0, math.pi) == pytest.approx(math.pi)
    assert C.diameter() == pytest.approx(math.pi)
    mid = geodesic_interpolate(C, 2 * math.pi - 0.1, 0.1, 0.5)
    assert C.distance(mid, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_circle_antipodal_tie_goes_positive():
    C = Circle(4.0)
    assert C.interpolate(0.0, 2.0, 0.5)[0] == pytest.approx(1.0)


def test_flat_torus_distance():
    T = FlatTorus(2.0, 3.0)
    assert T.distance((0.1, 0.1), (1.9, 2.9)) == pytest.approx(math.hypot(0.2, 0.2))
    assert T.volume() == 6.0


def test_round_sphere_poles_and_interpolation():
    S = RoundSphere(2.0)
    north, south = (0.0, 0.0), (math.pi, 0.0)
    assert S.distance(north, south) == pytest.approx(2 * math.pi)
    m = S.interpolate((math.pi / 2, 0.0), (math.pi / 2, math.pi / 2), 0.5)
    assert S.distance(m, (math.pi / 2, math.pi / 4)) == pytest.approx(0.0, abs=1e-9)
    assert S.volume() == pytest.approx(16 * math.pi)


def test_interpolation_endpoints_exact():
    for base, x, y in [(Interval(4.0), 0.3, -1.2), (Circle(5.0), 4.5, 0.5), (FlatTorus(1, 1), (0.1, 0.2), (0.7, 0.9))]:
        assert base.interpolate(x, y, 1.0) == base.validate(y)
        assert base.distance(base.interpolate(x, y, 0.0), x) == pytest.approx(0.0, abs=1e-12)
        with pytest.raises(DomainError):
            base.interpolate(x, y, 1.5)


def test_samples_deterministic_and_inside():
    for base in (Interval(2.0), Circle(3.0), FlatTorus(1, 2), RoundSphere(1.0)):
        a, b = sample_points(base, 20, seed=3), sample_points(base, 20, seed=3)
        assert a == b
        for x in a:
            base.validate(x)


def test_base_from_dict_round_trip_and_rejects_unknown_keys():
    for base in (Interval(4.0, 1.0), Circle(6.0), FlatTorus(1.0, 2.0), RoundSphere(3.0)):
        assert base_from_dict(base.to_dict()) == base
    with pytest.raises(DomainError, match="radiuss"):
        base_from_dict({"kind": "round_sphere", "radiuss": 1})
    with pytest.raises(DomainError):
        base_from_dict({"kind": "hyperbolic"})


def test_basepoint_accepts_sequences():
    assert BasePoint(1.0, 2.0) == BasePoint((1.0, 2.0)) == BasePoint([1, 2])
