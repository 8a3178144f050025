import math

import pytest

from nulldist.errors import NumericError
from nulldist.quadrature import adaptive_simpson


def test_polynomial_exact():
    assert adaptive_simpson(lambda t: t**3 - t, 0.0, 2.0) == pytest.approx(2.0, abs=1e-12)


def test_reversed_limits_change_sign():
    assert adaptive_simpson(math.sin, math.pi, 0.0) == pytest.approx(-2.0, abs=1e-9)


def test_kink_with_breakpoint():
    f = lambda t: abs(t - 0.3)
    assert adaptive_simpson(f, 0.0, 1.0, breakpoints=(0.3,)) == pytest.approx(0.045 + 0.245, abs=1e-12)


def test_reciprocal_warping_reach():
    # integral of 1 / (t^2 + 1) from 0 to 2
    assert adaptive_simpson(lambda t: 1 / (t * t + 1), 0.0, 2.0) == pytest.approx(math.atan(2.0), abs=1e-9)


def test_failure_reports_achieved_error():
    with pytest.raises(NumericError) as info:
        adaptive_simpson(lambda t: 1.0 if t > 1 / 3 else 0.0, 0.0, 1.0, tol=1e-300, max_depth=8)
    assert info.value.achieved is not None
