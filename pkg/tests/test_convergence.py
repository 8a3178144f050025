import math

import pytest

from nulldist.base_geometry import Circle, Interval
from nulldist.convergence import (
    collapse_diagnostic,
    d0_limit,
    collapse_limit,
    evaluate_limit_d0,
    evaluate_limit_collapse,
    rising_bump_sequence,
    falling_bump_sequence,
    grid_sample,
    pointwise_envelope,
    run_convergence_experiment,
    uniform_sine_sequence,
    unit_product_limit,
)
from nulldist.errors import DomainError
from nulldist.lattice import LatticeConfig
from nulldist.spacetime import point

CIRCLE = Circle(2 * math.pi)
SMALL = LatticeConfig(121, 64, 4)


def test_d0_formula_values():
    p, q = point(0.2, 0.0), point(0.2, math.pi)
    expected = 0.4 + 0.5 * (math.pi - 0.4)
    assert evaluate_limit_d0(0.5, p, q, CIRCLE) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(1.7708, abs=1e-4)
    near = point(0.2, 0.1)
    assert evaluate_limit_d0(0.5, p, near, CIRCLE) == pytest.approx(0.1)


def test_collapse_limit_formula_values():
    assert evaluate_limit_collapse(point(2, 0), point(2, math.pi), CIRCLE) == pytest.approx(2.0)
    assert evaluate_limit_collapse(point(0.5, 0), point(0.3, 2.0), CIRCLE) == pytest.approx(0.2)
    assert evaluate_limit_collapse(point(1.2, 0), point(1.2, math.pi), CIRCLE) == pytest.approx(0.4)


def test_limit_matrices_are_symmetric():
    pts = grid_sample(CIRCLE, 3, 4)
    for lim in (d0_limit(0.5), collapse_limit(), unit_product_limit()):
        M = lim.matrix(pts, CIRCLE)
        assert (M == M.T).all() and (M.diagonal() == 0).all()


def test_envelope():
    lo, hi = pointwise_envelope(0.1, 1.0, 1.0)
    assert hi == pytest.approx(1.98)
    assert lo == pytest.approx(0.6)
    assert pointwise_envelope(0.0, 1.0, 0.7) == (0.7, 0.7)
    assert pointwise_envelope(0.25, 1.0, 0.0)[1] > 0
    with pytest.raises(DomainError):
        pointwise_envelope(0.3, 1.0, 1.0)
    with pytest.raises(DomainError):
        pointwise_envelope(0.1, 0.0, 1.0)


def test_sequence_validation():
    with pytest.raises(DomainError):
        rising_bump_sequence(1.5)
    with pytest.raises(DomainError):
        falling_bump_sequence(0.5)
    with pytest.raises(DomainError):
        uniform_sine_sequence((8, 4))
    with pytest.raises(DomainError):
        uniform_sine_sequence(())


def test_small_sine_experiment_shrinks():
    pts = grid_sample(CIRCLE, 3, 4)
    rep = run_convergence_experiment(uniform_sine_sequence((4, 16)), unit_product_limit(), CIRCLE, pts, SMALL,
                                     tolerance=0.5)
    e = rep.eps()
    assert e[1] < e[0]
    for r in rep.rows:
        assert r.gh_bound == 2 * r.eps
        assert r.swif_bound >= r.gh_bound
        assert r.envelope_violations == 0
        assert r.sandwich_violations == 0
    assert rep.verdict == "ConvergesToLimit"
    assert set(rep.to_dict()) >= {"rows", "verdict", "notes"}


def test_bounded_away_verdict():
    pts = [point(0.2, 0.0), point(0.2, math.pi)]
    rep = run_convergence_experiment(rising_bump_sequence(0.5, (2, 4)), unit_product_limit(), CIRCLE, pts,
                                     LatticeConfig(201, 64, 4), tolerance=0.05)
    assert rep.verdict == "BoundedAwayFromLimit" and rep.gap > 0.3


def test_collapse_diagnostic():
    rep = collapse_diagnostic(CIRCLE, 8, [0.5, 2.0], LatticeConfig(201, 64, 4))
    low, top = rep["levels"]
    assert low["collapsed"] and not top["collapsed"]
    one = collapse_diagnostic(CIRCLE, 1, [0.5], LatticeConfig(201, 64, 4))
    assert not one["levels"][0]["collapsed"]
    with pytest.raises(DomainError):
        collapse_diagnostic(Interval(2.0), 2, [0.5])
