"""Null distances on warped-product spacetimes: closed forms, lattice oracle and convergence lab."""

__version__ = "0.1.0"

from .base_geometry import BasePoint, Circle, FlatTorus, Interval, RiemannianBase, RoundSphere  # noqa: E402
from .curves import (  # noqa: E402
    CausalSegment,
    Direction,
    PiecewiseCausalCurve,
    fractal_family,
    generate_zigzag,
    null_length,
    validate,
)
from .distance import DistanceResult, Method, product_null_distance, warped_bounds  # noqa: E402
from .engine import null_distance  # noqa: E402
from .errors import (  # noqa: E402
    ConstructionError,
    DomainError,
    NullDistError,
    NumericError,
    PreconditionError,
    ScenarioError,
    UnreachableError,
)
from .lattice import Lattice, LatticeConfig, lattice_distance_matrix, lattice_null_distance  # noqa: E402
from .metric_analysis import FiniteMetricSpace, gh_upper_bound, swif_upper_bound, uniform_distance  # noqa: E402
from .spacetime import (  # noqa: E402
    SpacetimePoint,
    TimeFunction,
    WarpedSpacetime,
    WarpingFunction,
    point,
    time_function,
    warping_function,
)

__all__ = [
    "BasePoint", "Circle", "FlatTorus", "Interval", "RiemannianBase", "RoundSphere",
    "CausalSegment", "Direction", "PiecewiseCausalCurve", "fractal_family", "generate_zigzag", "null_length",
    "validate", "DistanceResult", "Method", "product_null_distance", "warped_bounds", "null_distance",
    "ConstructionError", "DomainError", "NullDistError", "NumericError", "PreconditionError", "ScenarioError",
    "UnreachableError", "Lattice", "LatticeConfig", "lattice_distance_matrix", "lattice_null_distance",
    "FiniteMetricSpace", "gh_upper_bound", "swif_upper_bound", "uniform_distance", "SpacetimePoint",
    "TimeFunction", "WarpedSpacetime", "WarpingFunction", "point", "time_function", "warping_function",
]
