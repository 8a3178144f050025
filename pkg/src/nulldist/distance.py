"""Closed-form null distances and the bracket bounds for warped products."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import PreconditionError
from .spacetime import Relation, SpacetimePoint, TimeFunction, WarpedSpacetime


class Method(enum.Enum):
    CLOSED_FORM = "ClosedForm"
    LATTICE = "Lattice"
    PROFILE = "Profile"


@dataclass(frozen=True)
class DistanceResult:
    """A null distance with a certified bracket.

    For lattice and profile results value is the length of an admissible
    curve between the snapped endpoints; lower_bound comes from the warped
    product brackets and upper_bound adds the snapping slack.
    """

    value: float
    lower_bound: float
    upper_bound: float
    method: Method
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not (self.lower_bound <= self.value <= self.upper_bound):
            raise ValueError(
                f"inconsistent bracket: {self.lower_bound} <= {self.value} <= {self.upper_bound} fails"
            )
        if self.method is Method.CLOSED_FORM and not (self.lower_bound == self.value == self.upper_bound):
            raise ValueError("closed-form results carry a degenerate bracket")

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "method": self.method.value,
        }
        out.update(self.details)
        return out


def closed(value: float, **details) -> DistanceResult:
    return DistanceResult(value, value, value, Method.CLOSED_FORM, details)


def product_null_distance(
    spacetime: WarpedSpacetime, p: SpacetimePoint, q: SpacetimePoint, tf: TimeFunction | None = None
) -> DistanceResult:
    """max(|t_p - t_q|, d_sigma(p, q)) for a Lorentzian product with canonical time."""
    if not spacetime.is_product:
        raise PreconditionError("product formula requires warping f = 1")
    if tf is not None and tf.registry_id != "canonical":
        raise PreconditionError("product formula requires the canonical time function")
    p, q = spacetime.validate(p), spacetime.validate(q)
    d = spacetime.base.distance(p.x, q.x)
    return closed(max(abs(q.t - p.t), d))


def null_distance_sigma(spacetime: WarpedSpacetime, p: SpacetimePoint, q: SpacetimePoint) -> float:
    """Null distance of the unwarped product over the same base, max(|dt|, d_sigma)."""
    return max(abs(q.t - p.t), spacetime.base.distance(p.x, q.x))


def warped_bounds(spacetime: WarpedSpacetime, p: SpacetimePoint, q: SpacetimePoint) -> tuple[float, float]:
    """Bracket on the canonical null distance of a warped product.

    Causal pairs give [|dt|, |dt|]. Otherwise two brackets are intersected:
    f_min d_sigma <= d <= f_max d_sigma and
    min(1, f_min) d_sigma_hat <= d <= max(1, f_max) d_sigma_hat, where
    d_sigma_hat = max(|dt|, d_sigma) is the product null distance.
    """
    p, q = spacetime.validate(p), spacetime.validate(q)
    dt = abs(q.t - p.t)
    if spacetime.is_causally_related(p, q) is not Relation.NONE:
        return dt, dt
    d = spacetime.base.distance(p.x, q.x)
    dhat = max(dt, d)
    fmin, fmax = spacetime.f_min, spacetime.f_max
    lo = max(fmin * d, min(1.0, fmin) * dhat, dt)
    hi = min(fmax * d, max(1.0, fmax) * dhat)
    return lo, max(lo, hi)


def time_lower_bound(tf: TimeFunction, p: SpacetimePoint, q: SpacetimePoint) -> float:
    """|tau(q) - tau(p)|, a lower bound for every time function."""
    return abs(tf(q.t) - tf(p.t))
