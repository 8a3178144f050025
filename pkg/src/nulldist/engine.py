"""Single entry point choosing between closed forms, the lattice and the profile solver."""

from __future__ import annotations

from .distance import DistanceResult, closed, product_null_distance
from .errors import DomainError, PreconditionError
from .lattice import LatticeConfig, lattice_null_distance
from .profile import profile_null_distance
from .spacetime import Relation, SpacetimePoint, TimeFunction, WarpedSpacetime, canonical_time

METHODS = ("auto", "closed", "lattice", "profile")


def closed_form(spacetime: WarpedSpacetime, tf: TimeFunction, p: SpacetimePoint, q: SpacetimePoint) -> DistanceResult:
    """Exact value where one is known: causal pairs, or products with canonical time."""
    p, q = spacetime.validate(p), spacetime.validate(q)
    if spacetime.is_causally_related(p, q) is not Relation.NONE:
        return closed(abs(tf.increment(p.t, q.t)), relation="causal")
    if spacetime.is_product and tf.registry_id == "canonical" and not spacetime.holes:
        return product_null_distance(spacetime, p, q, tf)
    raise PreconditionError("no closed form for a non-causal pair in this spacetime")


def null_distance(
    spacetime: WarpedSpacetime,
    p: SpacetimePoint,
    q: SpacetimePoint,
    tf: TimeFunction | None = None,
    method: str = "auto",
    config: LatticeConfig | None = None,
) -> DistanceResult:
    """Null distance between p and q by the requested method.

    auto uses a closed form when one applies and the lattice otherwise.
    """
    tf = tf if tf is not None else canonical_time()
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "closed":
        return closed_form(spacetime, tf, p, q)
    if method == "profile":
        if tf.registry_id != "canonical":
            raise PreconditionError("profile solver works with the canonical time function")
        if spacetime.holes:
            raise PreconditionError("profile solver does not handle holes")
        return profile_null_distance(spacetime, p, q)
    if method == "auto":
        try:
            return closed_form(spacetime, tf, p, q)
        except PreconditionError:
            pass
    return lattice_null_distance(spacetime, tf, p, q, config)
