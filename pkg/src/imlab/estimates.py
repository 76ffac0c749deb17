"""Certified interval estimates for pseudodistance values.

A MetricEstimate is a one- or two-sided interval [lower, upper] for one of
the four systems (c, l, k in hyperbolic units; g in star units).  Lower
bounds come from verified Caratheodory candidates, upper bounds from
verified analytic-disc or chain candidates, so the interval is honest up to
the slack declared by the producing solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

SYSTEMS = ("c", "l", "k", "g")


class BoundInconsistency(RuntimeError):
    """A verified lower bound exceeded a verified upper bound: solver bug."""


@dataclass
class MetricEstimate:
    """Interval [lower, upper] for d_D(z, w), tagged with system and provenance.

    For systems c/l/k the endpoints are hyperbolic values (upper may be
    ``math.inf`` as a "no feasible candidate" sentinel); for system g they
    are star values in [0, 1].  ``slack`` is the total declared one-sided
    slack already absorbed into the bounds.
    """

    system: str
    lower: float = 0.0
    upper: float = math.inf
    provenance: dict[str, Any] = field(default_factory=dict)
    slack: float = 0.0

    def __post_init__(self) -> None:
        if self.system not in SYSTEMS:
            raise ValueError(f"unknown system {self.system!r}")
        if self.lower < 0:
            raise ValueError(f"lower bound must be >= 0, got {self.lower}")

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        if math.isinf(self.upper):
            return self.lower
        return 0.5 * (self.lower + self.upper)

    def certified(self, tol: float) -> bool:
        return self.gap < tol

    def as_dict(self) -> dict[str, Any]:
        return {
            "system": self.system,
            "lower": self.lower,
            "upper": self.upper,
            "slack": self.slack,
            "provenance": self.provenance,
        }


def certify(lower: MetricEstimate, upper: MetricEstimate,
            tol: float | None = None) -> MetricEstimate:
    """Merge a lower-side and an upper-side estimate for the same quantity.

    Raises BoundInconsistency when the verified lower bound exceeds the
    verified upper bound by more than the combined slack; that can only
    happen through a solver bug and is a primary test surface.
    """
    if lower.system != upper.system:
        raise ValueError(
            f"cannot merge systems {lower.system!r} and {upper.system!r}")
    combined_slack = lower.slack + upper.slack
    lo = max(lower.lower, upper.lower)
    hi = min(lower.upper, upper.upper)
    if lo > hi + combined_slack + 1e-12:
        raise BoundInconsistency(
            f"lower bound {lo} exceeds upper bound {hi} beyond combined "
            f"slack {combined_slack} (system {lower.system})")
    merged = MetricEstimate(
        system=lower.system,
        lower=lo,
        upper=max(hi, lo),
        provenance={
            "lower": lower.provenance,
            "upper": upper.provenance,
        },
        slack=combined_slack,
    )
    if tol is not None:
        merged.provenance["certified"] = merged.certified(tol)
        merged.provenance["tolerance"] = tol
    return merged
