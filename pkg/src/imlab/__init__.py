"""Numerical laboratory for invariant pseudodistances on bounded domains.

Certified lower/upper solvers for the Caratheodory, Lempert, Kobayashi and
Green systems, a compact-set geometry kernel (envelopes, erosions, Hausdorff
distance), a boundary-integral Riemann map used as an exact-value oracle on
simply connected planar domains, and an experiment harness for Hausdorff
convergent (possibly non-monotonic) domain sequences.
"""

__version__ = "0.1.0"

from imlab.disc_metrics import (
    HyperbolicValue,
    hyperbolic_distance,
    mobius_distance,
    from_star,
    to_star,
)
from imlab.estimates import BoundInconsistency, MetricEstimate, certify

__all__ = [
    "HyperbolicValue",
    "hyperbolic_distance",
    "mobius_distance",
    "from_star",
    "to_star",
    "MetricEstimate",
    "BoundInconsistency",
    "certify",
    "__version__",
]
