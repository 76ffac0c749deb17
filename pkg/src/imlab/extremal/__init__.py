"""Variational solvers for the four invariant systems.

Lower bounds come from verified disc-valued map candidates (Caratheodory
side), upper bounds from verified analytic-disc candidates (Lempert side)
and waypoint chains (Kobayashi side); the Green system is bracketed through
the tanh image of the c/l pair.  Every returned bound is honest up to the
slack declared on the estimate.
"""

from imlab.extremal.caratheodory import caratheodory_lower
from imlab.extremal.lempert import lempert_upper
from imlab.extremal.kobayashi import kobayashi_upper
from imlab.extremal.green import green_bounds
from imlab.extremal.intervals import certified_interval
from imlab.extremal.candidates import (
    AnalyticDiscCandidate,
    DiscMapCandidate,
    SolverConfig,
)

__all__ = [
    "caratheodory_lower",
    "lempert_upper",
    "kobayashi_upper",
    "green_bounds",
    "certified_interval",
    "AnalyticDiscCandidate",
    "DiscMapCandidate",
    "SolverConfig",
]
