"""Two-sided certified intervals assembled from the extremality chain.

For any contractible system c_D <= d_D <= l_D (and c_D <= k_D for
pseudodistances), so a Caratheodory lower bound and a Lempert/chain upper
bound bracket every system; this module relabels and merges the one-sided
estimates accordingly.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional

from imlab.estimates import MetricEstimate, certify
from imlab.geometry import ModelDomain, PlanarDomain
from imlab.extremal.candidates import SolverConfig
from imlab.extremal.caratheodory import caratheodory_lower
from imlab.extremal.green import green_bounds
from imlab.extremal.kobayashi import kobayashi_upper
from imlab.extremal.lempert import lempert_upper


def certified_interval(domain: PlanarDomain | ModelDomain, z, w, system: str,
                       config: Optional[SolverConfig] = None,
                       waypoints: Iterable = (),
                       edge_cache: Optional[dict] = None) -> MetricEstimate:
    """Certified [lower, upper] for the requested system at (z, w)."""
    config = config or SolverConfig()
    if system == "g":
        return green_bounds(domain, z, w, config)
    if system not in ("c", "l", "k"):
        raise ValueError(f"unknown system {system!r}")
    c_est = caratheodory_lower(domain, z, w, config)
    if system == "k":
        up = kobayashi_upper(domain, z, w, waypoints, config, edge_cache)
    else:
        up = lempert_upper(domain, z, w, config)
    lower_side = MetricEstimate(system=system, lower=c_est.lower, upper=math.inf,
                                provenance=c_est.provenance, slack=c_est.slack)
    upper_side = MetricEstimate(system=system, lower=0.0, upper=up.upper,
                                provenance=up.provenance, slack=up.slack)
    return certify(lower_side, upper_side)
