"""Pluricomplex Green function bounds via the tanh sandwich.

The Green system is m-contractible, so tanh(c_D) <= g_D <= tanh(l_D)
pointwise; the certified c/l pair therefore brackets g without solving any
Monge-Ampere problem.  On simply connected planar domains the conformal
oracle supplies the exact star value alongside the bracket.
"""

from __future__ import annotations

import math
from typing import Optional

from imlab.estimates import MetricEstimate
from imlab.geometry import ModelDomain, PlanarDomain
from imlab.extremal.candidates import SolverConfig
from imlab.extremal.caratheodory import caratheodory_lower
from imlab.extremal.lempert import lempert_upper


def green_bounds(domain: PlanarDomain | ModelDomain, z, w,
                 config: Optional[SolverConfig] = None,
                 rmap=None) -> MetricEstimate:
    """Certified star-valued bounds [tanh c, tanh l] for g_D(z, w).

    ``rmap`` may carry a prebuilt Riemann map of the domain; its exact star
    value is then attached to the provenance (it is a cross-check, never
    merged into the certified bracket).
    """
    config = config or SolverConfig()
    c_est = caratheodory_lower(domain, z, w, config)
    l_est = lempert_upper(domain, z, w, config)
    lower = math.tanh(c_est.lower)
    upper = 1.0 if math.isinf(l_est.upper) else math.tanh(l_est.upper)
    prov = {
        "lower": c_est.provenance,
        "upper": l_est.provenance,
        "chain": "tanh(c) <= g <= tanh(l)",
    }
    if rmap is not None:
        oracle = rmap.map_points([complex(z), complex(w)])
        m_val = abs((oracle[0] - oracle[1]) /
                    (1.0 - oracle[0].conjugate() * oracle[1]))
        prov["oracle_star"] = float(m_val)
        prov["oracle_accuracy"] = rmap.accuracy
    return MetricEstimate(system="g", lower=lower, upper=upper,
                          provenance=prov, slack=c_est.slack + l_est.slack)
