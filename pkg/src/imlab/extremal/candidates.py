"""Candidate families and their verification machinery.

Caratheodory candidates are polynomial maps into the disc with a zero
pinned at the source point; Lempert candidates are polynomial analytic
discs with two interpolation conditions eliminated.  Verification is
rigorous: polygon sup-norms are computed exactly edge by edge (Chebyshev
interpolation of |f|^2 plus derivative roots), and disc-image containment
uses boundary-circle sampling with an explicit Lipschitz slack, which by
the maximum principle / argument principle certifies the full closed disc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev as nc

from imlab.geometry import GeometryError, ModelDomain, PlanarDomain


@dataclass(frozen=True)
class SolverConfig:
    """Shared solver knobs; deterministic given the seed."""

    degree: int = 8
    seed: int = 0
    boundary_samples: int = 1024
    search_samples: int = 256
    n_starts: int = 5
    lawson_iterations: int = 350
    lam_tol: float = 2e-4
    interior_grid: int = 36

    def with_degree(self, degree: int) -> "SolverConfig":
        return SolverConfig(**{**self.__dict__, "degree": degree})


@dataclass
class DiscMapCandidate:
    """Polynomial f with f(z) = 0 in the scaled basis ((zeta - z)/rho)^j.

    After division by its exact sup-norm the candidate maps the domain into
    the closed unit disc, giving a genuine Caratheodory lower bound.
    """

    base_point: complex
    rho: float
    coefficients: np.ndarray  # a_1..a_d
    sup_norm: float = math.nan
    sup_is_exact: bool = False

    def evaluate(self, points) -> np.ndarray:
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        t = (pts - self.base_point) / self.rho
        acc = np.zeros_like(t)
        for a in self.coefficients[::-1]:
            acc = (acc + a) * t
        return acc


@dataclass
class AnalyticDiscCandidate:
    """Polynomial disc phi(zeta) = sum a_j zeta^j into the target domain.

    ``coefficients`` has shape (degree+1, n); phi(0) = z and phi(lam) = w
    hold exactly by affine elimination of a_0 and a_1.  The feasibility
    report records the verified clearance of phi(closed disc) inside the
    domain.
    """

    coefficients: np.ndarray
    lam: float
    feasibility_margin: float = math.nan
    checked_samples: int = 0

    def evaluate(self, zeta) -> np.ndarray:
        zs = np.atleast_1d(np.asarray(zeta, dtype=complex))
        acc = np.zeros((len(zs), self.coefficients.shape[1]), dtype=complex)
        for row in self.coefficients[::-1]:
            acc = acc * zs[:, None] + row[None, :]
        return acc


# ---------------------------------------------------------------------------
# exact polygon sup-norms
# ---------------------------------------------------------------------------


def _edge_polynomials(candidate: DiscMapCandidate, domain: PlanarDomain):
    """Monomial coefficients of f restricted to each edge (in t on [0,1])."""
    verts = np.asarray(domain.vertices, dtype=complex)
    a = verts
    b = np.roll(verts, -1)
    alpha = (a - candidate.base_point) / candidate.rho
    beta = (b - a) / candidate.rho
    d = len(candidate.coefficients)
    n_edges = len(verts)
    # Horner in polynomial arithmetic: P <- P*(alpha + beta t) + c_j
    poly = np.zeros((n_edges, d + 1), dtype=complex)
    poly[:, 0] = candidate.coefficients[-1]
    deg = 0

    def times_linear():
        nonlocal deg
        head = poly[:, :deg + 1].copy()
        poly[:, :deg + 1] = alpha[:, None] * head
        poly[:, 1:deg + 2] += beta[:, None] * head
        deg += 1

    for c in candidate.coefficients[-2::-1]:
        times_linear()
        poly[:, 0] += c
    # final multiply by (alpha + beta t): f has no constant term in the basis
    times_linear()
    return poly  # (n_edges, d+1) monomial coefficients in t


def polygon_sup_exact(candidate: DiscMapCandidate, domain: PlanarDomain) -> float:
    """Exact sup of |f| over the polygon boundary (hence over the closure).

    |f|^2 restricted to an edge is a real polynomial of degree 2d in the
    edge parameter; it is interpolated exactly at Chebyshev nodes and
    maximized through the roots of its Chebyshev derivative.  Edges whose
    crude coefficient bound cannot beat the running max are skipped.
    """
    poly = _edge_polynomials(candidate, domain)
    n_edges, d1 = poly.shape
    deg2 = 2 * (d1 - 1)
    # Chebyshev nodes on [0,1]
    k = np.arange(deg2 + 1)
    x = np.cos(math.pi * k / deg2)
    t = 0.5 * (x + 1.0)
    # evaluate f on each edge at the nodes
    vals = np.zeros((n_edges, len(t)), dtype=complex)
    for j in range(d1 - 1, -1, -1):
        vals = vals * t[None, :] + poly[:, j][:, None]
    sq = np.abs(vals) ** 2
    cheb = nc.chebfit(x, sq.T, deg2)  # (deg2+1, n_edges)
    endpoint_max = np.sqrt(np.maximum(sq[:, 0], sq[:, -1]))
    crude = np.sqrt(np.sum(np.abs(cheb), axis=0))
    best = float(np.max(endpoint_max))
    order = np.argsort(-crude)
    for e in order:
        if crude[e] <= best + 1e-15:
            break
        der = nc.chebder(cheb[:, e])
        roots = nc.chebroots(der)
        roots = roots[np.abs(roots.imag) < 1e-9].real
        roots = roots[(roots > -1.0) & (roots < 1.0)]
        if len(roots):
            cand = float(np.sqrt(np.maximum(nc.chebval(roots, cheb[:, e]), 0.0).max()))
            best = max(best, cand)
        best = max(best, float(endpoint_max[e]))
    return best


# ---------------------------------------------------------------------------
# disc feasibility (Lempert side)
# ---------------------------------------------------------------------------


def _coefficient_norms(coefficients: np.ndarray) -> np.ndarray:
    if coefficients.ndim > 1:
        return np.linalg.norm(coefficients, axis=1)
    return np.abs(coefficients)


def disc_lipschitz_bound(coefficients: np.ndarray) -> float:
    """Upper bound for |phi'| on the closed unit disc: sum of j*|a_j|."""
    j = np.arange(len(coefficients))
    return float(np.sum(j * _coefficient_norms(coefficients)))


def circle_second_derivative_bound(coefficients: np.ndarray) -> float:
    """Upper bound for |d^2/dtheta^2 phi(e^{i theta})|: sum of j^2 |a_j|."""
    j = np.arange(len(coefficients))
    return float(np.sum(j * j * _coefficient_norms(coefficients)))


def sampling_slack(candidate: AnalyticDiscCandidate,
                   domain: PlanarDomain | ModelDomain, n_samples: int) -> float:
    """Clearance a sampled circle image must beat to certify the whole curve.

    Convex targets admit a second-order bound: between samples the curve
    deviates from its chord by at most (dtheta)^2 M2 / 8, and the chord
    stays as deep as its endpoints because distance-to-boundary is concave
    on a convex domain.  Nonconvex polygons fall back to the first-order
    Lipschitz chord bound.
    """
    dtheta = 2.0 * math.pi / n_samples
    convex = domain.is_convex if isinstance(domain, PlanarDomain) else True
    if convex:
        m2 = circle_second_derivative_bound(candidate.coefficients)
        return 0.125 * dtheta * dtheta * m2 + 1e-12
    lip = disc_lipschitz_bound(candidate.coefficients)
    return 0.5 * lip * dtheta + 1e-12


def boundary_clearance(candidate: AnalyticDiscCandidate,
                       domain: PlanarDomain | ModelDomain,
                       n_samples: int) -> tuple[float, float]:
    """(clearance, required) for phi(unit circle) strictly inside the domain.

    clearance is the min distance of sampled circle images to the domain
    boundary (negative if any sample escapes); required is the sampling
    slack that certifies the whole curve once clearance exceeds it.  For
    simply connected targets the argument principle then gives
    phi(closed disc) inside the domain.
    """
    theta = 2.0 * math.pi * np.arange(n_samples) / n_samples
    zeta = np.exp(1j * theta)
    img = candidate.evaluate(zeta)
    required = sampling_slack(candidate, domain, n_samples)
    if isinstance(domain, PlanarDomain):
        pts = img[:, 0]
        inside = domain.contains_points(pts)
        dist = domain.distance_to_boundary(pts)
        if not bool(np.all(inside)):
            return float(-np.max(dist[~inside])), required
        return float(np.min(dist)), required
    margins = domain.base_margin(img)
    return float(np.min(margins)), required


def interior_grid_inside(candidate: AnalyticDiscCandidate,
                         domain: PlanarDomain | ModelDomain,
                         n_radii: int = 4, n_angles: int = 12) -> bool:
    """Coarse full-grid check of phi over the disc (belt and suspenders)."""
    rr = np.linspace(0.25, 0.95, n_radii)
    tt = 2.0 * math.pi * np.arange(n_angles) / n_angles
    zeta = (rr[:, None] * np.exp(1j * tt)[None, :]).ravel()
    img = candidate.evaluate(zeta)
    if isinstance(domain, PlanarDomain):
        return bool(np.all(domain.contains_points(img[:, 0])))
    return bool(np.all(domain.base_margin(img) > 0))


def verify_disc_candidate(candidate: AnalyticDiscCandidate,
                          domain: PlanarDomain | ModelDomain,
                          n_samples: int) -> bool:
    """Strict feasibility: boundary clearance beats the Lipschitz slack."""
    clearance, required = boundary_clearance(candidate, domain, n_samples)
    if clearance <= required:
        return False
    if not interior_grid_inside(candidate, domain):
        return False
    candidate.feasibility_margin = clearance - required
    candidate.checked_samples = n_samples
    return True


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def interior_margin(domain: PlanarDomain | ModelDomain, point) -> float:
    if isinstance(domain, PlanarDomain):
        pt = complex(np.asarray(point, dtype=complex).ravel()[0])
        if not domain.contains_points([pt])[0]:
            return -float(domain.distance_to_boundary([pt])[0])
        return float(domain.distance_to_boundary([pt])[0])
    arr = np.atleast_2d(np.asarray(point, dtype=complex))
    return float(domain.base_margin(arr)[0])


def require_interior(domain, *points) -> None:
    for pt in points:
        margin = interior_margin(domain, pt)
        threshold = 2 * domain.boundary_resolution if isinstance(domain, PlanarDomain) else 0.0
        if margin <= threshold:
            raise GeometryError(f"point {pt} lacks interior margin in the domain")


def domain_scale(domain: PlanarDomain | ModelDomain) -> float:
    if isinstance(domain, PlanarDomain):
        verts = np.asarray(domain.vertices, dtype=complex)
        return float(np.max(np.abs(verts - verts.mean())))
    return float(max(domain.radii)) * (1.0 if domain.affine is None else 1.0)
