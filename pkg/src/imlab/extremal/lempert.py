"""Lempert function upper bounds from polynomial analytic discs.

A candidate disc phi(zeta) = z + a_1 zeta + ... + a_d zeta^d interpolates
phi(0) = z exactly and phi(lam) = w through affine elimination of a_1, so
the search space is (lam, a_2..a_d).  The solver bisects lam; at each lam
it maximizes the boundary clearance of the circle image over the free
coefficients (for convex targets distance-to-boundary is concave, making
this subproblem concave; warm starts carry the shape along the bisection).
The winner is verified strictly: sampled clearance must beat the sampling
slack (second-order chord bound on convex targets, Lipschitz bound
otherwise), which by the argument principle certifies phi(closed disc)
inside the domain, with a coarse interior grid double-check.  Borderline
candidates are shrunk (phi(t zeta), lam/t) until verification passes, so
every finite bound returned is a true upper bound; if nothing verifies the
estimate carries an infinite upper bound and a diagnostic.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.optimize import linprog, minimize

from imlab.estimates import MetricEstimate
from imlab.geometry import ModelDomain, PlanarDomain
from imlab.extremal.candidates import (
    AnalyticDiscCandidate,
    SolverConfig,
    boundary_clearance,
    domain_scale,
    require_interior,
    verify_disc_candidate,
)

_LAM_MIN = 1e-4
_LAM_MAX = 0.999
_SHRINK_LADDER = (1.0, 0.9995, 0.998, 0.995, 0.99, 0.98, 0.96, 0.93, 0.89)


class _DiscProblem:
    """Shared state for one (domain, z, w, degree) Lempert solve."""

    def __init__(self, domain, z, w, config: SolverConfig, scale: float | None = None):
        self.domain = domain
        self.config = config
        self.n = 1 if isinstance(domain, PlanarDomain) else domain.dim
        self.z = np.atleast_1d(np.asarray(z, dtype=complex))
        self.w = np.atleast_1d(np.asarray(w, dtype=complex))
        self.scale = domain_scale(domain) if scale is None else scale
        self.d = max(1, config.degree)
        self.n_free = max(0, self.d - 1) * self.n * 2
        theta = 2.0 * math.pi * np.arange(config.search_samples) / config.search_samples
        self._zeta = np.exp(1j * theta)
        self._edge_normals = None
        if isinstance(domain, PlanarDomain):
            verts = np.asarray(domain.vertices, dtype=complex)
            tangent = np.roll(verts, -1) - verts
            self._edge_a = verts
            self._edge_t = tangent
            n_out = -1j * tangent / np.abs(tangent)
            self._n_out = n_out
            self._edge_offsets = np.real(np.conj(n_out) * verts)  # (E,)
            if domain.is_convex:
                self._edge_normals = np.column_stack([n_out.real, n_out.imag])  # (E,2)

    def coefficients(self, lam: float, shape: np.ndarray) -> np.ndarray:
        coeffs = np.zeros((self.d + 1, self.n), dtype=complex)
        coeffs[0] = self.z
        if self.d >= 2 and self.n_free:
            free = shape.reshape(self.d - 1, self.n, 2)
            coeffs[2:] = self.scale * (free[..., 0] + 1j * free[..., 1])
        powers = lam ** np.arange(2, self.d + 1)
        tail = powers @ coeffs[2:] if self.d >= 2 else 0.0
        coeffs[1] = (self.w - self.z - tail) / lam
        return coeffs

    def search_clearance(self, lam: float, shape: np.ndarray) -> float:
        """Min distance of the sampled circle image to the boundary (signed)."""
        cand = AnalyticDiscCandidate(self.coefficients(lam, shape), lam)
        img = cand.evaluate(self._zeta)
        if isinstance(self.domain, PlanarDomain):
            pts = img[:, 0]
            if self._edge_normals is not None:
                # convex fast path: exact clearance = min over edge lines
                xy = np.column_stack([pts.real, pts.imag])
                line_dist = self._edge_offsets[None, :] - xy @ self._edge_normals.T
                return float(np.min(line_dist))
            dist = self.domain.distance_to_boundary(pts)
            inside = self.domain.contains_points(pts)
            if not bool(np.all(inside)):
                return float(-np.max(dist[~inside]))
            return float(np.min(dist))
        return float(np.min(self.domain.base_margin(img)))

    def maximize_clearance(self, lam: float, shape0: np.ndarray,
                           maxfev: int, simplex_size: float) -> tuple[float, np.ndarray]:
        if self.n_free == 0:
            return self.search_clearance(lam, shape0), shape0
        sim = np.vstack([shape0] + [shape0 + simplex_size * e
                                    for e in np.eye(self.n_free)])
        res = minimize(lambda s: -self.search_clearance(lam, s), shape0,
                       method="Nelder-Mead",
                       options={"maxfev": maxfev, "xatol": 1e-5,
                                "fatol": 1e-7 * self.scale,
                                "initial_simplex": sim})
        return -res.fun, res.x

    # -- linear-programming clearance maximization (planar domains) --------

    def _design(self, lam: float):
        """phi(zeta_i) = base_i + G_i . shape, affine in the free parameters."""
        zeta = self._zeta
        base = self.z[0] + zeta * (self.w[0] - self.z[0]) / lam
        cols = []
        for j in range(2, self.d + 1):
            gj = (zeta ** j - zeta * lam ** (j - 1)) * self.scale
            cols.append(gj)
            cols.append(1j * gj)
        G = np.column_stack(cols) if cols else np.zeros((len(zeta), 0), dtype=complex)
        return base, G

    def _line_rows(self, base, G, idx_pts, idx_edges):
        """LP rows: t + Re(conj(n_e) G_i) . shape <= h_e - Re(conj(n_e) base_i)."""
        ne = np.conj(self._n_out[idx_edges])
        lhs_shape = np.real(ne[:, None] * G[idx_pts, :])
        rhs = self._edge_offsets[idx_edges] - np.real(ne * base[idx_pts])
        rows = np.hstack([lhs_shape, np.ones((len(idx_pts), 1))])
        return rows, rhs

    def _exact_clearance(self, pts: np.ndarray) -> float:
        if self._edge_normals is not None:
            xy = np.column_stack([pts.real, pts.imag])
            line_dist = self._edge_offsets[None, :] - xy @ self._edge_normals.T
            return float(np.min(line_dist))
        dist = self.domain.distance_to_boundary(pts)
        inside = self.domain.contains_points(pts)
        if not bool(np.all(inside)):
            return float(-np.max(dist[~inside]))
        return float(np.min(dist))

    def _nearest_edges(self, pts: np.ndarray) -> np.ndarray:
        """Index of the nearest edge segment for each point."""
        a = self._edge_a[None, :]
        t = self._edge_t[None, :]
        rel = pts[:, None] - a
        tt = np.clip(np.real(rel * np.conj(t)) / np.abs(t) ** 2, 0.0, 1.0)
        d = np.abs(rel - tt * t)
        return np.argmin(d, axis=1)

    def lp_max_clearance(self, lam: float, warm: np.ndarray,
                         rounds: int = 8) -> tuple[float, np.ndarray]:
        """Exact max-min clearance over the free coefficients (convex target).

        The distance of every sample image to every edge line is affine in
        the shape, so constraint generation plus an LP solve is globally
        optimal for the discretized problem.
        """
        base, G = self._design(lam)
        shape = warm.copy()
        seen: set[tuple[int, int]] = set()
        rows_list, rhs_list = [], []
        best = (-math.inf, shape)
        for _ in range(rounds):
            pts = base + (G @ shape if self.n_free else 0.0)
            xy = np.column_stack([pts.real, pts.imag])
            line_dist = self._edge_offsets[None, :] - xy @ self._edge_normals.T
            per_pt = line_dist.min(axis=1)
            worst_edge = line_dist.argmin(axis=1)
            actual = float(per_pt.min())
            if actual > best[0]:
                best = (actual, shape.copy())
            if self.n_free == 0:
                return best
            cutoff = np.quantile(per_pt, 0.35)
            new = [(int(i), int(worst_edge[i])) for i in np.where(per_pt <= cutoff)[0]
                   if (int(i), int(worst_edge[i])) not in seen]
            if not new and rows_list:
                break
            for i, e in new:
                seen.add((i, e))
            if new:
                r, b = self._line_rows(base, G, np.array([i for i, _ in new]),
                                       np.array([e for _, e in new]))
                rows_list.append(r)
                rhs_list.append(b)
            A = np.vstack(rows_list)
            bb = np.concatenate(rhs_list)
            nf = self.n_free
            # variables [shape, t, |shape| aux]; the small L1 term keeps the
            # LP vertex tame so the candidate's curvature slack stays small
            A_aux = np.zeros((len(bb) + 2 * nf, 2 * nf + 1))
            A_aux[:len(bb), :nf + 1] = A
            b_aux = np.concatenate([bb, np.zeros(2 * nf)])
            for k in range(nf):
                A_aux[len(bb) + 2 * k, k] = 1.0
                A_aux[len(bb) + 2 * k, nf + 1 + k] = -1.0
                A_aux[len(bb) + 2 * k + 1, k] = -1.0
                A_aux[len(bb) + 2 * k + 1, nf + 1 + k] = -1.0
            c = np.zeros(2 * nf + 1)
            c[nf] = -1.0
            c[nf + 1:] = 1e-3 * self.scale
            bounds = [(-4.0, 4.0)] * nf + [(None, None)] + [(0.0, None)] * nf
            res = linprog(c, A_ub=A_aux, b_ub=b_aux, bounds=bounds, method="highs")
            if not res.success:
                break
            t_star = res.x[nf]
            shape = res.x[:nf]
            pts = base + (G @ shape if self.n_free else 0.0)
            actual = self._exact_clearance(pts)
            if actual > best[0]:
                best = (actual, shape.copy())
            if actual >= t_star - 1e-10:
                break
        return best

    def slp_max_clearance(self, lam: float, warm: np.ndarray,
                          rounds: int = 14) -> tuple[float, np.ndarray]:
        """Sequential LP for nonconvex targets: nearest-edge linearization.

        Each round constrains every sample image to the interior side of
        its nearest edge line inside a trust region; only improving steps
        are accepted (heuristic; the final strict verification keeps the
        returned bound honest).
        """
        base, G = self._design(lam)
        shape = warm.copy()
        pts = base + (G @ shape if self.n_free else 0.0)
        actual = self._exact_clearance(pts)
        best = (actual, shape.copy())
        if self.n_free == 0:
            return best
        radius = 0.2
        c = np.zeros(self.n_free + 1)
        c[-1] = -1.0
        for _ in range(rounds):
            edges = self._nearest_edges(pts)
            rows, rhs = self._line_rows(base, G, np.arange(len(pts)), edges)
            improved = False
            for _ in range(5):
                bounds = [(s - radius, s + radius) for s in shape] + [(None, None)]
                res = linprog(c, A_ub=rows, b_ub=rhs, bounds=bounds, method="highs")
                if res.success:
                    new_shape = res.x[:-1]
                    new_actual = self._exact_clearance(base + G @ new_shape)
                    if new_actual > actual + 1e-12:
                        shape, actual = new_shape, new_actual
                        pts = base + G @ shape
                        improved = True
                        radius = min(radius * 1.6, 0.5)
                        break
                radius *= 0.4
                if radius < 5e-4:
                    break
            if actual > best[0]:
                best = (actual, shape.copy())
            if not improved or radius < 5e-4:
                break
        return best

    def max_clearance_at(self, lam: float, warm: np.ndarray) -> tuple[float, np.ndarray]:
        if isinstance(self.domain, PlanarDomain):
            if self._edge_normals is not None:
                return self.lp_max_clearance(lam, warm)
            return self.slp_max_clearance(lam, warm)
        return self.maximize_clearance(lam, warm, 25 * max(4, self.n_free), 0.02)

    def straight_lambda(self) -> float | None:
        """Smallest lam for the affine disc through z, w, if one is feasible."""
        u = self.w - self.z
        if isinstance(self.domain, PlanarDomain):
            room = float(self.domain.distance_to_boundary([complex(self.z[0])])[0])
            lam = float(np.linalg.norm(u)) / max(room, 1e-15)
            return lam if lam < _LAM_MAX else None
        c = np.asarray(self.domain.center, dtype=complex)
        x = self.domain.to_base(self.z[None, :])[0] - c
        ub = self.domain.to_base(self.w[None, :])[0] - c - x
        radii = np.asarray(self.domain.radii, dtype=float)
        if self.domain.kind in ("disc", "ball"):
            r = radii[0]
            cross = abs(np.dot(ub, x.conj()))
            inner = cross ** 2 + np.linalg.norm(ub) ** 2 * (r ** 2 - np.linalg.norm(x) ** 2)
            if inner <= 0:
                return None
            mu = (-cross + math.sqrt(inner)) / max(np.linalg.norm(ub) ** 2, 1e-30)
            lam = 1.0 / mu if mu > 0 else None
        else:
            mus = []
            for ui, xi, ri in zip(ub, x, radii):
                head = ri - abs(xi)
                if head <= 0:
                    return None
                if abs(ui) > 1e-15:
                    mus.append(head / abs(ui))
            lam = 1.0 / min(mus) if mus else _LAM_MIN
        return lam if lam is not None and lam < _LAM_MAX else None

    def initial_shapes(self) -> list[np.ndarray]:
        if self.n_free == 0:
            return [np.zeros(0)]
        rng = np.random.default_rng(self.config.seed)
        shapes = [np.zeros(self.n_free)]
        mid = 0.5 * (self.z + self.w)
        if isinstance(self.domain, PlanarDomain):
            bend = (self.domain.centroid - complex(mid[0])) / self.scale
        else:
            c = np.asarray(self.domain.center, dtype=complex)
            bend = complex((c - mid)[0]) / self.scale
        for sign in (+0.3, -0.3):
            s = np.zeros(self.n_free)
            s[0] = sign * bend.real
            s[1] = sign * bend.imag
            shapes.append(s)
        while len(shapes) < self.config.n_starts:
            shapes.append(0.08 * rng.standard_normal(self.n_free))
        return shapes[:max(1, self.config.n_starts)]


def _search_slack(problem: _DiscProblem, lam: float, shape: np.ndarray) -> float:
    """Clearance bar during the search: the slack at the *verification*
    density.  Using the coarse search density here would inflate lam by the
    first-order chord bound on nonconvex targets; candidates that cheat
    between search samples are caught by the strict dense verification and
    repaired by the shrink ladder."""
    cand = AnalyticDiscCandidate(problem.coefficients(lam, shape), lam)
    from imlab.extremal.candidates import sampling_slack

    n_eff = max(problem.config.boundary_samples, problem.config.search_samples)
    return sampling_slack(cand, problem.domain, n_eff)


def _bisect(problem: _DiscProblem, lam_hi: float, warm: np.ndarray,
            lam_tol: float) -> tuple[float, np.ndarray]:
    """Shrink lam by bisection; lam_hi must be search-feasible with ``warm``."""
    lo, hi = _LAM_MIN, lam_hi
    warm_hi = warm
    while hi - lo > lam_tol:
        mid = 0.5 * (lo + hi)
        c_val, s_val = problem.max_clearance_at(mid, warm_hi)
        if c_val > _search_slack(problem, mid, s_val):
            hi, warm_hi = mid, s_val
        else:
            lo = mid
    return hi, warm_hi


def _piece_anchor(domain: PlanarDomain, z: complex, w: complex,
                  config: SolverConfig) -> tuple[float, np.ndarray] | None:
    """Solve the convex-LP problem inside a convex piece containing the pair.

    Any disc feasible in a subset is feasible in the domain, so the result
    is both a feasible anchor and a valid candidate in its own right.
    """
    from imlab.geometry import GeometryError, convex_subsets

    try:
        pieces = convex_subsets(domain)
    except GeometryError:
        return None
    best: tuple[float, np.ndarray] | None = None
    for piece in pieces:
        pts_margin = piece.distance_to_boundary([z, w])
        inside = piece.covers_points([z, w])
        if not bool(np.all(inside)) or float(np.min(pts_margin)) < 1e-9:
            continue
        sub = _DiscProblem(piece, z, w, config, scale=domain_scale(domain))
        lam0 = sub.straight_lambda()
        shape0 = np.zeros(sub.n_free)
        lam_hi = None
        if lam0 is not None:
            lam_try = min(lam0 * 1.02 + 1e-4, 0.995)
            if sub.search_clearance(lam_try, shape0) > _search_slack(sub, lam_try, shape0):
                lam_hi = lam_try
        if lam_hi is None:
            for lam_try in (0.9, 0.98, _LAM_MAX):
                c_val, s_val = sub.max_clearance_at(lam_try, shape0)
                if c_val > _search_slack(sub, lam_try, s_val):
                    lam_hi, shape0 = lam_try, s_val
                    break
            else:
                continue
        lam_star, shape_star = _bisect(sub, lam_hi, shape0, config.lam_tol)
        if best is None or lam_star < best[0]:
            best = (lam_star, shape_star)
    return best


def lempert_upper(domain: PlanarDomain | ModelDomain, z, w,
                  config: Optional[SolverConfig] = None) -> MetricEstimate:
    """Certified upper bound for the Lempert function l_D(z, w)."""
    config = config or SolverConfig()
    require_interior(domain, z, w)
    problem = _DiscProblem(domain, z, w, config)
    if np.linalg.norm(problem.z - problem.w) < 1e-15:
        return MetricEstimate(system="l", lower=0.0, upper=0.0,
                              provenance={"solver": "identity_pair"}, slack=0.0)

    # feasible anchor: the straight disc is feasible by construction when its
    # lam exists; nonconvex polygons can also anchor on a convex piece
    lam_hi = None
    warm = None
    anchor_used = "straight_disc"
    lam0 = problem.straight_lambda()
    if lam0 is not None:
        lam_try = min(lam0 * 1.02 + 1e-4, 0.995)
        shape0 = np.zeros(problem.n_free)
        if problem.search_clearance(lam_try, shape0) > _search_slack(problem, lam_try, shape0):
            lam_hi, warm = lam_try, shape0
    if lam_hi is None and isinstance(domain, PlanarDomain) and not domain.is_convex:
        piece = _piece_anchor(domain, complex(problem.z[0]), complex(problem.w[0]), config)
        if piece is not None:
            lam_p, shape_p = piece
            # re-validate on the full domain (its sampling slack differs)
            for bump in (1.0, 1.02, 1.05, 1.12, 1.25):
                lam_try = min(lam_p * bump + 1e-4, _LAM_MAX)
                c_val, s_val = problem.max_clearance_at(lam_try, shape_p)
                if c_val > _search_slack(problem, lam_try, s_val):
                    lam_hi, warm = lam_try, s_val
                    anchor_used = "convex_piece"
                    break
    if lam_hi is None:
        anchor_used = "multistart"
        for lam_try in (0.9, 0.98, _LAM_MAX):
            best_c, best_s = -math.inf, None
            for shape0 in problem.initial_shapes():
                c_val, s_val = problem.max_clearance_at(lam_try, shape0)
                if c_val > best_c:
                    best_c, best_s = c_val, s_val
            if best_c > _search_slack(problem, lam_try, best_s):
                lam_hi, warm = lam_try, best_s
                break
    if lam_hi is None:
        return MetricEstimate(
            system="l", lower=0.0, upper=math.inf,
            provenance={"solver": "analytic_disc_bisection",
                        "diagnostic": "no feasible disc found at any anchor"},
            slack=0.0)

    lam_star, shape = _bisect(problem, lam_hi, warm, config.lam_tol)
    base_coeffs = problem.coefficients(lam_star, shape)
    n_final = config.boundary_samples
    for t in _SHRINK_LADDER:
        lam_f = lam_star / t
        if lam_f >= _LAM_MAX:
            continue
        # phi(t zeta) still hits z at 0 and w at lam_star / t
        coeffs = base_coeffs * (t ** np.arange(problem.d + 1))[:, None]
        cand = AnalyticDiscCandidate(coeffs, lam_f)
        if verify_disc_candidate(cand, domain, n_final):
            return MetricEstimate(
                system="l", lower=0.0, upper=math.atanh(lam_f),
                provenance={
                    "solver": "analytic_disc_bisection",
                    "degree": problem.d,
                    "lambda": lam_f,
                    "shrink": t,
                    "anchor": anchor_used,
                    "feasibility_margin": cand.feasibility_margin,
                    "verified_samples": n_final,
                },
                slack=0.0)

    return MetricEstimate(
        system="l", lower=0.0, upper=math.inf,
        provenance={"solver": "analytic_disc_bisection",
                    "diagnostic": "search candidate failed strict verification",
                    "lambda_search": lam_star},
        slack=0.0)
