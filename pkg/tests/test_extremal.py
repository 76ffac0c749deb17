"""Variational solvers: ground truths, certification logic, contractibility."""

import math

import numpy as np
import pytest

from imlab import geometry as g
from imlab.disc_metrics import hyperbolic_distance
from imlab.estimates import BoundInconsistency, MetricEstimate, certify
from imlab.extremal import (
    SolverConfig,
    caratheodory_lower,
    certified_interval,
    green_bounds,
    kobayashi_upper,
    lempert_upper,
)
from imlab.conformal import build_riemann_map, pullback_metric

RES = 0.01
ATANH_HALF = math.atanh(0.5)


@pytest.fixture(scope="module")
def unit_disc():
    return g.disc_polygon(0, 1.0, RES)


@pytest.fixture(scope="module")
def square():
    return g.rectangle_domain(complex(-1, -1), complex(1, 1), RES)


@pytest.fixture(scope="module")
def square_oracle(square):
    return build_riemann_map(square, 0j)


# -- Caratheodory -----------------------------------------------------------


def test_caratheodory_disc_identity_candidate(unit_disc):
    est = caratheodory_lower(unit_disc, 0, 0.5, SolverConfig(degree=8))
    assert est.lower == pytest.approx(ATANH_HALF, abs=1e-6)
    assert est.lower <= ATANH_HALF + 1e-12  # honest lower bound


def test_caratheodory_ball_projection():
    ball = g.ModelDomain("ball", [0j, 0j], [1.0])
    est = caratheodory_lower(ball, [0j, 0j], [0.5 + 0j, 0j], SolverConfig(degree=1))
    assert est.lower >= ATANH_HALF - 1e-6
    assert est.lower <= ATANH_HALF + 1e-12


def test_caratheodory_square_close_to_oracle(square, square_oracle):
    oracle = pullback_metric(square_oracle, 0, 0.5, "c")
    est = caratheodory_lower(square, 0, 0.5, SolverConfig(degree=8))
    assert est.lower <= oracle.upper + 1e-9
    assert est.lower >= oracle.lower - 1e-2


def test_caratheodory_degree_monotone(square):
    lo4 = caratheodory_lower(square, 0, 0.5, SolverConfig(degree=4)).lower
    lo8 = caratheodory_lower(square, 0, 0.5, SolverConfig(degree=8)).lower
    assert lo8 >= lo4 - 1e-8


def test_caratheodory_identical_points(square):
    assert caratheodory_lower(square, 0.1, 0.1).lower == 0.0


# -- Lempert ----------------------------------------------------------------


def test_lempert_disc(unit_disc):
    cfg = SolverConfig(degree=8, boundary_samples=8192, search_samples=512,
                       lam_tol=2e-5)
    est = lempert_upper(unit_disc, 0, 0.5, cfg)
    assert est.upper >= ATANH_HALF - 1e-12  # honest upper bound
    assert est.upper == pytest.approx(ATANH_HALF, abs=1e-4)


def test_lempert_ball_straight_disc():
    ball = g.ModelDomain("ball", [0j, 0j], [1.0])
    cfg = SolverConfig(degree=1, lam_tol=1e-4, boundary_samples=2048)
    est = lempert_upper(ball, [0j, 0j], [0.5 + 0j, 0j], cfg)
    assert ATANH_HALF - 1e-12 <= est.upper <= ATANH_HALF + 1e-3


def test_lempert_square_above_oracle(square, square_oracle):
    oracle = pullback_metric(square_oracle, 0, 0.5, "l")
    est = lempert_upper(square, 0, 0.5, SolverConfig(degree=8, boundary_samples=4096))
    assert est.upper >= oracle.lower - 1e-9
    assert est.upper <= oracle.upper + 2e-2


def test_lempert_degree_improves(square, square_oracle):
    oracle = pullback_metric(square_oracle, 0, 0.5, "l").midpoint
    up8 = lempert_upper(square, 0, 0.5, SolverConfig(degree=8, boundary_samples=4096)).upper
    up12 = lempert_upper(square, 0, 0.5, SolverConfig(degree=12, boundary_samples=4096)).upper
    assert up12 <= up8 + 2e-4  # bisection tolerance is the solver noise here
    assert up12 - oracle < up8 - oracle + 2e-4


def test_lempert_identical_points(square):
    est = lempert_upper(square, 0.1, 0.1)
    assert est.upper == 0.0


def test_lempert_nonconvex_piece_anchor():
    L = g.l_shape_domain(2.0, 1.2, RES)
    cfg = SolverConfig(degree=8, boundary_samples=4096)
    est = lempert_upper(L, complex(0.6, 0.6), complex(1.05, 0.65), cfg)
    assert math.isfinite(est.upper)
    rmap = build_riemann_map(L, complex(0.6, 0.6))
    oracle = pullback_metric(rmap, complex(0.6, 0.6), complex(1.05, 0.65), "l")
    assert est.upper >= oracle.lower - 1e-9
    assert est.upper <= oracle.upper + 6e-2


# -- Kobayashi --------------------------------------------------------------


def test_kobayashi_single_link_bounded_by_lempert(square):
    cfg = SolverConfig(degree=6, boundary_samples=2048)
    direct = lempert_upper(square, 0, 0.5, cfg)
    chain = kobayashi_upper(square, 0, 0.5, waypoints=[], config=cfg)
    assert chain.upper <= direct.upper + 1e-9


def test_kobayashi_disc_waypoints(unit_disc):
    cfg = SolverConfig(degree=8, boundary_samples=8192, search_samples=512,
                       lam_tol=2e-5)
    est = kobayashi_upper(unit_disc, 0, 0.5, waypoints=[0.25], config=cfg)
    # p is a metric: the chain through a collinear waypoint is no shortcut
    assert est.upper >= ATANH_HALF - 1e-6
    assert est.upper <= ATANH_HALF + 1e-3


def test_kobayashi_routes_around_failed_edges():
    L = g.l_shape_domain(2.0, 1.0, RES)
    cfg = SolverConfig(degree=10, boundary_samples=4096)
    z, w = complex(0.4, 1.6), complex(1.6, 0.4)
    est = kobayashi_upper(L, z, w,
                          waypoints=[complex(0.5, 0.9), complex(0.9, 0.5)],
                          config=cfg)
    # direct disc is out of polynomial reach; the chain must route via bends
    assert math.isfinite(est.upper)
    assert len(est.provenance["chain"]) > 2


# -- Green ------------------------------------------------------------------


def test_green_disc_pole_at_zero(unit_disc):
    # classical Schwarz bound: g(z, 0) = |z| on the disc
    cfg = SolverConfig(degree=10, boundary_samples=4096)
    est = green_bounds(unit_disc, 0.5, 0.0, cfg)
    assert est.lower <= 0.5 + 1e-9
    assert est.upper >= 0.5 - 1e-9
    assert est.gap < 5e-3


def test_green_disc_bounds_collapse(unit_disc):
    cfg = SolverConfig(degree=8, boundary_samples=8192, search_samples=512,
                       lam_tol=2e-5)
    est = green_bounds(unit_disc, 0.0, 0.5, cfg)
    assert est.lower <= 0.5 <= est.upper
    assert est.gap < 1e-4


def test_green_square_oracle_inside_bounds(square, square_oracle):
    est = green_bounds(square, 0, 0.5, SolverConfig(degree=8, boundary_samples=4096),
                       rmap=square_oracle)
    oracle_star = est.provenance["oracle_star"]
    assert est.lower - 1e-9 <= oracle_star <= est.upper + 1e-9


# -- certification logic ------------------------------------------------------


def test_certify_merges():
    lo = MetricEstimate(system="k", lower=ATANH_HALF - 1e-6, upper=math.inf)
    hi = MetricEstimate(system="k", lower=0.0, upper=ATANH_HALF + 1e-4)
    merged = certify(lo, hi, tol=1e-3)
    assert merged.provenance["certified"]
    assert merged.gap < 1e-3


def test_certify_keeps_finite_lower_with_infinite_upper():
    lo = MetricEstimate(system="l", lower=0.7, upper=math.inf)
    hi = MetricEstimate(system="l", lower=0.0, upper=math.inf)
    merged = certify(lo, hi, tol=1e-3)
    assert merged.lower == 0.7
    assert math.isinf(merged.upper)
    assert not merged.provenance["certified"]


def test_certify_inconsistent_pair_raises():
    lo = MetricEstimate(system="c", lower=1.0, upper=math.inf)
    hi = MetricEstimate(system="c", lower=0.0, upper=0.5)
    with pytest.raises(BoundInconsistency):
        certify(lo, hi)


def test_certified_interval_system_ordering(square):
    cfg = SolverConfig(degree=6, boundary_samples=2048)
    c_est = certified_interval(square, 0, 0.5, "c", cfg)
    l_est = certified_interval(square, 0, 0.5, "l", cfg)
    k_est = certified_interval(square, 0, 0.5, "k", cfg)
    g_est = certified_interval(square, 0, 0.5, "g", cfg)
    assert c_est.lower <= l_est.upper
    assert k_est.upper <= l_est.upper + 1e-9
    assert math.tanh(c_est.lower) <= g_est.upper + 1e-12
    assert g_est.lower <= math.tanh(l_est.upper) + 1e-12


# -- invariance and contractibility ------------------------------------------


def test_affine_invariance_model_ball():
    cfg = SolverConfig(degree=1, lam_tol=1e-4)
    ball = g.ModelDomain("ball", [0j, 0j], [1.0])
    A = [[1.5 + 0.5j, 0.2j], [0j, 0.8 + 0j]]
    b = [2.0 + 1j, -0.5j]
    mapped = g.ModelDomain("ball", [0j, 0j], [1.0], (A, b))
    z = np.array([0j, 0j])
    w = np.array([0.5 + 0j, 0j])
    Amat = np.asarray(A)
    bvec = np.asarray(b)
    zm, wm = Amat @ z + bvec, Amat @ w + bvec
    for solver in (caratheodory_lower, lempert_upper):
        e1 = solver(ball, z, w, cfg)
        e2 = solver(mapped, zm, wm, cfg)
        v1 = e1.lower if solver is caratheodory_lower else e1.upper
        v2 = e2.lower if solver is caratheodory_lower else e2.upper
        assert v1 == pytest.approx(v2, abs=2e-4)


def test_holomorphic_contractibility_sample():
    # affine map sends the square into a larger disc: values must contract
    rng = np.random.default_rng(21)
    sq = g.rectangle_domain(complex(-1, -1), complex(1, 1), RES)
    cfg = SolverConfig(degree=6, boundary_samples=2048)
    for _ in range(5):
        a = complex(*rng.uniform(-0.4, 0.4, 2)) + 0.3
        b = complex(*rng.uniform(-0.2, 0.2, 2))
        eps = complex(*rng.uniform(-0.05, 0.05, 2))
        f = lambda t: a * t + b + eps * t * t
        boundary_img = f(np.asarray(sq.boundary_samples()))
        radius = float(np.max(np.abs(boundary_img - b))) * 1.25 + 0.2
        G = g.disc_polygon(b, radius, RES)
        z, w = complex(*rng.uniform(-0.5, 0.5, 2)), complex(*rng.uniform(-0.5, 0.5, 2))
        if abs(z - w) < 0.1:
            continue
        upper_src = lempert_upper(sq, z, w, cfg)
        lower_img = caratheodory_lower(G, f(z), f(w), cfg)
        assert lower_img.lower <= upper_src.upper + 1e-9


def test_domain_monotonicity(square, unit_disc):
    cfg = SolverConfig(degree=6, boundary_samples=2048)
    z, w = 0.1 + 0.1j, 0.4 - 0.2j
    up_big = lempert_upper(square, z, w, cfg)
    up_small = lempert_upper(unit_disc, z, w, cfg)
    lo_big = caratheodory_lower(square, z, w, cfg)
    lo_small = caratheodory_lower(unit_disc, z, w, cfg)
    # disc inside square: square values are dominated by disc values
    assert lo_big.lower <= lo_small.lower + 2e-3
    assert up_big.upper <= up_small.upper + 2e-3
