"""Riemann map oracle: exactness checks against known maps and self-consistency."""

import cmath
import math

import numpy as np
import pytest

from imlab import geometry as g
from imlab.conformal import ConformalError, build_riemann_map, pullback_metric
from imlab.disc_metrics import hyperbolic_distance

RES = 0.01


@pytest.fixture(scope="module")
def disc_map():
    return build_riemann_map(g.disc_polygon(0, 1.0, RES), 0j)


@pytest.fixture(scope="module")
def square_map():
    sq = g.rectangle_domain(complex(-1, -1), complex(1, 1), RES)
    return build_riemann_map(sq, 0j)


def test_disc_map_is_identity(disc_map):
    pts = np.array([0.3 + 0.2j, -0.5 + 0.1j, 0.6j, 0.4 - 0.4j, -0.2 - 0.55j])
    img = disc_map.map_points(pts)
    assert np.max(np.abs(img - pts)) < 5 * max(disc_map.accuracy, 2e-6)


def test_disc_map_basepoint(disc_map):
    assert abs(disc_map.map_point(0j)) == 0.0


def test_square_four_fold_symmetry(square_map):
    zs = np.array([0.5 + 0.2j, 0.3 - 0.6j, 0.1 + 0.1j, -0.7 + 0.15j])
    a = square_map.map_points(1j * zs)
    b = 1j * square_map.map_points(zs)
    assert np.max(np.abs(a - b)) < 5 * square_map.accuracy + 1e-12


def test_square_conformal_radius(square_map):
    # disc -> square map: f(zeta) = c * int_0^zeta (1-t^4)^(-1/2) dt sends the
    # corners of the disc to corners at distance c*I; for [-1,1]^2 they sit at
    # distance sqrt(2), so the conformal radius is c = sqrt(2)/I and
    # psi'(0) = I/sqrt(2)
    from scipy.integrate import quad
    integral, err = quad(lambda t: 1.0 / math.sqrt(1.0 - t ** 4), 0, 1,
                         points=[1.0])
    assert err < 1e-9
    h = 1e-5
    der = (square_map.map_point(h) - square_map.map_point(-h)) / (2 * h)
    assert der.imag == pytest.approx(0.0, abs=1e-8)
    assert der.real == pytest.approx(integral / math.sqrt(2.0), rel=1e-4)


def test_affine_covariance():
    sq = g.rectangle_domain(complex(-1, -1), complex(1, 1), RES)
    a, b = 0.5 + 0.25j, 2.0 - 1.0j
    sq2 = g.PlanarDomain([a * v + b for v in sq.vertices], RES * abs(a))
    r1 = build_riemann_map(sq, 0.2 + 0.1j)
    r2 = build_riemann_map(sq2, a * (0.2 + 0.1j) + b)
    zs = np.array([0.5 + 0.2j, -0.3 + 0.6j, 0.1 - 0.4j])
    rot = cmath.exp(1j * cmath.phase(a))
    defect = np.max(np.abs(rot * r1.map_points(zs) - r2.map_points(a * zs + b)))
    assert defect < 5 * (r1.accuracy + r2.accuracy) + 1e-10


def test_pullback_basepoint_independent():
    L = g.l_shape_domain(2.0, 1.0, RES)
    r1 = build_riemann_map(L, complex(0.5, 0.5))
    r2 = build_riemann_map(L, complex(1.5, 0.5))
    z, w = complex(0.3, 1.6), complex(1.6, 0.3)
    e1 = pullback_metric(r1, z, w, "k")
    e2 = pullback_metric(r2, z, w, "k")
    assert e1.midpoint == pytest.approx(e2.midpoint, abs=e1.slack + e2.slack + 1e-9)


def test_pullback_on_disc_is_hyperbolic(disc_map):
    z, w = 0.1 + 0.2j, -0.4 + 0.3j
    est = pullback_metric(disc_map, z, w, "l")
    assert est.lower <= hyperbolic_distance(z, w).value <= est.upper
    est_g = pullback_metric(disc_map, z, w, "g")
    exact = hyperbolic_distance(z, w).star_value
    assert est_g.lower <= exact <= est_g.upper
    assert est_g.gap < 1e-4


def test_pullback_symmetry(square_map):
    a = pullback_metric(square_map, 0.2 + 0.1j, -0.5 + 0.3j, "c")
    b = pullback_metric(square_map, -0.5 + 0.3j, 0.2 + 0.1j, "c")
    assert a.midpoint == pytest.approx(b.midpoint, abs=1e-12)


def test_pullback_systems_coincide(square_map):
    vals = [pullback_metric(square_map, 0, 0.5, s).midpoint for s in "clk"]
    assert max(vals) - min(vals) < 1e-14


def test_monotonicity_under_inclusion(square_map, disc_map):
    # the disc sits inside the square, so square values are smaller
    z, w = 0.1 + 0.1j, 0.45 - 0.2j
    inner = pullback_metric(disc_map, z, w, "k")
    outer = pullback_metric(square_map, z, w, "k")
    assert outer.midpoint <= inner.midpoint + inner.slack + outer.slack


def test_injectivity_on_grid(square_map):
    xs = np.linspace(-0.7, 0.7, 7)
    pts = np.array([complex(x, y) for x in xs for y in xs])
    assert square_map.min_pairwise_image_distance(pts) > 0


def test_boundary_modulus(square_map):
    table = square_map.boundary_correspondence
    assert len(table) > 16
    # images are normalized to the circle; the sampled points are boundary pts
    assert np.all(np.abs(np.abs(table[:, 1]) - 1.0) < 1e-12)


def test_basepoint_margin_enforced():
    sq = g.rectangle_domain(complex(-1, -1), complex(1, 1), RES)
    with pytest.raises(ConformalError):
        build_riemann_map(sq, complex(0.999, 0))


def test_degenerate_corner_rejected():
    sliver = g.PlanarDomain([0, 1 + 0j, 0.5 + 0.01j], RES)  # ~1.1 degree corner
    with pytest.raises(ConformalError):
        build_riemann_map(sliver)


def test_interior_margin_enforced(square_map):
    with pytest.raises(ConformalError):
        pullback_metric(square_map, 0, complex(0.9999, 0), "k")


def test_scaled_translated_domain_agrees():
    sq = g.rectangle_domain(complex(-1, -1), complex(1, 1), RES)
    t, shift = 1.7, 0.3 - 2.2j  # real positive scale keeps the normalization
    sq2 = g.PlanarDomain([t * v + shift for v in sq.vertices], RES * t)
    r1 = build_riemann_map(sq, 0.1 + 0.1j)
    r2 = build_riemann_map(sq2, t * (0.1 + 0.1j) + shift)
    zs = np.array([0.4 - 0.3j, -0.6 + 0.2j])
    defect = np.max(np.abs(r1.map_points(zs) - r2.map_points(t * zs + shift)))
    assert defect < 5 * (r1.accuracy + r2.accuracy) + 1e-10
