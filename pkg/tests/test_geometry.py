"""Compact-set geometry kernel: offsets, Hausdorff distance, containment."""

import math

import numpy as np
import pytest

from imlab import geometry as g


RES = 0.01


@pytest.fixture(scope="module")
def square():
    return g.rectangle_domain(complex(-1, -1), complex(1, 1), RES)


@pytest.fixture(scope="module")
def unit_disc():
    return g.disc_polygon(0, 1.0, RES)


def grid_points(lo, hi, n):
    xs = np.linspace(lo, hi, n)
    X, Y = np.meshgrid(xs, xs)
    return (X + 1j * Y).ravel()


# -- envelope ---------------------------------------------------------------


def test_envelope_square_membership_oracle(square):
    env = g.envelope(square, 0.5)
    pts = grid_points(-1.8, 1.8, 41)
    dist_to_square = square.distance_to_closure(pts)
    inside_env = env.covers_points(pts)
    # brute-force oracle: p in envelope iff dist(p, square) < 0.5
    should = dist_to_square < 0.5
    disagree = pts[np.logical_xor(inside_env, should)]
    # disagreements only within a resolution band of the ideal arc
    if len(disagree):
        assert np.all(np.abs(square.distance_to_closure(disagree) - 0.5) < 2 * RES)


def test_envelope_contains_domain(square, unit_disc):
    for dom, eps in [(square, 0.3), (unit_disc, 0.17)]:
        env = g.envelope(dom, eps)
        assert env.shapely.covers(dom.shapely)


def test_envelope_hausdorff_is_eps_for_convex(square):
    env = g.envelope(square, 0.5)
    h = g.hausdorff(env, square)
    assert h.distance == pytest.approx(0.5, abs=2 * RES)


def test_envelope_rejects_bad_eps(square):
    with pytest.raises(g.GeometryError):
        g.envelope(square, 0.0)


# -- erode ------------------------------------------------------------------


def test_erode_disc_membership_oracle(unit_disc):
    result = g.erode(unit_disc, 0.3)
    assert result.is_connected
    pts = grid_points(-1.0, 1.0, 41)
    inside = result.domain.covers_points(pts)
    oracle = unit_disc.distance_to_boundary(pts) > 0.3
    oracle &= unit_disc.contains_points(pts)
    disagree = pts[np.logical_xor(inside, oracle)]
    if len(disagree):
        d = unit_disc.distance_to_boundary(disagree)
        assert np.all(np.abs(d - 0.3) < 2 * RES)


def test_erode_radius_shrinks_disc(unit_disc):
    result = g.erode(unit_disc, 0.3)
    h = g.hausdorff(result.domain, g.disc_polygon(0, 0.7, RES))
    assert h.distance < 2 * RES


def test_erode_strictly_inside(square):
    result = g.erode(square, 0.25)
    assert g.compactly_contained(result.domain, square)


def test_erode_empty():
    sq = g.rectangle_domain(0, complex(1, 1), RES)
    result = g.erode(sq, 0.6)  # inradius 0.5
    assert result.is_empty and result.domain is None


def test_erode_disconnection_reported():
    # dumbbell: two squares joined by a thin neck
    verts = [0j, 1 + 0j, 1 + 0.45j, 1.5 + 0.45j, 1.5 + 0j, 2.5 + 0j,
             2.5 + 1j, 1.5 + 1j, 1.5 + 0.55j, 1 + 0.55j, 1 + 1j, 0 + 1j]
    dumbbell = g.PlanarDomain(verts, RES)
    result = g.erode(dumbbell, 0.2)
    assert result.status == "disconnected"
    assert result.component_count == 2
    assert result.domain is not None


# -- hausdorff --------------------------------------------------------------


def test_hausdorff_concentric_discs():
    h = g.hausdorff(g.disc_polygon(0, 1.0, RES), g.disc_polygon(0, 1.2, RES))
    assert h.distance == pytest.approx(0.2, abs=2 * RES)


def test_hausdorff_identity(square):
    assert g.hausdorff(square, square).distance == 0.0


def test_hausdorff_translated_square_brute_force(square):
    shifted = g.PlanarDomain([v + 0.3 for v in square.vertices], RES)
    h = g.hausdorff(square, shifted)
    # brute force over dense boundary samples of both polygons
    sa = square.boundary_samples(1e-3)
    sb = shifted.boundary_samples(1e-3)
    d1 = np.max(shifted.distance_to_closure(sa))
    d2 = np.max(square.distance_to_closure(sb))
    assert h.distance == pytest.approx(max(d1, d2), abs=2 * RES)
    assert h.distance == pytest.approx(0.3, abs=2 * RES)


def test_hausdorff_symmetry_and_witnesses(square, unit_disc):
    h1 = g.hausdorff(square, unit_disc)
    h2 = g.hausdorff(unit_disc, square)
    assert h1.distance == pytest.approx(h2.distance, abs=1e-12)
    p, q = h1.witness_a_to_b
    assert abs(unit_disc.distance_to_closure([p])[0] - h1.directed_a_to_b) < 1e-9
    assert abs(p - q) == pytest.approx(h1.directed_a_to_b, abs=1e-9)


def test_hausdorff_triangle_inequality_random():
    rng = np.random.default_rng(11)
    polys = [g.random_star_polygon(rng, n_vertices=48, resolution=RES,
                                   center=complex(*rng.uniform(-0.3, 0.3, 2)))
             for _ in range(9)]
    for _ in range(30):
        a, b, c = rng.choice(len(polys), 3, replace=False)
        h_ab = g.hausdorff(polys[a], polys[b]).distance
        h_bc = g.hausdorff(polys[b], polys[c]).distance
        h_ac = g.hausdorff(polys[a], polys[c]).distance
        assert h_ac <= h_ab + h_bc + 4 * RES


def test_envelope_hausdorff_duality():
    rng = np.random.default_rng(5)
    for _ in range(6):
        a = g.random_star_polygon(rng, n_vertices=48, resolution=RES)
        b = g.random_star_polygon(rng, n_vertices=48, resolution=RES)
        delta = g.hausdorff(a, b).distance
        env_b = g.envelope(b, delta + 3 * RES)
        assert env_b.shapely.covers(a.shapely)
        env_a = g.envelope(a, delta + 3 * RES)
        assert env_a.shapely.covers(b.shapely)


def test_offset_compositions_convex(square):
    eps = 0.22
    grown_back = g.erode(g.envelope(square, eps), eps)
    assert grown_back.domain.shapely.buffer(2 * RES).covers(square.shapely)
    shrunk_back = g.envelope(g.erode(square, eps).domain, eps)
    assert g.envelope(square, 2 * RES).shapely.covers(shrunk_back.shapely)


# -- containment ------------------------------------------------------------


def test_compactly_contained_concentric():
    inner = g.disc_polygon(0, 0.5, RES)
    outer = g.disc_polygon(0, 1.0, RES)
    res = g.compactly_contained(inner, outer)
    assert res.holds and res.margin == pytest.approx(0.5, abs=2 * RES)


def test_compactly_contained_self_fails(unit_disc):
    assert not g.compactly_contained(unit_disc, unit_disc)


def test_erode_inside_envelope_any_polygon():
    rng = np.random.default_rng(3)
    for _ in range(5):
        dom = g.random_star_polygon(rng, n_vertices=64, resolution=RES)
        inner = g.erode(dom, 0.2)
        if not inner.is_connected:
            continue
        outer = g.envelope(dom, 0.2)
        res = g.compactly_contained(inner.domain, outer)
        assert res.holds
        assert res.margin > 0.4 - 4 * RES


def test_containment_transitive_antisymmetric():
    a = g.disc_polygon(0, 0.4, RES)
    b = g.disc_polygon(0, 0.7, RES)
    c = g.disc_polygon(0, 1.0, RES)
    assert g.compactly_contained(a, b) and g.compactly_contained(b, c)
    assert g.compactly_contained(a, c)
    assert not g.compactly_contained(c, a)
    assert not g.compactly_contained(b, a)


def test_contains_compact(unit_disc):
    assert g.contains_compact(unit_disc, [0, 0.5])
    assert not g.contains_compact(unit_disc, [0.999999])
    with pytest.raises(g.GeometryError):
        g.contains_compact(unit_disc, [])


# -- model domains ----------------------------------------------------------


def test_model_ball_membership():
    ball = g.ModelDomain("ball", [0j, 0j], [1.0])
    assert ball.contains_points(np.array([[0.5, 0.0]], dtype=complex))[0]
    assert not ball.contains_points(np.array([[0.8, 0.8]], dtype=complex))[0]


def test_model_affine_membership_exact():
    A = [[2.0 + 0j, 0j], [0j, 0.5 + 0j]]
    b = [1 + 1j, 0j]
    ball = g.ModelDomain("ball", [0j, 0j], [1.0], (A, b))
    inside = ball.from_base(np.array([[0.5, 0.5]], dtype=complex))
    assert ball.contains_points(inside)[0]
    assert not ball.contains_points(np.array([[4.0, 0.0]], dtype=complex))[0]


def test_model_hausdorff_and_containment():
    b1 = g.ModelDomain("ball", [0j, 0j], [1.0])
    b2 = g.ModelDomain("ball", [0j, 0j], [1.2])
    assert g.hausdorff(b1, b2).distance == pytest.approx(0.2)
    assert g.compactly_contained(b1, b2).margin == pytest.approx(0.2)
    with pytest.raises(g.GeometryError):
        g.hausdorff(b1, g.ModelDomain("polydisc", [0j, 0j], [1.0, 1.0]))


def test_model_offsets():
    b1 = g.ModelDomain("ball", [0j, 0j], [1.0])
    assert g.envelope(b1, 0.1).radii[0] == pytest.approx(1.1)
    assert g.erode(b1, 0.3).domain.radii[0] == pytest.approx(0.7)
    assert g.erode(b1, 1.5).is_empty


# -- convex subsets and wire format ------------------------------------------


def test_convex_subsets_l_shape():
    L = g.l_shape_domain(2.0, 1.0, RES)
    subs = g.convex_subsets(L)
    assert len(subs) == 2
    for s in subs:
        assert s.is_convex
        assert L.shapely.buffer(1e-9).covers(s.shapely)
    areas = sorted(s.area for s in subs)
    assert areas == pytest.approx([2.0, 2.0], abs=1e-6)


def test_convex_subsets_convex_input(square):
    assert g.convex_subsets(square) == [square]


def test_json_round_trip(square):
    text = square.to_json()
    back = g.PlanarDomain.from_json(text)
    assert back.vertices == square.vertices
    assert back.boundary_resolution == square.boundary_resolution


def test_polygon_validation():
    with pytest.raises(g.GeometryError):
        g.PlanarDomain([0, 1 + 0j])  # too few vertices
    with pytest.raises(g.GeometryError):
        g.PlanarDomain([0, 1 + 1j, 1 + 0j, 0 + 1j])  # bowtie


def test_orientation_normalized():
    cw = g.PlanarDomain([0, 1j, 1 + 1j, 1 + 0j])  # clockwise input
    verts = np.asarray(cw.vertices)
    e = np.roll(verts, -1) - verts
    area2 = np.sum(e.real * (np.roll(verts, -1) + verts).imag) / 2
    assert cw.area > 0
