"""Compact-set calculus for planar polygonal domains and exact model domains.

Bounded planar domains are represented by positively oriented simple
polygons; envelopes (Minkowski dilations by a disc), erosions (inward
offsets), Hausdorff distances and compact-containment predicates are all
computed at a declared boundary resolution, with margins reported so that
callers can be conservative about strict containment.  Exact-geometry model
domains (disc, Euclidean ball, polydisc, affine images) cover the C^n side
with closed-form membership and offset formulas.

Shapely backs the polygon arithmetic; all sampling densities and margin
rules live here.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

import numpy as np
import shapely
from shapely.geometry import LineString, Point, Polygon
from shapely.ops import nearest_points, unary_union

__all__ = [
    "GeometryError",
    "PlanarDomain",
    "ModelDomain",
    "HausdorffResult",
    "ErosionResult",
    "ContainmentResult",
    "envelope",
    "erode",
    "hausdorff",
    "compactly_contained",
    "contains_compact",
    "polygon_union",
    "convex_subsets",
    "PathPlanner",
    "disc_polygon",
    "rectangle_domain",
    "l_shape_domain",
    "random_star_polygon",
]

DEFAULT_RESOLUTION = 1e-2

#: Conservative compact-containment rule: the measured margin must exceed
#: this multiple of the coarser boundary resolution.
CONTAINMENT_MARGIN_FACTOR = 2.0


class GeometryError(ValueError):
    """Invalid polygon input or an operation outside closed-form reach."""


def _as_complex_array(points) -> np.ndarray:
    arr = np.asarray(points, dtype=complex)
    return np.atleast_1d(arr)


def _to_xy(points: np.ndarray) -> np.ndarray:
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    return np.column_stack([pts.real, pts.imag])


@dataclass(frozen=True)
class PlanarDomain:
    """Bounded planar domain given by a positively oriented simple polygon.

    ``vertices`` is the open vertex loop (closure implicit); consecutive
    duplicates are dropped and orientation is normalized on construction.
    ``boundary_resolution`` is the target max spacing for boundary sampling
    and the scale of all conservative containment margins.
    """

    vertices: tuple[complex, ...]
    boundary_resolution: float = DEFAULT_RESOLUTION

    def __init__(self, vertices, boundary_resolution: float = DEFAULT_RESOLUTION):
        verts = [complex(v) for v in vertices]
        if len(verts) >= 2 and abs(verts[0] - verts[-1]) < 1e-14:
            verts = verts[:-1]
        cleaned: list[complex] = []
        for v in verts:
            if not cleaned or abs(v - cleaned[-1]) > 1e-14:
                cleaned.append(v)
        if len(cleaned) < 3:
            raise GeometryError("polygon needs at least 3 distinct vertices")
        if boundary_resolution <= 0:
            raise GeometryError("boundary_resolution must be positive")
        xy = [(v.real, v.imag) for v in cleaned]
        area2 = 0.0
        for (x0, y0), (x1, y1) in zip(xy, xy[1:] + xy[:1]):
            area2 += x0 * y1 - x1 * y0
        if area2 < 0:
            cleaned.reverse()
        poly = Polygon([(v.real, v.imag) for v in cleaned])
        if not poly.is_valid or poly.area <= 0:
            raise GeometryError("polygon is not simple (self-intersecting or degenerate)")
        object.__setattr__(self, "vertices", tuple(cleaned))
        object.__setattr__(self, "boundary_resolution", float(boundary_resolution))

    @cached_property
    def shapely(self) -> Polygon:
        return Polygon([(v.real, v.imag) for v in self.vertices])

    @cached_property
    def _ring(self):
        return self.shapely.exterior

    @property
    def area(self) -> float:
        return self.shapely.area

    @property
    def perimeter(self) -> float:
        return self.shapely.exterior.length

    @property
    def centroid(self) -> complex:
        c = self.shapely.centroid
        return complex(c.x, c.y)

    @cached_property
    def is_convex(self) -> bool:
        verts = np.asarray(self.vertices, dtype=complex)
        e = np.roll(verts, -1) - verts
        e_next = np.roll(e, -1)
        cross = e.real * e_next.imag - e.imag * e_next.real
        return bool(np.all(cross > -1e-12 * np.max(np.abs(e)) ** 2))

    @cached_property
    def digest(self) -> str:
        h = hashlib.sha1()
        h.update(np.asarray(self.vertices, dtype=complex).tobytes())
        h.update(repr(self.boundary_resolution).encode())
        return h.hexdigest()[:16]

    def contains_points(self, points) -> np.ndarray:
        pts = shapely.points(_to_xy(points))
        return shapely.contains(self.shapely, pts)

    def covers_points(self, points) -> np.ndarray:
        pts = shapely.points(_to_xy(points))
        return shapely.covers(self.shapely, pts)

    def distance_to_boundary(self, points) -> np.ndarray:
        """Unsigned distance from each point to the boundary curve."""
        pts = shapely.points(_to_xy(points))
        return shapely.distance(self._ring, pts)

    def distance_to_closure(self, points) -> np.ndarray:
        """Distance to the closed polygon; zero for interior points."""
        pts = shapely.points(_to_xy(points))
        return shapely.distance(self.shapely, pts)

    def boundary_samples(self, spacing: float | None = None) -> np.ndarray:
        """Boundary points including all vertices, spaced at most ``spacing``."""
        h = self.boundary_resolution if spacing is None else float(spacing)
        if h <= 0:
            raise GeometryError("sample spacing must be positive")
        verts = np.asarray(self.vertices, dtype=complex)
        nxt = np.roll(verts, -1)
        out = []
        for a, b in zip(verts, nxt):
            n = max(1, int(math.ceil(abs(b - a) / h)))
            t = np.arange(n) / n
            out.append(a + t * (b - a))
        return np.concatenate(out)

    def interior_anchor(self) -> complex:
        """A point well inside the polygon (representative point fallback)."""
        c = self.shapely.centroid
        if self.shapely.contains(c) and self._ring.distance(c) > 0.1 * self.boundary_resolution:
            return complex(c.x, c.y)
        rp = self.shapely.representative_point()
        return complex(rp.x, rp.y)

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    def as_dict(self) -> dict:
        return {
            "vertices": [[v.real, v.imag] for v in self.vertices],
            "boundary_resolution": self.boundary_resolution,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PlanarDomain":
        verts = [complex(x, y) for x, y in data["vertices"]]
        return cls(verts, data.get("boundary_resolution", DEFAULT_RESOLUTION))

    @classmethod
    def from_json(cls, text: str) -> "PlanarDomain":
        return cls.from_dict(json.loads(text))

    def with_resolution(self, resolution: float) -> "PlanarDomain":
        return PlanarDomain(self.vertices, resolution)


def _from_shapely(poly: Polygon, resolution: float, simplify: bool = True) -> PlanarDomain:
    """Build a PlanarDomain from a shapely polygon, filling interior rings."""
    shell = Polygon(poly.exterior)
    if simplify:
        tol = resolution / 20.0
        simplified = shell.simplify(tol, preserve_topology=True)
        if simplified.is_valid and simplified.area > 0:
            shell = simplified
    coords = list(shell.exterior.coords)[:-1]
    return PlanarDomain([complex(x, y) for x, y in coords], resolution)


# ---------------------------------------------------------------------------
# model domains (exact geometry in C^n)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelDomain:
    """Exact-geometry domain in C^n: disc, Euclidean ball or polydisc.

    ``radii`` is a single radius for disc/ball, per-axis radii for a
    polydisc.  An optional invertible affine map (A, b) sends the base
    domain to A u + b; membership tests pull back through it exactly.
    """

    kind: str
    center: tuple[complex, ...]
    radii: tuple[float, ...]
    affine: Optional[tuple[tuple[tuple[complex, ...], ...], tuple[complex, ...]]] = None

    def __init__(self, kind, center, radii, affine=None):
        if kind not in ("disc", "ball", "polydisc"):
            raise GeometryError(f"unknown model domain kind {kind!r}")
        center = tuple(complex(c) for c in np.atleast_1d(np.asarray(center, dtype=complex)))
        radii = tuple(float(r) for r in np.atleast_1d(np.asarray(radii, dtype=float)))
        if any(r <= 0 for r in radii):
            raise GeometryError("radii must be strictly positive")
        n = len(center)
        if kind == "disc" and n != 1:
            raise GeometryError("disc lives in C^1")
        if kind in ("disc", "ball") and len(radii) != 1:
            raise GeometryError(f"{kind} takes a single radius")
        if kind == "polydisc" and len(radii) != n:
            raise GeometryError("polydisc needs one radius per axis")
        if affine is not None:
            A = np.asarray(affine[0], dtype=complex)
            b = np.atleast_1d(np.asarray(affine[1], dtype=complex))
            if A.shape != (n, n) or b.shape != (n,):
                raise GeometryError("affine map has wrong shape")
            if abs(np.linalg.det(A)) < 1e-14:
                raise GeometryError("affine map must be invertible")
            affine = (tuple(tuple(row) for row in A), tuple(b))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "affine", affine)

    @property
    def dim(self) -> int:
        return len(self.center)

    @cached_property
    def _affine_arrays(self):
        if self.affine is None:
            return None
        A = np.asarray(self.affine[0], dtype=complex)
        b = np.asarray(self.affine[1], dtype=complex)
        return A, np.linalg.inv(A), b

    def to_base(self, points) -> np.ndarray:
        """Pull points back to base coordinates (inverse affine)."""
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        if self.affine is None:
            return pts
        _, Ainv, b = self._affine_arrays
        return (pts - b) @ Ainv.T

    def from_base(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        if self.affine is None:
            return pts
        A, _, b = self._affine_arrays
        return pts @ A.T + b

    def base_margin(self, points) -> np.ndarray:
        """Distance to the boundary in base coordinates; negative outside."""
        u = self.to_base(points)
        c = np.asarray(self.center, dtype=complex)
        if self.kind in ("disc", "ball"):
            return self.radii[0] - np.linalg.norm(u - c, axis=1)
        d = np.abs(u - c)
        return np.min(np.asarray(self.radii) - d, axis=1)

    def contains_points(self, points) -> np.ndarray:
        return self.base_margin(points) > 0

    def scaled(self, delta: float) -> "ModelDomain":
        """Base-coordinate offset: radii +/- delta (exact for unmapped domains)."""
        if self.affine is not None:
            raise GeometryError("closed-form offsets need an unmapped model domain")
        radii = tuple(r + delta for r in self.radii)
        if any(r <= 0 for r in radii):
            raise GeometryError("offset would empty the model domain")
        return ModelDomain(self.kind, self.center, radii, None)

    def as_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "center": [[c.real, c.imag] for c in self.center],
            "radii": list(self.radii),
        }
        if self.affine is not None:
            A, b = self.affine
            d["affine"] = {
                "matrix": [[[a.real, a.imag] for a in row] for row in A],
                "offset": [[x.real, x.imag] for x in b],
            }
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ModelDomain":
        center = [complex(x, y) for x, y in data["center"]]
        affine = None
        if "affine" in data:
            A = [[complex(x, y) for x, y in row] for row in data["affine"]["matrix"]]
            b = [complex(x, y) for x, y in data["affine"]["offset"]]
            affine = (A, b)
        return cls(data["kind"], center, data["radii"], affine)


def _model_comparable(a: ModelDomain, b: ModelDomain) -> None:
    if a.kind != b.kind or a.dim != b.dim:
        raise GeometryError("model domains of different kind are not comparable in closed form")
    if a.center != b.center:
        raise GeometryError("closed-form comparison needs concentric model domains")
    if a.affine != b.affine:
        raise GeometryError("closed-form comparison needs identical affine maps")


def _model_map_norm(dom: ModelDomain) -> float:
    if dom.affine is None:
        return 1.0
    A = np.asarray(dom.affine[0], dtype=complex)
    return float(np.linalg.svd(A, compute_uv=False)[0])


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HausdorffResult:
    """Hausdorff distance between polygon closures, with witnessing pairs.

    ``witness_a_to_b`` realizes the directed sup over (densified) boundary
    samples of A of the distance to closure(B); symmetrically for
    ``witness_b_to_a``.  ``resolution_bound`` is the densification error
    bound: the true value lies within it of ``distance``.
    """

    distance: float
    directed_a_to_b: float
    directed_b_to_a: float
    witness_a_to_b: tuple[complex, complex]
    witness_b_to_a: tuple[complex, complex]
    resolution_bound: float

    def __float__(self) -> float:
        return self.distance


@dataclass(frozen=True)
class ErosionResult:
    """Outcome of an inward offset: the surviving component, if any.

    ``status`` is "ok" (single component), "empty", or "disconnected"
    (largest component kept in ``domain``, count reported).
    """

    domain: Optional[PlanarDomain]
    status: str
    component_count: int

    @property
    def is_empty(self) -> bool:
        return self.status == "empty"

    @property
    def is_connected(self) -> bool:
        return self.status == "ok"


class ContainmentResult(NamedTuple):
    holds: bool
    margin: float

    def __bool__(self) -> bool:  # noqa: D105
        return self.holds


# ---------------------------------------------------------------------------
# core operations
# ---------------------------------------------------------------------------


def _arc_quad_segs(eps: float, resolution: float) -> int:
    return max(8, int(math.ceil(0.5 * math.pi * eps / resolution)))


def envelope(domain: PlanarDomain | ModelDomain, eps: float):
    """Minkowski dilation by a disc of radius eps (polygonal approximation).

    Convex corners get circular arcs sampled at the boundary resolution.
    Any interior rings created by the dilation of a nonconvex polygon are
    filled, so the result may slightly overshoot the true envelope there;
    it always contains the true envelope.
    """
    if eps <= 0:
        raise GeometryError("envelope radius must be positive")
    if isinstance(domain, ModelDomain):
        return domain.scaled(+eps)
    res = domain.boundary_resolution
    grown = domain.shapely.buffer(eps, quad_segs=_arc_quad_segs(eps, res))
    if grown.geom_type != "Polygon":
        grown = max(grown.geoms, key=lambda g: g.area)
    return _from_shapely(grown, res)


def erode(domain: PlanarDomain | ModelDomain, eps: float) -> ErosionResult:
    """Inward offset {z in D : dist(z, boundary) > eps}.

    Disconnection and emptiness are reported, never silently truncated;
    when disconnected, the largest component is returned for inspection.
    """
    if eps <= 0:
        raise GeometryError("erosion radius must be positive")
    if isinstance(domain, ModelDomain):
        try:
            return ErosionResult(domain.scaled(-eps), "ok", 1)
        except GeometryError:
            return ErosionResult(None, "empty", 0)
    res = domain.boundary_resolution
    shrunk = domain.shapely.buffer(-eps, quad_segs=_arc_quad_segs(eps, res))
    if shrunk.is_empty:
        return ErosionResult(None, "empty", 0)
    if shrunk.geom_type == "Polygon":
        return ErosionResult(_from_shapely(shrunk, res), "ok", 1)
    parts = [g for g in shrunk.geoms if g.area > 0]
    if not parts:
        return ErosionResult(None, "empty", 0)
    largest = max(parts, key=lambda g: g.area)
    status = "ok" if len(parts) == 1 else "disconnected"
    return ErosionResult(_from_shapely(largest, res), status, len(parts))


def hausdorff(a, b) -> HausdorffResult:
    """Hausdorff distance between closures, via boundary densification.

    Each directed distance is the max over densified boundary samples of
    the source of the exact distance to the closed target polygon (zero
    inside).  For the Jordan domains this laboratory generates the suprema
    are attained on boundaries, so the sampled value is exact up to the
    reported resolution bound.
    """
    if isinstance(a, ModelDomain) or isinstance(b, ModelDomain):
        if not (isinstance(a, ModelDomain) and isinstance(b, ModelDomain)):
            raise GeometryError("cannot mix polygonal and model domains in hausdorff")
        _model_comparable(a, b)
        scale = _model_map_norm(a)
        if a.kind in ("disc", "ball"):
            d = abs(a.radii[0] - b.radii[0]) * scale
        else:
            d = max(abs(ra - rb) for ra, rb in zip(a.radii, b.radii)) * scale
        c = a.center[0] if a.dim == 1 else 0j
        return HausdorffResult(d, d, d, (c, c), (c, c), 0.0)

    def directed(src: PlanarDomain, dst: PlanarDomain):
        samples = src.boundary_samples()
        dists = dst.distance_to_closure(samples)
        i = int(np.argmax(dists))
        p = samples[i]
        q_pt = nearest_points(Point(p.real, p.imag), dst.shapely)[1]
        return float(dists[i]), (p, complex(q_pt.x, q_pt.y))

    d_ab, wit_ab = directed(a, b)
    d_ba, wit_ba = directed(b, a)
    bound = 0.5 * max(a.boundary_resolution, b.boundary_resolution)
    return HausdorffResult(max(d_ab, d_ba), d_ab, d_ba, wit_ab, wit_ba, bound)


def compactly_contained(a, b, margin_factor: float = CONTAINMENT_MARGIN_FACTOR) -> ContainmentResult:
    """closure(A) inside B with a margin beating ``margin_factor * resolution``.

    The margin is the infimum over densified boundary samples of A of the
    distance to the boundary of B; conservative by design so that strict
    containment survives discretization.
    """
    if isinstance(a, ModelDomain) or isinstance(b, ModelDomain):
        if not (isinstance(a, ModelDomain) and isinstance(b, ModelDomain)):
            raise GeometryError("cannot mix polygonal and model domains in containment")
        _model_comparable(a, b)
        if a.kind in ("disc", "ball"):
            margin = (b.radii[0] - a.radii[0]) * _model_map_norm(a)
        else:
            margin = min(rb - ra for ra, rb in zip(a.radii, b.radii)) * _model_map_norm(a)
        return ContainmentResult(margin > 0, float(margin))

    res = max(a.boundary_resolution, b.boundary_resolution)
    required = margin_factor * res
    samples = a.boundary_samples()
    inside = b.covers_points(samples)
    ring_dist = b.distance_to_boundary(samples)
    if not bool(np.all(inside)):
        worst = float(np.max(ring_dist[~inside]))
        return ContainmentResult(False, -worst)
    if not b.shapely.covers(a.shapely):
        return ContainmentResult(False, 0.0)
    margin = float(np.min(ring_dist))
    return ContainmentResult(margin > required, margin)


def contains_compact(domain, points, margin_factor: float = CONTAINMENT_MARGIN_FACTOR) -> bool:
    """Whether every point sits in the open domain with a conservative margin."""
    pts = _as_complex_array(points) if not isinstance(domain, ModelDomain) else points
    if isinstance(domain, ModelDomain):
        arr = np.atleast_2d(np.asarray(points, dtype=complex))
        return bool(np.all(domain.base_margin(arr) > 0))
    if len(pts) == 0:
        raise GeometryError("contains_compact needs a nonempty point set")
    required = margin_factor * domain.boundary_resolution
    inside = domain.contains_points(pts)
    if not bool(np.all(inside)):
        return False
    return bool(np.all(domain.distance_to_boundary(pts) > required))


def polygon_union(domains: Sequence[PlanarDomain], resolution: float | None = None) -> PlanarDomain:
    """Union of overlapping polygons as a single simple polygon (holes filled)."""
    if not domains:
        raise GeometryError("polygon_union needs at least one polygon")
    res = resolution if resolution is not None else min(d.boundary_resolution for d in domains)
    merged = unary_union([d.shapely for d in domains])
    if merged.geom_type != "Polygon":
        raise GeometryError("polygon union is disconnected; inputs must overlap")
    return _from_shapely(merged, res, simplify=False)


# ---------------------------------------------------------------------------
# interior routing (used by the conformal evaluator on nonconvex domains)
# ---------------------------------------------------------------------------


class PathPlanner:
    """Polyline paths inside a polygon with clearance from the boundary.

    Straight segments are used when possible; otherwise a visibility graph
    over the vertices of an eroded copy of the domain is searched.
    """

    def __init__(self, domain: PlanarDomain, clearance: float | None = None):
        self.domain = domain
        if clearance is None:
            clearance = min(2.0 * domain.boundary_resolution,
                            0.02 * math.sqrt(domain.area))
        self.clearance = clearance
        inner = erode(domain, clearance)
        if inner.domain is None:
            raise GeometryError("domain too thin for the requested path clearance")
        corridor = inner.domain.shapely
        if len(inner.domain.vertices) > 600:
            corridor = corridor.simplify(clearance / 4, preserve_topology=True)
        self._corridor = corridor
        self._prepared = shapely.prepared.prep(corridor)
        self._nodes = [complex(x, y) for x, y in corridor.exterior.coords[:-1]]

    def _visible(self, p: complex, q: complex) -> bool:
        seg = LineString([(p.real, p.imag), (q.real, q.imag)])
        return self._prepared.covers(seg)

    def path(self, a: complex, b: complex) -> list[complex]:
        if abs(a - b) < 1e-15:
            return [a]
        if self._visible(a, b):
            return [a, b]
        import networkx as nx

        nodes = [a, b] + self._nodes
        g = nx.Graph()
        for i, p in enumerate(nodes):
            g.add_node(i)
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if self._visible(nodes[i], nodes[j]):
                    g.add_edge(i, j, weight=abs(nodes[i] - nodes[j]))
        try:
            idx = nx.shortest_path(g, 0, 1, weight="weight")
        except nx.NetworkXNoPath as exc:
            raise GeometryError("no interior path found at the requested clearance") from exc
        return [nodes[i] for i in idx]


# ---------------------------------------------------------------------------
# convex subsets (used by the analytic-disc solver on nonconvex inputs)
# ---------------------------------------------------------------------------


def _reflex_indices(verts: np.ndarray) -> np.ndarray:
    e_in = verts - np.roll(verts, 1)
    e_out = np.roll(verts, -1) - verts
    cross = e_in.real * e_out.imag - e_in.imag * e_out.real
    scale = np.abs(e_in) * np.abs(e_out)
    return np.where(cross < -1e-12 * scale)[0]


def _halfplane_clip(poly: Polygon, anchor: complex, tangent: complex) -> Polygon | None:
    """Intersect with the half-plane on the inward side of the directed line."""
    t_hat = tangent / abs(tangent)
    n_in = 1j * t_hat
    span = 10.0 * math.sqrt(max(poly.area, 1e-12)) + 10.0
    a = anchor - span * t_hat
    b = anchor + span * t_hat
    c = b + span * n_in
    d = a + span * n_in
    clip = Polygon([(p.real, p.imag) for p in (a, b, c, d)])
    cut = poly.intersection(clip)
    if cut.is_empty:
        return None
    if cut.geom_type != "Polygon":
        parts = [g for g in cut.geoms if g.geom_type == "Polygon" and g.area > 0]
        if not parts:
            return None
        cut = max(parts, key=lambda g: g.area)
    return cut if cut.area > 1e-10 else None


def convex_subsets(domain: PlanarDomain, cap: int = 12) -> list[PlanarDomain]:
    """Maximal-ish convex subsets via recursive reflex-vertex cuts.

    Each reflex vertex is resolved by clipping along one of its two edge
    lines; both choices are explored (subsets may overlap, which is fine:
    any analytic disc feasible in a subset is feasible in the domain).
    A kernel-style piece (all reflex cuts applied at once) is always
    included as a fallback for many-reflex polygons.
    """
    if domain.is_convex:
        return [domain]
    res = domain.boundary_resolution
    out: list[PlanarDomain] = []
    seen: set[str] = set()

    def add(poly: Polygon) -> None:
        try:
            dom = _from_shapely(poly, res, simplify=False)
        except GeometryError:
            return
        if dom.digest not in seen:
            seen.add(dom.digest)
            out.append(dom)

    def kernel_piece(poly: Polygon, rounds: int = 6) -> None:
        cur = poly
        for _ in range(rounds):
            try:
                dom = _from_shapely(cur, res, simplify=False)
            except GeometryError:
                return
            verts = np.asarray(dom.vertices, dtype=complex)
            reflex = _reflex_indices(verts)
            if len(reflex) == 0:
                add(cur)
                return
            for r in reflex:
                prev_v = verts[(r - 1) % len(verts)]
                cur_v = verts[r]
                nxt_v = verts[(r + 1) % len(verts)]
                for anchor, tangent in ((prev_v, cur_v - prev_v), (cur_v, nxt_v - cur_v)):
                    clipped = _halfplane_clip(cur, anchor, tangent)
                    if clipped is None:
                        return
                    cur = clipped

    queue: list[Polygon] = [domain.shapely]
    budget = 4 * cap
    while queue and len(out) < cap and budget > 0:
        budget -= 1
        poly = queue.pop(0)
        try:
            dom = _from_shapely(poly, res, simplify=False)
        except GeometryError:
            continue
        verts = np.asarray(dom.vertices, dtype=complex)
        reflex = _reflex_indices(verts)
        if len(reflex) == 0:
            add(poly)
            continue
        if len(reflex) > 8:
            kernel_piece(poly)
            continue
        r = int(reflex[0])
        prev_v = verts[(r - 1) % len(verts)]
        cur_v = verts[r]
        nxt_v = verts[(r + 1) % len(verts)]
        for anchor, tangent in ((prev_v, cur_v - prev_v), (cur_v, nxt_v - cur_v)):
            clipped = _halfplane_clip(poly, anchor, tangent)
            if clipped is not None:
                queue.append(clipped)
    if not out:
        kernel_piece(domain.shapely)
    return out


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def disc_polygon(center: complex = 0j, radius: float = 1.0,
                 resolution: float = DEFAULT_RESOLUTION) -> PlanarDomain:
    """Regular polygon inscribed in the circle of given center and radius."""
    if radius <= 0:
        raise GeometryError("radius must be positive")
    n = max(32, int(math.ceil(2 * math.pi * radius / resolution)))
    theta = 2 * math.pi * np.arange(n) / n
    verts = center + radius * np.exp(1j * theta)
    return PlanarDomain(verts, resolution)


def rectangle_domain(corner_min: complex, corner_max: complex,
                     resolution: float = DEFAULT_RESOLUTION) -> PlanarDomain:
    a, b = complex(corner_min), complex(corner_max)
    if b.real <= a.real or b.imag <= a.imag:
        raise GeometryError("degenerate rectangle")
    verts = [a, complex(b.real, a.imag), b, complex(a.real, b.imag)]
    return PlanarDomain(verts, resolution)


def l_shape_domain(size: float = 2.0, leg: float = 1.0,
                   resolution: float = DEFAULT_RESOLUTION) -> PlanarDomain:
    """L-shaped polygon: the square [0, size]^2 minus its upper-right block."""
    if not 0 < leg < size:
        raise GeometryError("leg width must lie in (0, size)")
    s, t = size, leg
    verts = [0j, complex(s, 0), complex(s, t), complex(t, t), complex(t, s), complex(0, s)]
    return PlanarDomain(verts, resolution)


def random_star_polygon(rng: np.random.Generator, n_vertices: int = 96,
                        base_radius: float = 1.0, irregularity: float = 0.25,
                        center: complex = 0j,
                        resolution: float = DEFAULT_RESOLUTION) -> PlanarDomain:
    """Random star-shaped polygon r(theta) = R (1 + low-order Fourier noise).

    Star-shapedness keeps it simple (hence simply connected) for any
    irregularity below 1.
    """
    if not 0 <= irregularity < 0.9:
        raise GeometryError("irregularity must lie in [0, 0.9)")
    theta = 2 * math.pi * np.arange(n_vertices) / n_vertices
    r = np.ones(n_vertices)
    n_modes = 5
    amps = rng.uniform(-1.0, 1.0, size=n_modes)
    phases = rng.uniform(0, 2 * math.pi, size=n_modes)
    total = np.sum(np.abs(amps)) or 1.0
    amps = amps / total * irregularity
    for j, (aj, pj) in enumerate(zip(amps, phases), start=2):
        r += aj * np.cos(j * theta + pj)
    verts = center + base_radius * r * np.exp(1j * theta)
    return PlanarDomain(verts, resolution)
