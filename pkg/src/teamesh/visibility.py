"""Visibility queries on a triangular mesh by triangular expansion.

A query runs in up to four timed phases: point location, expansion (which
yields an abstract region whose intersection vertices are still symbolic),
intersection computation, and, for a limited range ``d``, clipping to the
disc of radius ``d``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from time import perf_counter_ns
from typing import Optional

import numpy as np
import shapely
from shapely.geometry import LineString, Polygon

from . import _tea
from ._predicates import orient
from .trimesh import BucketGrid, TriMesh, build_buckets

INF = math.inf

FREE, OBSTACLE, RANGE, ARC = _tea.FREE, _tea.OBSTACLE, _tea.RANGE, _tea.ARC
MAP_VERTEX, EDGE_INTERSECTION, ARC_POINT = _tea.MAP_VERTEX, _tea.EDGE_INTERSECTION, _tea.ARC_POINT

VERTEX_KIND_NAMES = {MAP_VERTEX: "map_vertex", EDGE_INTERSECTION: "edge_intersection",
                     ARC_POINT: "arc_point"}
EDGE_KIND_NAMES = {FREE: "free", OBSTACLE: "obstacle", RANGE: "range", ARC: "arc"}

_NO_MARK = np.empty(0, np.int8)


class OutsideMapError(ValueError):
    pass


@dataclass
class QueryStats:
    """Expansion count and phase durations of one query, in microseconds."""

    eta: int = 0
    t_locate: float = 0.0
    t_tea: float = 0.0
    t_intersect: float = 0.0
    t_clip: float = 0.0

    @property
    def total(self) -> float:
        return self.t_locate + self.t_tea + self.t_intersect + self.t_clip


@dataclass(frozen=True, eq=False)
class AbstractRegion:
    """Region combinatorics before any intersection point is computed.

    Vertex ``i`` is a map vertex (``vertex_ref[i]`` = vertex id) or the hit of
    the ray from the query through map vertex ``vertex_ray[i]`` with edge
    ``vertex_ref[i]``. ``edge_kind[i]`` describes the edge from vertex i to
    vertex i+1.
    """

    mesh: TriMesh
    query: tuple
    d: float
    triangle: int
    vertex_kind: np.ndarray
    vertex_ref: np.ndarray
    vertex_ray: np.ndarray
    edge_kind: np.ndarray
    edge_ref: np.ndarray

    def __len__(self):
        return len(self.vertex_kind)


@dataclass(frozen=True, eq=False)
class VisibilityRegion:
    query: tuple
    d: float
    xy: np.ndarray
    vertex_kind: np.ndarray
    vertex_ref: np.ndarray
    vertex_ray: np.ndarray
    edge_kind: np.ndarray
    edge_ref: np.ndarray

    def __len__(self):
        return len(self.xy)

    @property
    def limited(self) -> bool:
        return self.d < INF

    @property
    def area(self) -> float:
        r = self.d if self.limited else 1.0
        return float(_tea.region_area(self.xy, self.edge_kind, self.query[0], self.query[1], r))

    def arcs(self) -> list[tuple[int, float, float]]:
        """(edge index, start angle, end angle) of each arc edge."""
        out = []
        m = len(self.xy)
        qx, qy = self.query
        for i in np.nonzero(self.edge_kind == ARC)[0]:
            j = (i + 1) % m
            a0 = math.atan2(self.xy[i, 1] - qy, self.xy[i, 0] - qx)
            a1 = math.atan2(self.xy[j, 1] - qy, self.xy[j, 0] - qx)
            out.append((int(i), a0, a0 + float(_tea.arc_sweep(a0, a1, m))))
        return out

    def polygon(self, quad_segs: int = 64) -> Polygon:
        """Shapely polygon; arcs are polygonized with ``quad_segs`` per quarter."""
        pts = []
        qx, qy = self.query
        arcs = {i: (a0, a1) for i, a0, a1 in self.arcs()}
        for i in range(len(self.xy)):
            pts.append(tuple(self.xy[i]))
            if i in arcs:
                a0, a1 = arcs[i]
                k = max(1, int(math.ceil((a1 - a0) / (0.5 * math.pi) * quad_segs)))
                for s in range(1, k):
                    a = a0 + (a1 - a0) * s / k
                    pts.append((qx + self.d * math.cos(a), qy + self.d * math.sin(a)))
        if len(pts) < 3:
            return Polygon()
        return shapely.make_valid(Polygon(pts)) if not Polygon(pts).is_valid else Polygon(pts)

    def without_antennas(self) -> "VisibilityRegion":
        """Drop zero-width spikes and repeated vertices (area is unchanged)."""
        keep = _collapse_spikes(self.xy)
        if len(keep) == len(self.xy):
            return self
        return VisibilityRegion(self.query, self.d, self.xy[keep], self.vertex_kind[keep],
                                self.vertex_ref[keep], self.vertex_ray[keep],
                                self.edge_kind[keep], self.edge_ref[keep])

    def vertex_visibility(self, mesh: TriMesh, grid: BucketGrid, pull: float = 1e-9) -> np.ndarray:
        """Check every vertex with ``is_visible`` from the query.

        A constructed vertex on a ray through map vertex r is checked as the
        two legs q-r and r-p (p pulled by a relative ``pull`` towards r), since
        its rounded coordinates may sit a hair off the exact ray. Other
        constructed vertices are pulled towards q.
        """
        q = np.asarray(self.query, float)
        P = mesh.vertices
        out = np.zeros(len(self.xy), bool)
        for i, p in enumerate(self.xy):
            k = self.vertex_kind[i]
            if k == MAP_VERTEX:
                out[i] = is_visible(mesh, grid, q, p, self.d * (1 + 1e-12))
                continue
            r = self.vertex_ray[i]
            if r >= 0 and not (P[r] == p).all():
                pr = p + (P[r] - p) * pull
                out[i] = is_visible(mesh, grid, q, P[r]) and is_visible(mesh, grid, P[r], pr)
            else:
                out[i] = is_visible(mesh, grid, q, p + (q - p) * pull)
        return out

    def to_dict(self) -> dict:
        return {
            "query": list(self.query),
            "d": None if not self.limited else self.d,
            "vertices": [
                {"x": float(x), "y": float(y), "kind": VERTEX_KIND_NAMES[int(k)],
                 "ref": int(r), "ray": int(w)}
                for (x, y), k, r, w in zip(self.xy, self.vertex_kind, self.vertex_ref,
                                           self.vertex_ray)
            ],
            "edges": [{"kind": EDGE_KIND_NAMES[int(k)], "ref": int(r)}
                      for k, r in zip(self.edge_kind, self.edge_ref)],
            "arcs": [{"edge": i, "center": list(self.query), "radius": self.d,
                      "start_angle": a0, "end_angle": a1} for i, a0, a1 in self.arcs()],
            "area": self.area,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _collapse_spikes(xy: np.ndarray) -> list[int]:
    idx = list(range(len(xy)))
    s = 0
    stable = 0
    # walk the loop, dropping one repeated vertex or spike tip at a time,
    # until a full lap finds nothing to remove
    while len(idx) > 3 and stable < len(idx):
        m = len(idx)
        s %= m
        p = xy[idx[s - 1]]
        c = xy[idx[s]]
        n = xy[idx[(s + 1) % m]]
        drop = (c == p).all() or (
            orient(p[0], p[1], c[0], c[1], n[0], n[1]) == 0
            and (c[0] - p[0]) * (n[0] - c[0]) + (c[1] - p[1]) * (n[1] - c[1]) <= 0)
        if drop:
            del idx[s]
            s = max(s - 1, 0)
            stable = 0
        else:
            s += 1
            stable += 1
    return idx


# ---------------------------------------------------------------- queries


def _check_d(d):
    d = INF if d is None else float(d)
    if not d > 0:
        raise ValueError("range d must be positive")
    return d


def locate(mesh: TriMesh, grid: BucketGrid, q) -> int:
    t = _tea.locate(float(q[0]), float(q[1]), mesh.vertices, mesh.tri_verts, grid.origin[0],
                    grid.origin[1], grid.cell, grid.nx, grid.ny, grid.cell_start, grid.cell_items)
    if t < 0:
        raise OutsideMapError(f"query point {tuple(q)} is outside the map")
    return int(t)


def visibility_region(mesh: TriMesh, grid: BucketGrid, q, d=INF):
    """Expand from the triangle containing ``q``; returns (AbstractRegion, QueryStats)."""
    d = _check_d(d)
    qx, qy = float(q[0]), float(q[1])
    t0 = perf_counter_ns()
    tri = _tea.locate(qx, qy, mesh.vertices, mesh.tri_verts, grid.origin[0], grid.origin[1],
                      grid.cell, grid.nx, grid.ny, grid.cell_start, grid.cell_items)
    t1 = perf_counter_ns()
    if tri < 0:
        raise OutsideMapError(f"query point {(qx, qy)} is outside the map")
    pieces, npc, eta, start = _tea.expand(qx, qy, tri, d, mesh.vertices, mesh.tri_verts,
                                          mesh.tri_nbrs, mesh.tri_edges, _NO_MARK)
    vk, vr1, vr2, ek, er = _tea.assemble(pieces, npc, start, mesh.edge_verts)
    t2 = perf_counter_ns()
    ray = np.where(vk == EDGE_INTERSECTION, vr2, -1)
    reg = AbstractRegion(mesh, (qx, qy), d, int(tri), vk, vr1, ray, ek, er)
    return reg, QueryStats(int(eta), (t1 - t0) / 1e3, (t2 - t1) / 1e3)


def finalize_region(abstract: AbstractRegion, stats: Optional[QueryStats] = None) -> VisibilityRegion:
    """Compute the coordinates of every intersection vertex."""
    qx, qy = abstract.query
    t0 = perf_counter_ns()
    xy = _tea.resolve(abstract.vertex_kind, abstract.vertex_ref, abstract.vertex_ray, qx, qy,
                      abstract.mesh.vertices, abstract.mesh.edge_verts)
    t1 = perf_counter_ns()
    if stats is not None:
        stats.t_intersect = (t1 - t0) / 1e3
    return VisibilityRegion(abstract.query, abstract.d, xy, abstract.vertex_kind,
                            abstract.vertex_ref, abstract.vertex_ray, abstract.edge_kind,
                            abstract.edge_ref)


def clip_to_circle(region: VisibilityRegion, q, d, stats: Optional[QueryStats] = None
                   ) -> VisibilityRegion:
    """Intersect a region, star-shaped about ``q``, with the disc of radius ``d``."""
    d = float(d)
    if not d > 0 or d == INF:
        raise ValueError("clip radius must be positive and finite")
    qx, qy = float(q[0]), float(q[1])
    t0 = perf_counter_ns()
    xy, vk, vr1, vr2, ek, er = _tea.clip_circle(region.xy, region.vertex_kind, region.vertex_ref,
                                                region.vertex_ray, region.edge_kind,
                                                region.edge_ref, qx, qy, d)
    t1 = perf_counter_ns()
    if stats is not None:
        stats.t_clip = (t1 - t0) / 1e3
    return VisibilityRegion((qx, qy), d, xy, vk, vr1, vr2, ek, er)


def query(mesh: TriMesh, grid: BucketGrid, q, d=INF):
    """Full query: expansion, intersections and (finite d) clipping."""
    ab, st = visibility_region(mesh, grid, q, d)
    reg = finalize_region(ab, st)
    if ab.d < INF:
        reg = clip_to_circle(reg, ab.query, ab.d, st)
    return reg, st


def is_visible(mesh: TriMesh, grid: BucketGrid, q, p, d=INF) -> bool:
    """Whether segment qp lies in the map (touching its boundary is fine)
    and, for finite ``d``, is no longer than ``d``."""
    d = _check_d(d)
    tq = locate(mesh, grid, q)
    locate(mesh, grid, p)
    qx, qy, px, py = float(q[0]), float(q[1]), float(p[0]), float(p[1])
    if d < INF and math.hypot(px - qx, py - qy) > d:
        return False
    return bool(_tea.walk_visible(qx, qy, px, py, tq, mesh.vertices, mesh.tri_verts,
                                  mesh.tri_nbrs, mesh.vert_tri))


def visible_vertices(mesh: TriMesh, grid: BucketGrid, q, d=INF) -> set[int]:
    d = _check_d(d)
    qx, qy = float(q[0]), float(q[1])
    tri = locate(mesh, grid, q)
    mark = np.zeros(len(mesh.vertices), np.int8)
    _tea.expand(qx, qy, tri, d, mesh.vertices, mesh.tri_verts, mesh.tri_nbrs, mesh.tri_edges,
                mark)
    ids = np.nonzero(mark)[0]
    if d < INF:
        dist = np.hypot(mesh.vertices[ids, 0] - qx, mesh.vertices[ids, 1] - qy)
        ids = ids[dist <= d]
    return set(ids.tolist())


# ---------------------------------------------------------------- segments


def segment_samples(a, b, d_samp: float) -> np.ndarray:
    """Equidistant samples inside segment ab with spacing at most ``d_samp``;
    a segment no longer than ``d_samp`` gets its midpoint only."""
    if not d_samp > 0:
        raise ValueError("d_samp must be positive")
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    L = float(np.hypot(*(b - a)))
    k = max(1, math.ceil(L / d_samp))
    s = (np.arange(k) + 0.5) / k
    pts = a + s[:, None] * (b - a)
    if k == 1:
        pts[0] = 0.5 * (a + b)
    return pts


@dataclass(frozen=True, eq=False)
class SegmentRegion:
    geometry: object
    area: float
    samples: np.ndarray
    regions: list = field(default_factory=list)


def stadium(a, b, d: float, quad_segs: int = 256):
    return LineString([tuple(a), tuple(b)]).buffer(d, quad_segs=quad_segs)


def _region_polygon(reg: VisibilityRegion) -> Polygon:
    r = reg.without_antennas()
    if len(r.xy) < 3:
        return Polygon()
    poly = Polygon(r.xy)
    if not poly.is_valid:
        poly = shapely.make_valid(poly)
    return poly


def segment_visibility_region(mesh: TriMesh, grid: BucketGrid, e, d_samp: float, d=INF,
                              keep_regions: bool = False) -> SegmentRegion:
    """Region seen from segment ``e`` estimated as the union of the regions
    seen from equidistant samples; with finite ``d`` it is cut to the
    stadium of radius ``d`` around ``e``."""
    d = _check_d(d)
    a, b = (np.asarray(p, float) for p in e)
    if (a == b).all():
        raise ValueError("degenerate segment")
    pts = segment_samples(a, b, d_samp)
    if not segment_in_map(mesh, grid, a, b):
        raise OutsideMapError("segment is not contained in the map")
    regs = []
    for p in pts:
        ab, _ = visibility_region(mesh, grid, p, d)
        regs.append(finalize_region(ab))
    if len(regs) == 1 and d == INF:
        reg = regs[0]
        return SegmentRegion(_region_polygon(reg), reg.area, pts, regs if keep_regions else [])
    union = shapely.union_all([_region_polygon(r) for r in regs])
    if d < INF:
        union = union.intersection(stadium(a, b, d))
    return SegmentRegion(union, float(union.area), pts, regs if keep_regions else [])


def segment_in_map(mesh: TriMesh, grid: BucketGrid, a, b) -> bool:
    try:
        return is_visible(mesh, grid, a, b)
    except OutsideMapError:
        return False


class Engine:
    """A mesh together with its bucket grid."""

    def __init__(self, mesh: TriMesh, grid: Optional[BucketGrid] = None):
        self.mesh = mesh
        self.grid = grid if grid is not None else build_buckets(mesh)

    def query(self, q, d=INF):
        return query(self.mesh, self.grid, q, d)

    def is_visible(self, q, p, d=INF):
        return is_visible(self.mesh, self.grid, q, p, d)

    def visible_vertices(self, q, d=INF):
        return visible_vertices(self.mesh, self.grid, q, d)

    def segment_region(self, e, d_samp, d=INF):
        return segment_visibility_region(self.mesh, self.grid, e, d_samp, d)
