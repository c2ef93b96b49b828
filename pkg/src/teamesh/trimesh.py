"""Triangular meshes over a polygon map, and bucket-grid point location."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import _tea
from ._predicates import orient
from .geom import polygon_area
from .mapio import PolygonMap

OUTSIDE = -1


class MeshError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Triangles with ccw vertex ids; neighbour/edge ``i`` is opposite vertex ``i``.

    Edges are numbered in lexicographic order of their (low, high) vertex ids.
    """

    vertices: np.ndarray
    tri_verts: np.ndarray
    tri_nbrs: np.ndarray
    tri_edges: np.ndarray
    edge_verts: np.ndarray
    edge_tris: np.ndarray
    edge_boundary: np.ndarray

    @classmethod
    def from_arrays(cls, vertices, tri_verts) -> "TriMesh":
        P = np.ascontiguousarray(vertices, dtype=np.float64)
        TV = np.ascontiguousarray(tri_verts, dtype=np.int64).reshape(-1, 3)
        nt = len(TV)
        if nt == 0:
            raise MeshError("mesh has no triangles")
        if TV.min() < 0 or TV.max() >= len(P):
            raise MeshError("vertex id out of range")
        # half-edge k of triangle t is (TV[t,k+1], TV[t,k+2]), opposite vertex k
        a = TV[:, [1, 2, 0]].ravel()
        b = TV[:, [2, 0, 1]].ravel()
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        key = lo * len(P) + hi
        directed = a * len(P) + b
        if len(np.unique(directed)) != len(directed):
            raise MeshError("a directed edge is used twice (overlap or orientation error)")
        uniq, inv, counts = np.unique(key, return_inverse=True, return_counts=True)
        if counts.max() > 2:
            raise MeshError("an edge has more than two incident triangles")
        ne = len(uniq)
        EV = np.column_stack([uniq // len(P), uniq % len(P)]).astype(np.int64)
        TE = inv.reshape(nt, 3).astype(np.int64)
        ET = np.full((ne, 2), -1, np.int64)
        tri_of = np.repeat(np.arange(nt), 3)
        order = np.argsort(inv, kind="stable")
        sorted_inv = inv[order]
        first = np.ones(len(order), bool)
        first[1:] = sorted_inv[1:] != sorted_inv[:-1]
        ET[sorted_inv[first], 0] = tri_of[order[first]]
        ET[sorted_inv[~first], 1] = tri_of[order[~first]]
        TN = np.full((nt, 3), -1, np.int64)
        e = TE.ravel()
        other = np.where(ET[e, 0] == tri_of, ET[e, 1], ET[e, 0])
        TN = other.reshape(nt, 3)
        boundary = ET[:, 1] < 0
        return cls(P, TV, np.ascontiguousarray(TN), np.ascontiguousarray(TE), EV, ET, boundary)

    @property
    def n_triangles(self) -> int:
        return len(self.tri_verts)

    @property
    def n_interior_edges(self) -> int:
        return int((~self.edge_boundary).sum())

    @cached_property
    def interior_edges(self) -> np.ndarray:
        return self.edge_verts[~self.edge_boundary]

    @cached_property
    def vert_tri(self) -> np.ndarray:
        vt = np.full(len(self.vertices), -1, np.int64)
        vt[self.tri_verts.ravel()] = np.repeat(np.arange(self.n_triangles), 3)
        return vt

    def triangle_areas(self) -> np.ndarray:
        P = self.vertices
        a, b, c = (P[self.tri_verts[:, k]] for k in range(3))
        return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                      - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))

    def canonical_triangles(self) -> list[tuple[int, int, int]]:
        """Triangles rotated to start at their lowest id, sorted."""
        out = []
        for t in self.tri_verts.tolist():
            k = t.index(min(t))
            out.append(tuple(t[k:] + t[:k]))
        return sorted(out)

    def same_as(self, other: "TriMesh") -> bool:
        return (np.array_equal(self.vertices, other.vertices)
                and np.array_equal(self.tri_verts, other.tri_verts)
                and np.array_equal(self.tri_nbrs, other.tri_nbrs))

    def arrays(self):
        return self.vertices, self.tri_verts, self.tri_nbrs, self.tri_edges


def _canonical_order(tris: Sequence[Sequence[int]]) -> np.ndarray:
    rows = []
    for t in tris:
        t = [int(v) for v in t]
        k = t.index(min(t))
        rows.append(t[k:] + t[:k])
    rows.sort()
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


def mesh_from_triangles(pm: PolygonMap, tris, canonical: bool = True) -> TriMesh:
    """Assemble and check a mesh of ``pm`` from vertex-id triples.

    With ``canonical`` the triangles are renumbered in a fixed order so equal
    triangulations give identical meshes.
    """
    TV = _canonical_order(tris) if canonical else np.asarray(tris, dtype=np.int64).reshape(-1, 3)
    mesh = TriMesh.from_arrays(pm.vertices, TV)
    report = validate_mesh(mesh, pm)
    if not report.ok:
        raise MeshError("; ".join(report.problems[:5]))
    return mesh


@dataclass
class MeshReport:
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self):
        return self.ok


def validate_mesh(mesh: TriMesh, pm: PolygonMap) -> MeshReport:
    rep = MeshReport()
    bad = rep.problems
    P = mesh.vertices
    if len(P) != pm.n or not np.array_equal(P, pm.vertices):
        bad.append("mesh vertices differ from map vertices")
        return rep
    TV, TN, TE = mesh.tri_verts, mesh.tri_nbrs, mesh.tri_edges
    for t in range(len(TV)):
        a, b, c = TV[t]
        if orient(P[a, 0], P[a, 1], P[b, 0], P[b, 1], P[c, 0], P[c, 1]) <= 0:
            bad.append(f"triangle {t} is not ccw")
    for t in range(len(TV)):
        for k in range(3):
            u = TN[t, k]
            e = TE[t, k]
            ev = sorted((TV[t, (k + 1) % 3], TV[t, (k + 2) % 3]))
            if list(mesh.edge_verts[e]) != ev:
                bad.append(f"triangle {t} edge {k} cross-reference broken")
            if u < 0:
                if not mesh.edge_boundary[e]:
                    bad.append(f"edge {e} flagged interior but has one triangle")
                continue
            back = np.nonzero(TN[u] == t)[0]
            if len(back) != 1 or TE[u, back[0]] != e:
                bad.append(f"neighbour relation {t}<->{u} is not symmetric")
    mesh_bnd = {tuple(ev) for ev in mesh.edge_verts[mesh.edge_boundary].tolist()}
    if mesh_bnd != set(pm.boundary_edge_set):
        missing = len(set(pm.boundary_edge_set) - mesh_bnd)
        extra = len(mesh_bnd - set(pm.boundary_edge_set))
        bad.append(f"boundary mismatch: {missing} map edges missing, {extra} extra (coverage)")
    nt_expected = pm.n + 2 * pm.h - 2
    ni_expected = pm.n + 3 * pm.h - 3
    if mesh.n_triangles != nt_expected:
        bad.append(f"triangle count {mesh.n_triangles} != n+2h-2 = {nt_expected}")
    if mesh.n_interior_edges != ni_expected:
        bad.append(f"interior edge count {mesh.n_interior_edges} != n+3h-3 = {ni_expected}")
    total = math.fsum(mesh.triangle_areas().tolist())
    if abs(total - pm.area) > 1e-9 * abs(pm.area):
        bad.append(f"triangle area sum {total} != map area {pm.area}")
    return rep


# ------------------------------------------------------------------ buckets


@dataclass(frozen=True, eq=False)
class BucketGrid:
    """Uniform grid over the map bounding box; each cell lists the ids of the
    triangles meeting it (closed sets), in ascending order."""

    origin: tuple
    cell: float
    nx: int
    ny: int
    cell_start: np.ndarray
    cell_items: np.ndarray

    def cell_triangles(self, i: int, j: int) -> np.ndarray:
        c = j * self.nx + i
        return self.cell_items[self.cell_start[c]:self.cell_start[c + 1]]


def default_cell_size(mesh: TriMesh) -> float:
    x0, y0 = mesh.vertices.min(axis=0)
    x1, y1 = mesh.vertices.max(axis=0)
    return float(max(x1 - x0, y1 - y0)) / math.ceil(math.sqrt(2 * mesh.n_triangles))


def build_buckets(mesh: TriMesh, cell_size: Optional[float] = None) -> BucketGrid:
    cell = default_cell_size(mesh) if cell_size is None else float(cell_size)
    if not cell > 0:
        raise ValueError("cell size must be positive")
    x0, y0 = mesh.vertices.min(axis=0)
    x1, y1 = mesh.vertices.max(axis=0)
    nx = max(1, math.ceil((x1 - x0) / cell))
    ny = max(1, math.ceil((y1 - y0) / cell))
    start, items = _tea.build_bucket_lists(mesh.vertices, mesh.tri_verts, float(x0), float(y0),
                                           cell, nx, ny)
    return BucketGrid((float(x0), float(y0)), cell, nx, ny, start, items)


def locate_triangle(grid: BucketGrid, mesh: TriMesh, q) -> int:
    """Lowest-id triangle containing ``q`` (boundary inclusive), or ``OUTSIDE``."""
    return int(_tea.locate(float(q[0]), float(q[1]), mesh.vertices, mesh.tri_verts,
                           grid.origin[0], grid.origin[1], grid.cell, grid.nx, grid.ny,
                           grid.cell_start, grid.cell_items))


def build_cdt(pm: PolygonMap) -> TriMesh:
    from .cdt import constrained_delaunay

    return mesh_from_triangles(pm, constrained_delaunay(pm))
