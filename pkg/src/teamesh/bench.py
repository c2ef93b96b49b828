"""Seeded uniform query sets, expansion-count metrics and mesh comparisons."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from numba import njit

from . import _tea
from .mapio import PolygonMap
from .trimesh import BucketGrid, TriMesh, build_buckets
from .visibility import INF, clip_to_circle, finalize_region, segment_visibility_region, \
    visibility_region

WARMUP = 1000


@dataclass(frozen=True, eq=False)
class QuerySet:
    seed: int
    points: np.ndarray

    @property
    def m(self) -> int:
        return len(self.points)


def sample_uniform(pm: PolygonMap, mesh: TriMesh, m: int, seed: int) -> QuerySet:
    """``m`` points uniformly distributed over the map: a triangle drawn with
    probability proportional to its area, then a uniform point inside it."""
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(seed)
    areas = mesh.triangle_areas()
    cum = np.cumsum(areas)
    u = rng.random(m) * cum[-1]
    t = np.minimum(np.searchsorted(cum, u, side="right"), len(areas) - 1)
    r1 = np.sqrt(rng.random(m))
    r2 = rng.random(m)
    P = mesh.vertices
    a = P[mesh.tri_verts[t, 0]]
    b = P[mesh.tri_verts[t, 1]]
    c = P[mesh.tri_verts[t, 2]]
    pts = ((1 - r1)[:, None] * a + (r1 * (1 - r2))[:, None] * b + (r1 * r2)[:, None] * c)
    return QuerySet(int(seed), np.ascontiguousarray(pts))


@njit(cache=True)
def _eta_batch(Q, d, P, TV, TN, TE, gx, gy, cell, nx, ny, cs, ci):
    out = np.empty(Q.shape[0], np.int64)
    none = np.empty(0, np.int8)
    for i in range(Q.shape[0]):
        t = _tea.locate(Q[i, 0], Q[i, 1], P, TV, gx, gy, cell, nx, ny, cs, ci)
        if t < 0:
            out[i] = -1
            continue
        _, _, eta, _ = _tea.expand(Q[i, 0], Q[i, 1], t, d, P, TV, TN, TE, none)
        out[i] = eta
    return out


def query_etas(mesh: TriMesh, grid: BucketGrid, queries: QuerySet, d=INF) -> np.ndarray:
    """Per-query expansion counts (no timing)."""
    e = _eta_batch(queries.points, float(d), mesh.vertices, mesh.tri_verts, mesh.tri_nbrs,
                   mesh.tri_edges, grid.origin[0], grid.origin[1], grid.cell, grid.nx, grid.ny,
                   grid.cell_start, grid.cell_items)
    if (e < 0).any():
        raise ValueError("query set contains points outside the mesh")
    return e


@dataclass
class EtaEstimate:
    eta_T: float
    eta: np.ndarray
    t_locate: np.ndarray = None
    t_tea: np.ndarray = None
    t_intersect: np.ndarray = None
    t_clip: np.ndarray = None

    @property
    def t_q(self) -> np.ndarray:
        return self.t_locate + self.t_tea + self.t_intersect + self.t_clip

    def means(self) -> dict:
        if self.t_locate is None:
            return {}
        return {"t_q": float(self.t_q.mean()), "t_locate": float(self.t_locate.mean()),
                "t_tea": float(self.t_tea.mean()), "t_intersect": float(self.t_intersect.mean()),
                "t_clip": float(self.t_clip.mean())}

    def correlation(self) -> float:
        """Pearson correlation between per-query expansions and query time
        (nan when either is constant)."""
        e = self.eta.astype(float)
        t = self.t_q
        if e.std() == 0 or t.std() == 0:
            return float("nan")
        return float(np.corrcoef(e, t)[0, 1])


def estimate_eta_T(mesh: TriMesh, grid: BucketGrid, queries: QuerySet, d=INF,
                   timing: bool = True, warmup: int = WARMUP) -> EtaEstimate:
    """Mean expansion count over the query set, with per-phase timings (µs)."""
    d = float(d)
    if not timing:
        eta = query_etas(mesh, grid, queries, d)
        return EtaEstimate(float(eta.mean()), eta)
    Q = queries.points
    for q in Q[:min(warmup, len(Q))]:
        ab, st = visibility_region(mesh, grid, q, d)
        reg = finalize_region(ab, st)
        if d < INF:
            clip_to_circle(reg, q, d, st)
    m = len(Q)
    eta = np.empty(m, np.int64)
    tl = np.empty(m)
    tt = np.empty(m)
    tx = np.empty(m)
    tc = np.zeros(m)
    for i in range(m):
        q = Q[i]
        ab, st = visibility_region(mesh, grid, q, d)
        reg = finalize_region(ab, st)
        if d < INF:
            clip_to_circle(reg, q, d, st)
        eta[i] = st.eta
        tl[i] = st.t_locate
        tt[i] = st.t_tea
        tx[i] = st.t_intersect
        tc[i] = st.t_clip
    return EtaEstimate(float(eta.mean()), eta, tl, tt, tx, tc)


def edge_visibility_areas(mesh: TriMesh, grid: BucketGrid, d_samp: float, d=INF) -> np.ndarray:
    """Area seen from every interior edge of ``mesh`` (in edge-id order)."""
    P = mesh.vertices
    ids = np.nonzero(~mesh.edge_boundary)[0]
    out = np.empty(len(ids))
    for k, e in enumerate(ids):
        a, b = mesh.edge_verts[e]
        out[k] = segment_visibility_region(mesh, grid, (P[a], P[b]), d_samp, d).area
    return out


def estimate_eta_T_h(pm: PolygonMap, mesh: TriMesh, grid: BucketGrid, d_samp: float,
                     d=INF) -> float:
    """Expected number of distinct expanded edges for a uniform query:
    the sum of the areas seen from the interior edges over the map area."""
    areas = edge_visibility_areas(mesh, grid, d_samp, d)
    return math.fsum(areas.tolist()) / pm.area


def percentage_gap(val: float, ref: float) -> float:
    if ref == 0:
        raise ZeroDivisionError("reference value is zero")
    return 100.0 * (val - ref) / ref


# ---------------------------------------------------------------- reports


@dataclass
class BenchRow:
    map: str
    label: str
    d: float
    seed: int
    m: int
    eta_T: float
    t_q: float
    t_locate: float
    t_tea: float
    t_intersect: float
    t_clip: float
    t_c: float
    gap_eta: float = 0.0
    gap_t: float = 0.0
    corr: float = float("nan")


CSV_COLUMNS = ["map", "label", "d", "seed", "eta_T", "t_q", "t_c", "gap_eta", "gap_t"]


def _gap_str(g: float) -> str:
    r = int(round(g))
    return "0" if r == 0 else f"{r:+d}"


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.map, r.label, "inf" if r.d == INF else f"{r.d:g}", r.seed,
                        f"{r.eta_T:.1f}", f"{r.t_q:.2f}", f"{r.t_c:.2f}",
                        _gap_str(r.gap_eta), _gap_str(r.gap_t)])
        return buf.getvalue()

    def to_json(self, **kw) -> str:
        rows = []
        for r in self.rows:
            row = asdict(r)
            row["d"] = None if r.d == INF else r.d
            rows.append(row)
        return json.dumps({"meta": self.meta, "rows": rows}, **kw)

    def row(self, label: str, d=INF) -> BenchRow:
        for r in self.rows:
            if r.label == label and r.d == d:
                return r
        raise KeyError((label, d))


def run_benchmark(pm: PolygonMap, meshes: Sequence, m: int = 100_000, seed: int = 13,
                  d_list: Sequence = (INF,), timing: bool = True,
                  warmup: int = WARMUP) -> BenchReport:
    """Compare meshes of one map on a shared query set.

    ``meshes`` holds ``(label, mesh)`` or ``(label, mesh, construction_s)``;
    the first one is the reference for the percentage gaps.
    """
    if not meshes:
        raise ValueError("no meshes given")
    items = []
    for it in meshes:
        label, mesh = it[0], it[1]
        t_c = float(it[2]) if len(it) > 2 else 0.0
        if len(mesh.vertices) != pm.n or not np.array_equal(mesh.vertices, pm.vertices):
            raise ValueError(f"mesh {label!r} does not belong to map {pm.name!r}")
        items.append((label, mesh, t_c))
    qs = sample_uniform(pm, items[0][1], m, seed)
    rep = BenchReport(meta={"map": pm.name, "seed": seed, "m": m, "warmup": warmup,
                            "d": [None if d == INF else float(d) for d in d_list]})
    for d in d_list:
        d = float(d)
        first = None
        for label, mesh, t_c in items:
            grid = build_buckets(mesh)
            est = estimate_eta_T(mesh, grid, qs, d, timing=timing, warmup=warmup)
            mm = est.means()
            row = BenchRow(pm.name, label, d, seed, m, est.eta_T, mm.get("t_q", 0.0),
                           mm.get("t_locate", 0.0), mm.get("t_tea", 0.0),
                           mm.get("t_intersect", 0.0), mm.get("t_clip", 0.0), t_c,
                           corr=est.correlation() if timing else float("nan"))
            if first is None:
                first = row
            row.gap_eta = percentage_gap(row.eta_T, first.eta_T) if first.eta_T else 0.0
            if timing and first.t_q:
                row.gap_t = percentage_gap(row.t_q, first.t_q)
            rep.rows.append(row)
    return rep
