"""Edge weights and minimum-weight triangulation of polygons with holes.

Weights live in a dense symmetric matrix indexed by map vertex ids:
0 on boundary edges, ``inf`` for pairs that are not diagonals of the map,
and a scheme-dependent finite value for every diagonal.
"""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numba import njit

from ._predicates import orient
from .mapio import PolygonMap
from .trimesh import BucketGrid, TriMesh, build_buckets, build_cdt, mesh_from_triangles
from .visibility import INF, segment_visibility_region

FORBIDDEN, BOUNDARY, INTERIOR = 0, 1, 2
CLASS_NAMES = {FORBIDDEN: "forbidden", BOUNDARY: "boundary", INTERIOR: "interior"}
SCHEMES = ("minlt", "minvt", "dminvt", "maxlt", "maxvt")
PENALTY = 1000.0


# ---------------------------------------------------------------- diagonals


@njit(cache=True)
def _in_cone(P, prv, i, nxt, j):
    # is the direction i->j strictly inside the interior angle at i, which
    # runs ccw from i->nxt round to i->prv?
    turn = orient(P[prv, 0], P[prv, 1], P[i, 0], P[i, 1], P[nxt, 0], P[nxt, 1])
    a = orient(P[i, 0], P[i, 1], P[nxt, 0], P[nxt, 1], P[j, 0], P[j, 1])
    b = orient(P[i, 0], P[i, 1], P[prv, 0], P[prv, 1], P[j, 0], P[j, 1])
    if turn > 0:
        return a > 0 and b < 0
    if turn == 0:
        return a > 0
    return not (a <= 0 and b >= 0)


@njit(cache=True)
def _blocked(P, i, j, E, ebox):
    """Does any loop edge properly cross ij, or any vertex touch its interior?"""
    ax = P[i, 0]
    ay = P[i, 1]
    bx = P[j, 0]
    by = P[j, 1]
    x0 = min(ax, bx)
    x1 = max(ax, bx)
    y0 = min(ay, by)
    y1 = max(ay, by)
    for k in range(E.shape[0]):
        if ebox[k, 0] > x1 or ebox[k, 2] < x0 or ebox[k, 1] > y1 or ebox[k, 3] < y0:
            continue
        c = E[k, 0]
        d = E[k, 1]
        oc = 0 if c == i or c == j else orient(ax, ay, bx, by, P[c, 0], P[c, 1])
        od = 0 if d == i or d == j else orient(ax, ay, bx, by, P[d, 0], P[d, 1])
        if c != i and c != j and oc == 0:
            # c on the line; inside the open segment?
            if x0 <= P[c, 0] <= x1 and y0 <= P[c, 1] <= y1:
                return True
        if oc * od < 0:
            if c == i or c == j or d == i or d == j:
                continue
            o1 = orient(P[c, 0], P[c, 1], P[d, 0], P[d, 1], ax, ay)
            o2 = orient(P[c, 0], P[c, 1], P[d, 0], P[d, 1], bx, by)
            if o1 * o2 < 0:
                return True
    return False


@njit(cache=True)
def _inside_loops(P, E, x, y):
    # crossing-number parity over all loop edges
    inside = False
    for k in range(E.shape[0]):
        ax = P[E[k, 0], 0]
        ay = P[E[k, 0], 1]
        bx = P[E[k, 1], 0]
        by = P[E[k, 1], 1]
        if (ay > y) != (by > y):
            if ax + (y - ay) * (bx - ax) / (by - ay) > x:
                inside = not inside
    return inside


@njit(cache=True)
def _classify(P, E, prv, nxt, ids, allowed):
    """Class matrix over ``ids`` (subset of vertices of the loops in E).

    ``allowed[a, b]`` (local indices) can veto pairs up front.
    """
    k = ids.shape[0]
    ebox = np.empty((E.shape[0], 4))
    for e in range(E.shape[0]):
        ebox[e, 0] = min(P[E[e, 0], 0], P[E[e, 1], 0])
        ebox[e, 1] = min(P[E[e, 0], 1], P[E[e, 1], 1])
        ebox[e, 2] = max(P[E[e, 0], 0], P[E[e, 1], 0])
        ebox[e, 3] = max(P[E[e, 0], 1], P[E[e, 1], 1])
    C = np.zeros((k, k), np.int8)
    for a in range(k):
        i = ids[a]
        for b in range(a + 1, k):
            j = ids[b]
            if nxt[i] == j or nxt[j] == i:
                C[a, b] = BOUNDARY
                C[b, a] = BOUNDARY
                continue
            if not allowed[a, b]:
                continue
            if not _in_cone(P, prv[i], i, nxt[i], j):
                continue
            if not _in_cone(P, prv[j], j, nxt[j], i):
                continue
            if _blocked(P, i, j, E, ebox):
                continue
            if not _inside_loops(P, E, 0.5 * (P[i, 0] + P[j, 0]), 0.5 * (P[i, 1] + P[j, 1])):
                continue
            C[a, b] = INTERIOR
            C[b, a] = INTERIOR
    return C


def _loop_links(pm: PolygonMap):
    n = pm.n
    prv = np.empty(n, np.int64)
    nxt = np.empty(n, np.int64)
    for ids in pm.loops:
        nxt[ids] = np.roll(ids, -1)
        prv[ids] = np.roll(ids, 1)
    return prv, nxt


def classify_pairs(pm: PolygonMap) -> np.ndarray:
    """n x n matrix of FORBIDDEN / BOUNDARY / INTERIOR for every vertex pair.

    A pair is INTERIOR iff the open segment lies in the open interior of the
    map; a segment grazing a vertex is FORBIDDEN, as it can never be a mesh
    edge.
    """
    prv, nxt = _loop_links(pm)
    ids = np.arange(pm.n, dtype=np.int64)
    allowed = np.ones((pm.n, pm.n), np.bool_)
    return _classify(pm.vertices, pm.boundary_edges.astype(np.int64), prv, nxt, ids, allowed)


def candidate_edges(pm: PolygonMap) -> list[tuple[int, int, str]]:
    C = classify_pairs(pm)
    out = []
    for i in range(pm.n):
        for j in range(i + 1, pm.n):
            out.append((i, j, CLASS_NAMES[int(C[i, j])]))
    return out


# ---------------------------------------------------------------- weights


@dataclass(eq=False)
class WeightMatrix:
    W: np.ndarray
    classes: np.ndarray
    scheme: str
    d_samp: Optional[float] = None
    d: float = INF
    r_pen: float = 0.0
    penalized: frozenset = frozenset()

    def __getitem__(self, ij) -> float:
        return float(self.W[ij])

    @property
    def n(self) -> int:
        return len(self.W)

    def interior_pairs(self) -> np.ndarray:
        i, j = np.nonzero(np.triu(self.classes == INTERIOR, 1))
        return np.column_stack([i, j])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "class", "weight"])
        for i in range(self.n):
            for j in range(i + 1, self.n):
                c = int(self.classes[i, j])
                if c == FORBIDDEN:
                    continue
                w.writerow([i, j, CLASS_NAMES[c], repr(float(self.W[i, j]))])
        return buf.getvalue()

    def negated(self) -> "WeightMatrix":
        W = np.where(np.isfinite(self.W), -self.W, self.W)
        W[self.classes == BOUNDARY] = 0.0
        for i, j in self.penalized:
            W[i, j] = W[j, i] = self.W[i, j]
        return WeightMatrix(W, self.classes, "max" + self.scheme[3:], self.d_samp, self.d,
                            self.r_pen, self.penalized)


def read_weights_csv(text: str, n: int, scheme: str = "custom") -> WeightMatrix:
    W = np.full((n, n), np.inf)
    C = np.zeros((n, n), np.int8)
    names = {v: k for k, v in CLASS_NAMES.items()}
    for row in csv.DictReader(io.StringIO(text)):
        i, j = int(row["i"]), int(row["j"])
        W[i, j] = W[j, i] = float(row["weight"])
        C[i, j] = C[j, i] = names[row["class"]]
    np.fill_diagonal(W, 0.0)
    return WeightMatrix(W, C, scheme)


def penalized_pairs(pm: PolygonMap, classes: np.ndarray, r_pen: float) -> list[tuple[int, int]]:
    """The ceil(r_pen %) longest interior pairs, ties broken by lower (i, j)."""
    if not 0 <= r_pen <= 100:
        raise ValueError("r_pen must be a percentage in [0, 100]")
    i, j = np.nonzero(np.triu(classes == INTERIOR, 1))
    if r_pen == 0 or len(i) == 0:
        return []
    P = pm.vertices
    L = np.hypot(*(P[i] - P[j]).T)
    order = np.lexsort((j, i, -L))
    k = math.ceil(r_pen / 100.0 * len(i))
    return [(int(i[o]), int(j[o])) for o in order[:k]]


def compute_weights(pm: PolygonMap, mesh: Optional[TriMesh] = None,
                    grid: Optional[BucketGrid] = None, scheme: str = "minvt",
                    d_samp: float = 4.0, d: float = INF, r_pen: float = 0.0,
                    classes: Optional[np.ndarray] = None,
                    progress: Optional[Callable[[int, int], None]] = None) -> WeightMatrix:
    """Weights of every vertex pair for one of the schemes

    * ``minlt`` / ``maxlt``: edge length / its negation,
    * ``minvt`` / ``maxvt``: area seen from the edge / its negation,
    * ``dminvt``: area seen from the edge within range ``d``.

    With ``r_pen`` > 0 the longest interior pairs get ``1000 + length`` instead.
    """
    scheme = scheme.lower()
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    if scheme == "dminvt" and not d < INF:
        raise ValueError("dminvt needs a finite range d")
    if scheme in ("minvt", "maxvt") and d < INF:
        raise ValueError(f"{scheme} uses unlimited range; use dminvt for finite d")
    visual = scheme.endswith("vt")
    if visual:
        if not d_samp > 0:
            raise ValueError("d_samp must be positive")
        if mesh is None:
            mesh = build_cdt(pm)
        if grid is None:
            grid = build_buckets(mesh)
    C = classify_pairs(pm) if classes is None else classes
    n = pm.n
    P = pm.vertices
    W = np.full((n, n), np.inf)
    W[C == BOUNDARY] = 0.0
    np.fill_diagonal(W, 0.0)
    pen = penalized_pairs(pm, C, r_pen)
    pen_set = frozenset(pen)
    pairs = [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(C == INTERIOR, 1)))]
    for k, (i, j) in enumerate(pairs):
        L = math.hypot(P[j, 0] - P[i, 0], P[j, 1] - P[i, 1])
        if (i, j) in pen_set:
            w = PENALTY + L
        elif not visual:
            w = L
        else:
            w = segment_visibility_region(mesh, grid, (P[i], P[j]), d_samp, d).area
        if scheme.startswith("max") and (i, j) not in pen_set:
            w = -w
        W[i, j] = W[j, i] = w
        if progress is not None:
            progress(k + 1, len(pairs))
    return WeightMatrix(W, C, scheme, d_samp if visual else None, d, r_pen, pen_set)


def mesh_total_weight(mesh: TriMesh, w) -> float:
    """Sum of the weights of the interior edges of ``mesh``."""
    W = w.W if isinstance(w, WeightMatrix) else np.asarray(w)
    ev = mesh.edge_verts[~mesh.edge_boundary]
    vals = W[ev[:, 0], ev[:, 1]]
    if not np.isfinite(vals).all():
        bad = ev[~np.isfinite(vals)][0]
        raise KeyError(f"no finite weight for mesh edge {tuple(bad)}")
    return math.fsum(vals.tolist())


# ---------------------------------------------------------------- simple polygon


@njit(cache=True)
def _mwt_dp(w):
    k = w.shape[0]
    nu = np.full((k, k), np.inf)
    kap = np.full((k, k), -1, np.int64)
    for i in range(k - 1):
        nu[i, i + 1] = 0.0
    for gap in range(2, k):
        for i in range(k - gap):
            j = i + gap
            if not np.isfinite(w[i, j]):
                continue
            best = np.inf
            arg = -1
            for m in range(i + 1, j):
                if not (np.isfinite(w[i, m]) and np.isfinite(w[m, j])):
                    continue
                c = nu[i, m] + nu[m, j] + 0.5 * (w[i, m] + w[m, j] + w[i, j])
                if c < best:
                    best = c
                    arg = m
            nu[i, j] = best
            kap[i, j] = arg
    return nu, kap


class NotTriangulableError(ValueError):
    pass


def mwt_simple(w) -> tuple[list[tuple[int, int, int]], float]:
    """Minimum-weight triangulation of a simple polygon with vertices 0..k-1
    in ccw order, given pair weights ``w`` (``inf`` = not a diagonal).

    Returns the triangles (local ids, ccw) and the optimal sum over
    triangles of half their three edge weights.
    """
    w = np.ascontiguousarray(w, dtype=np.float64)
    k = len(w)
    if k < 3:
        raise ValueError("polygon needs at least 3 vertices")
    nu, kap = _mwt_dp(w)
    if not np.isfinite(nu[0, k - 1]):
        raise NotTriangulableError("no triangulation with finite weights")
    tris = []
    stack = [(0, k - 1)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        m = int(kap[i, j])
        tris.append((i, m, j))
        stack.append((i, m))
        stack.append((m, j))
    return tris, float(nu[0, k - 1])


# ---------------------------------------------------------------- holes


@dataclass(frozen=True)
class MwtConfig:
    n_P: Optional[int] = 450
    it_max: int = 200
    t_max: float = 6.0
    seed: int = 13

    def __post_init__(self):
        if self.n_P is not None and self.n_P < 3:
            raise ValueError("n_P must be at least 3")
        if self.it_max < 0:
            raise ValueError("it_max must be non-negative")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")


@dataclass
class IterationLog:
    seed: int
    rows: list = field(default_factory=list)  # (iter, elapsed_s, total_weight, polygon_size)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "elapsed_s", "total_weight", "polygon_size"])
        for it, el, tw, ps in self.rows:
            w.writerow([it, f"{el:.6f}", repr(tw), ps])
        return buf.getvalue()

    @property
    def weights(self) -> list[float]:
        return [r[2] for r in self.rows]


class _Soup:
    def __init__(self, tv):
        self.tv = {t: tuple(int(v) for v in row) for t, row in enumerate(tv)}
        self.he = {}
        for t, (a, b, c) in self.tv.items():
            self.he[(a, b)] = self.he[(b, c)] = self.he[(c, a)] = t
        self.next_id = len(self.tv)

    def remove(self, t):
        a, b, c = self.tv.pop(t)
        for e in ((a, b), (b, c), (c, a)):
            del self.he[e]

    def add(self, a, b, c):
        t = self.next_id
        self.next_id += 1
        self.tv[t] = (a, b, c)
        self.he[(a, b)] = self.he[(b, c)] = self.he[(c, a)] = t
        return t


class _Bag:
    """Set with O(1) uniform sampling and removal."""

    def __init__(self):
        self.items = []
        self.pos = {}

    def add(self, x):
        if x not in self.pos:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def discard(self, x):
        p = self.pos.pop(x, None)
        if p is None:
            return
        last = self.items.pop()
        if p < len(self.items):
            self.items[p] = last
            self.pos[last] = p

    def __len__(self):
        return len(self.items)


def _grow(soup: _Soup, seed_tri, n_P, rng):
    """Grow a simple polygon of triangles from ``seed_tri``; returns the
    triangle ids and the ccw boundary loop."""
    a, b, c = soup.tv[seed_tri]
    nxt = {a: b, b: c, c: a}
    verts = {a, b, c}
    tris = [seed_tri]
    cand = _Bag()
    by_vertex = {}
    third = {}

    def offer(u, v):
        # triangle on the far side of the directed boundary edge u->v
        t = soup.he.get((v, u))
        if t is None:
            return
        w = [x for x in soup.tv[t] if x != u and x != v][0]
        if w in verts:
            return
        cand.add(t)
        third[t] = (u, v, w)
        by_vertex.setdefault(w, []).append(t)

    for u, v in ((a, b), (b, c), (c, a)):
        offer(u, v)
    while len(cand) and (n_P is None or len(verts) <= n_P):
        t = cand.items[int(rng.integers(len(cand)))]
        u, v, w = third[t]
        cand.discard(t)
        for s in by_vertex.pop(w, []):
            cand.discard(s)
        verts.add(w)
        tris.append(t)
        nxt[u] = w
        nxt[w] = v
        offer(u, w)
        offer(w, v)
    loop = [a]
    while nxt[loop[-1]] != a:
        loop.append(nxt[loop[-1]])
    return tris, loop


def _polygon_weights(P, loop, W, classes):
    """Weights of ``W`` reindexed to the polygon ``loop``; pairs that are
    not diagonals of the polygon get ``inf``."""
    ids = np.asarray(loop, np.int64)
    k = len(ids)
    sub = W[np.ix_(ids, ids)].copy()
    allowed = np.isfinite(sub) & (classes[np.ix_(ids, ids)] == INTERIOR)
    E = np.column_stack([ids, np.roll(ids, -1)])
    prv = np.full(len(P), -1, np.int64)
    nxt = np.full(len(P), -1, np.int64)
    nxt[ids] = np.roll(ids, -1)
    prv[ids] = np.roll(ids, 1)
    C = _classify(P, E, prv, nxt, ids, allowed)
    out = np.where(C == INTERIOR, sub, np.inf)
    for a in range(k):
        b = (a + 1) % k
        out[a, b] = out[b, a] = sub[a, b]
    return out


def mwt_holes(pm: PolygonMap, w: WeightMatrix, cfg: MwtConfig = MwtConfig(),
              start: Optional[TriMesh] = None) -> tuple[TriMesh, IterationLog]:
    """Improve a triangulation by repeatedly re-triangulating random simple
    sub-polygons optimally; the total interior weight never increases."""
    t0 = time.perf_counter()
    mesh = build_cdt(pm) if start is None else start
    W = w.W
    P = pm.vertices
    soup = _Soup(mesh.tri_verts)
    rng = np.random.default_rng(cfg.seed)
    log = IterationLog(cfg.seed)

    def total():
        vals = [W[u, v] for (u, v) in soup.he if u < v and (v, u) in soup.he]
        return math.fsum(vals)

    log.rows.append((0, time.perf_counter() - t0, total(), 0))
    it = 0
    while it < cfg.it_max and time.perf_counter() - t0 < cfg.t_max:
        it += 1
        ids = sorted(soup.tv)
        seed_tri = ids[int(rng.integers(len(ids)))]
        tris, loop = _grow(soup, seed_tri, cfg.n_P, rng)
        size = len(loop)
        if size > 3:
            sub = _polygon_weights(P, loop, W, w.classes)
            try:
                local, _ = mwt_simple(sub)
            except NotTriangulableError:
                local = None
            if local is not None:
                members = set(tris)
                pos = {v: a for a, v in enumerate(loop)}
                old = [W[u, v] for t in tris for (u, v) in _edges(soup.tv[t])
                       if u < v and soup.he.get((v, u)) in members]
                new_tris = [(loop[a], loop[b], loop[c]) for a, b, c in local]
                new = [W[x, y] for tr in new_tris for (x, y) in _edges(tr)
                       if x < y and (pos[x] - pos[y]) % size not in (1, size - 1)]
                # strict improvement only, so the logged total never rises
                if math.fsum(new) < math.fsum(old):
                    for t in tris:
                        soup.remove(t)
                    for tr in new_tris:
                        soup.add(*tr)
        log.rows.append((it, time.perf_counter() - t0, total(), size))
    out = mesh_from_triangles(pm, list(soup.tv.values()))
    return out, log


def _edges(tri):
    a, b, c = tri
    return ((a, b), (b, c), (c, a))
