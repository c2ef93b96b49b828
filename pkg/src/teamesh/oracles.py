"""Slow, obvious reference implementations for tests.

Nothing here calls the mesh, the expansion kernels, or the exact predicates
of the engine; the formulas are written out independently.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

ENUM_CAP_SIMPLE = 12
ENUM_CAP_HOLES = 10


def _loops(pm):
    return [np.asarray(pm.outer, float)] + [np.asarray(h, float) for h in pm.holes]


def _edges(pm):
    A, B = [], []
    for loop in _loops(pm):
        A.append(loop)
        B.append(np.roll(loop, -1, axis=0))
    return np.vstack(A), np.vstack(B)


def _det(ax, ay, bx, by, cx, cy):
    # exact sign with rationals; slow but unarguable
    v = ((Fraction(bx) - Fraction(ax)) * (Fraction(cy) - Fraction(ay))
         - (Fraction(by) - Fraction(ay)) * (Fraction(cx) - Fraction(ax)))
    return (v > 0) - (v < 0)


def point_in_map(pm, x, y) -> int:
    """1 strictly inside, 0 on the boundary, -1 outside (even-odd rule)."""
    A, B = _edges(pm)
    inside = False
    for (ax, ay), (bx, by) in zip(A.tolist(), B.tolist()):
        if _det(ax, ay, bx, by, x, y) == 0 and min(ax, bx) <= x <= max(ax, bx) \
                and min(ay, by) <= y <= max(ay, by):
            return 0
        if (ay > y) != (by > y):
            xc = ax + (y - ay) * (bx - ax) / (by - ay)
            if xc > x:
                inside = not inside
    return 1 if inside else -1


# ---------------------------------------------------------------- visibility


def oracle_visibility_sweep(pm, q, delta: float = 1e-9) -> np.ndarray:
    """Visibility polygon of ``q`` by brute-force ray casting.

    Two rays are cast just beside every map vertex (angles +-delta) and the
    nearest boundary hit of each is kept; the hits sorted by angle form the
    polygon.
    """
    qx, qy = float(q[0]), float(q[1])
    if point_in_map(pm, qx, qy) < 0:
        raise ValueError("query outside the map")
    A, B = _edges(pm)
    V = np.vstack(_loops(pm))
    base = np.arctan2(V[:, 1] - qy, V[:, 0] - qx)
    ang = np.sort(np.concatenate([base - delta, base + delta]))
    dx, dy = np.cos(ang), np.sin(ang)
    ex = B[:, 0] - A[:, 0]
    ey = B[:, 1] - A[:, 1]
    wx = A[:, 0] - qx
    wy = A[:, 1] - qy
    # q + t (dx, dy) = A + s (ex, ey)
    den = dx[:, None] * ey[None, :] - dy[:, None] * ex[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (wx[None, :] * ey[None, :] - wy[None, :] * ex[None, :]) / den
        s = (wx[None, :] * dy[:, None] - wy[None, :] * dx[:, None]) / den
    ok = (den != 0) & (s >= 0) & (s <= 1) & (t > 0)
    t = np.where(ok, t, np.inf)
    tmin = t.min(axis=1)
    return np.column_stack([qx + tmin * dx, qy + tmin * dy])


def polygon_area_plain(pts) -> float:
    x = np.asarray(pts, float)[:, 0]
    y = np.asarray(pts, float)[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _side(q, a, b):
    return (a[0] - q[0]) * (b[1] - q[1]) - (a[1] - q[1]) * (b[0] - q[0])


def _seg_dist(q, a, b):
    ax, ay = a[0] - q[0], a[1] - q[1]
    ex, ey = b[0] - a[0], b[1] - a[1]
    L2 = ex * ex + ey * ey
    t = 0.0 if L2 == 0 else min(1.0, max(0.0, -(ax * ex + ay * ey) / L2))
    return math.hypot(ax + t * ex, ay + t * ey)


def oracle_expansion_count(mesh, q, d=math.inf) -> int:
    """Number of view entries through interior edges, recounted by a plain
    recursive traversal of the mesh arrays (no shared kernels).

    Entries through edges lying wholly beyond ``d`` are not made.
    """
    P = mesh.vertices.tolist()
    TV = mesh.tri_verts.tolist()
    TN = mesh.tri_nbrs.tolist()
    q = (float(q[0]), float(q[1]))
    start = None
    for t, (a, b, c) in enumerate(TV):
        if _side(q, P[a], P[b]) > 0 and _side(q, P[b], P[c]) > 0 and _side(q, P[c], P[a]) > 0:
            start = t
            break
    if start is None:
        raise ValueError("query must lie strictly inside a triangle")
    count = 0
    stack = []

    def push(t, k, R, L):
        # edge k of triangle t, opposite vertex k, seen from inside t
        u, v = TV[t][(k + 1) % 3], TV[t][(k + 2) % 3]
        nb = TN[t][k]
        if nb < 0 or _seg_dist(q, P[u], P[v]) > d:
            return
        stack.append((nb, u, v, R, L))

    for k in range(3):
        u, v = TV[start][(k + 1) % 3], TV[start][(k + 2) % 3]
        push(start, k, P[u], P[v])
    while stack:
        t, u, v, R, L = stack.pop()
        count += 1
        w = [x for x in TV[t] if x != u and x != v][0]
        W = P[w]
        k_uw = TV[t].index(v)  # edge (u, w) is opposite v
        k_wv = TV[t].index(u)
        if _side(q, R, W) > 0:
            push(t, k_uw, R, W if _side(q, W, L) > 0 else L)
        if _side(q, W, L) > 0:
            push(t, k_wv, W if _side(q, R, W) > 0 else R, L)
    return count


# ---------------------------------------------------------------- segments


def _proper_cross(a, b, c, d):
    d1 = _det(*a, *b, *c)
    d2 = _det(*a, *b, *d)
    d3 = _det(*c, *d, *a)
    d4 = _det(*c, *d, *b)
    return d1 * d2 < 0 and d3 * d4 < 0


def _on_open(p, a, b):
    if _det(*a, *b, *p) != 0 or tuple(p) == tuple(a) or tuple(p) == tuple(b):
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def oracle_segment_in_polygon(pm, seg) -> bool:
    """Closed segment inside the closed map; touching the boundary is fine,
    crossing it is not."""
    a, b = (tuple(map(float, p)) for p in seg)
    A, B = _edges(pm)
    cuts = [0.0, 1.0]
    L2 = (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2
    for c, d in zip(map(tuple, A.tolist()), map(tuple, B.tolist())):
        if _proper_cross(a, b, c, d):
            return False
        for p in (c, d):
            if _on_open(p, a, b):
                cuts.append(((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / L2)
    if point_in_map(pm, *a) < 0 or point_in_map(pm, *b) < 0:
        return False
    cuts.sort()
    for s0, s1 in zip(cuts, cuts[1:]):
        if s1 - s0 <= 0:
            continue
        s = 0.5 * (s0 + s1)
        if point_in_map(pm, a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])) < 0:
            return False
    return True


def oracle_is_diagonal(pm, i: int, j: int) -> bool:
    """Open segment between map vertices i and j lies in the open interior."""
    V = np.vstack(_loops(pm))
    a, b = tuple(V[i]), tuple(V[j])
    if a == b:
        return False
    A, B = _edges(pm)
    for c, d in zip(map(tuple, A.tolist()), map(tuple, B.tolist())):
        if _proper_cross(a, b, c, d):
            return False
        if _on_open(c, a, b) or _on_open(d, a, b):
            return False
    for p in V.tolist():
        if _on_open(tuple(p), a, b):
            return False
    mid = (0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]))
    return point_in_map(pm, *mid) == 1


# ---------------------------------------------------------------- enumeration


def oracle_enumerate_triangulations(pm):
    """Every triangulation of a small map as a frozenset of diagonals (i < j)."""
    n = pm.n
    h = len(pm.holes)
    if (h == 0 and n > ENUM_CAP_SIMPLE) or (h > 0 and (n > ENUM_CAP_HOLES or h > 1)):
        raise ValueError("map too large for exhaustive enumeration")
    boundary = set()
    s = 0
    for loop in _loops(pm):
        k = len(loop)
        for t in range(k):
            u, v = s + t, s + (t + 1) % k
            boundary.add((min(u, v), max(u, v)))
        s += k
    diag = [(i, j) for i, j in combinations(range(n), 2)
            if (i, j) not in boundary and oracle_is_diagonal(pm, i, j)]
    V = np.vstack(_loops(pm))
    if h == 0:
        return [frozenset(t) for t in _simple(list(range(n)), set(diag))]
    target = n + 3 * h - 3
    cross = {}
    for x, y in combinations(range(len(diag)), 2):
        (a, b), (c, d) = diag[x], diag[y]
        cross[x, y] = _proper_cross(tuple(V[a]), tuple(V[b]), tuple(V[c]), tuple(V[d]))
    out = []

    def rec(k, chosen):
        if len(chosen) == target:
            out.append(frozenset(diag[c] for c in chosen))
            return
        if len(chosen) + (len(diag) - k) < target:
            return
        if all(not cross[c, k] for c in chosen):
            rec(k + 1, chosen + [k])
        rec(k + 1, chosen)

    rec(0, [])
    return out


def _simple(ids, diag):
    """Triangulations of the simple polygon ``ids`` (consecutive ccw)."""
    if len(ids) < 3:
        return [[]]
    if len(ids) == 3:
        return [[]]

    def ok(u, v):
        return abs(ids.index(u) - ids.index(v)) in (1, len(ids) - 1) or (min(u, v), max(u, v)) in diag

    a, b = ids[0], ids[-1]
    res = []
    for k in range(1, len(ids) - 1):
        c = ids[k]
        if not (ok(a, c) and ok(c, b)):
            continue
        left = ids[: k + 1]
        right = ids[k:]
        for L in _simple(left, diag):
            for R in _simple(right, diag):
                extra = []
                if k != 1:
                    extra.append((min(a, c), max(a, c)))
                if k != len(ids) - 2:
                    extra.append((min(c, b), max(c, b)))
                res.append(L + R + extra)
    return res


def triangles_of(diagonals, pm) -> list[tuple[int, int, int]]:
    """Triangles spanned by boundary edges plus ``diagonals`` (ccw triples)."""
    V = np.vstack(_loops(pm))
    edges = set(diagonals)
    s = 0
    for loop in _loops(pm):
        k = len(loop)
        for t in range(k):
            u, v = s + t, s + (t + 1) % k
            edges.add((min(u, v), max(u, v)))
        s += k
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    tris = []
    for u, v in edges:
        for w in adj[u] & adj[v]:
            if w <= max(u, v):
                continue
            a, b, c = u, v, w
            if _det(*V[a], *V[b], *V[c]) < 0:
                b, c = c, b
            # a 3-cycle is a face iff nothing of the map lies inside it
            cx = (V[a][0] + V[b][0] + V[c][0]) / 3.0
            cy = (V[a][1] + V[b][1] + V[c][1]) / 3.0
            if point_in_map(pm, cx, cy) != 1:
                continue
            if any(_det(*V[a], *V[b], *V[z]) > 0 and _det(*V[b], *V[c], *V[z]) > 0
                   and _det(*V[c], *V[a], *V[z]) > 0 for z in range(len(V))):
                continue
            tris.append((a, b, c))
    return tris


def triangulation_count_catalan(n: int) -> int:
    return math.comb(2 * (n - 2), n - 2) // (n - 1)


def oracle_locate_linear(mesh, Q, chunk: int = 512) -> np.ndarray:
    """Lowest id of a closed triangle containing each point, or -1.

    Every triangle is scanned. Float orientations only shortlist candidates
    (with a generous tolerance); membership is decided by exact rationals.
    """
    P = np.asarray(mesh.vertices, float)
    TV = np.asarray(mesh.tri_verts)
    A, B, C = P[TV[:, 0]], P[TV[:, 1]], P[TV[:, 2]]
    Q = np.asarray(Q, float).reshape(-1, 2)
    scale = float(np.abs(P).max()) + 1.0
    tol = 1e-9 * scale * scale
    out = np.full(len(Q), -1, np.int64)

    def side(U, V, X):
        return ((V[None, :, 0] - U[None, :, 0]) * (X[:, None, 1] - U[None, :, 1])
                - (V[None, :, 1] - U[None, :, 1]) * (X[:, None, 0] - U[None, :, 0]))

    for s in range(0, len(Q), chunk):
        X = Q[s:s + chunk]
        cand = (side(A, B, X) >= -tol) & (side(B, C, X) >= -tol) & (side(C, A, X) >= -tol)
        for i, row in enumerate(cand):
            x, y = X[i]
            for t in np.nonzero(row)[0]:
                a, b, c = A[t], B[t], C[t]
                if (_det(*a, *b, x, y) >= 0 and _det(*b, *c, x, y) >= 0
                        and _det(*c, *a, x, y) >= 0):
                    out[s + i] = t
                    break
    return out
