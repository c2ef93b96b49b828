"""Constrained Delaunay triangulation of a polygon with holes.

Incremental Delaunay insertion inside a large enclosing triangle, recovery
of every boundary segment by edge flips, removal of the outside and hole
triangles by a depth flood fill, and a final flip pass that restores the
Delaunay criterion on all unconstrained edges.
"""
from __future__ import annotations

from collections import deque

import numpy as np

from ._predicates import orient as _orient
from .geom import incircle
from .mapio import PolygonMap


class DegenerateMapError(ValueError):
    """The map cannot be triangulated with its own vertices."""


class _Tri:
    """Triangle soup kept consistent through a directed half-edge table."""

    def __init__(self, pts):
        self.p = pts
        self.tv: dict[int, tuple[int, int, int]] = {}
        self.he: dict[tuple[int, int], int] = {}
        self.vt: dict[int, int] = {}
        self.next_id = 0

    def orient(self, a, b, c):
        p = self.p
        return _orient(p[a][0], p[a][1], p[b][0], p[b][1], p[c][0], p[c][1])

    def incircle(self, a, b, c, d):
        p = self.p
        return incircle(p[a], p[b], p[c], p[d])

    def add(self, a, b, c, t=None):
        if t is None:
            t = self.next_id
            self.next_id += 1
        self.tv[t] = (a, b, c)
        self.he[(a, b)] = t
        self.he[(b, c)] = t
        self.he[(c, a)] = t
        self.vt[a] = self.vt[b] = self.vt[c] = t
        return t

    def remove(self, t):
        a, b, c = self.tv.pop(t)
        for e in ((a, b), (b, c), (c, a)):
            if self.he.get(e) == t:
                del self.he[e]

    def third(self, t, u, v):
        for w in self.tv[t]:
            if w != u and w != v:
                return w
        raise AssertionError("degenerate triangle")

    def flip(self, u, v):
        """Replace the diagonal uv of its quad by the other diagonal."""
        t1 = self.he[(u, v)]
        t2 = self.he[(v, u)]
        x = self.third(t1, u, v)
        y = self.third(t2, u, v)
        self.remove(t1)
        self.remove(t2)
        self.add(u, y, x, t1)
        self.add(y, v, x, t2)
        return x, y

    def quad(self, u, v):
        t1 = self.he.get((u, v))
        t2 = self.he.get((v, u))
        if t1 is None or t2 is None:
            return None
        return self.third(t1, u, v), self.third(t2, u, v)

    # -- insertion -------------------------------------------------------

    def locate(self, q, start):
        t = start
        steps = 0
        limit = 4 * len(self.tv) + 16
        while True:
            a, b, c = self.tv[t]
            moved = False
            for u, v in ((a, b), (b, c), (c, a)):
                if self.orient(u, v, q) < 0:
                    t = self.he[(v, u)]
                    moved = True
                    break
            if not moved:
                return t
            steps += 1
            if steps > limit:
                raise DegenerateMapError("point location did not terminate")

    def insert(self, q, start):
        t = self.locate(q, start)
        a, b, c = self.tv[t]
        zeros = [(u, v) for u, v in ((a, b), (b, c), (c, a)) if self.orient(u, v, q) == 0]
        if len(zeros) >= 2:
            raise DegenerateMapError(f"duplicate vertex {q}")
        if not zeros:
            self.remove(t)
            self.add(a, b, q, t)
            self.add(b, c, q)
            self.add(c, a, q)
            check = [(a, b), (b, c), (c, a)]
        else:
            u, v = zeros[0]
            t2 = self.he[(v, u)]
            x = self.third(t, u, v)
            y = self.third(t2, u, v)
            self.remove(t)
            self.remove(t2)
            self.add(u, y, q, t)
            self.add(y, v, q, t2)
            self.add(v, x, q)
            self.add(x, u, q)
            check = [(u, y), (y, v), (v, x), (x, u)]
        while check:
            u, v = check.pop()
            t2 = self.he.get((v, u))
            if t2 is None:
                continue
            y = self.third(t2, u, v)
            if self.incircle(u, v, q, y) > 0:
                self.flip(u, v)
                check.append((u, y))
                check.append((y, v))
        return self.vt[q]

    # -- constraints -----------------------------------------------------

    def has_edge(self, a, b):
        return (a, b) in self.he or (b, a) in self.he

    def fan(self, a):
        """Triangles around vertex ``a`` (which must be interior here)."""
        t0 = self.vt[a]
        t = t0
        out = []
        while True:
            out.append(t)
            i = self.tv[t].index(a)
            c = self.tv[t][(i + 2) % 3]
            t = self.he.get((a, c))
            if t is None or t == t0 or len(out) > len(self.tv):
                return out

    def crossing_edges(self, a, b):
        """Edges crossed by the open segment ab, as (right, left) pairs."""
        for t in self.fan(a):
            i = self.tv[t].index(a)
            r = self.tv[t][(i + 1) % 3]
            l = self.tv[t][(i + 2) % 3]
            if self.orient(a, b, r) < 0 and self.orient(a, b, l) > 0:
                break
        else:
            raise DegenerateMapError(f"segment {a}-{b} passes through a vertex")
        out = [(r, l)]
        while True:
            t = self.he[(l, r)]
            w = self.third(t, r, l)
            if w == b:
                return out
            s = self.orient(a, b, w)
            if s == 0:
                raise DegenerateMapError(f"segment {a}-{b} passes through vertex {w}")
            if s < 0:
                r = w
            else:
                l = w
            out.append((r, l))

    def recover(self, a, b):
        if self.has_edge(a, b):
            return
        todo = deque(self.crossing_edges(a, b))
        guard = 0
        limit = 50 * len(todo) * len(todo) + 1000
        while todo:
            guard += 1
            if guard > limit:
                raise DegenerateMapError(f"cannot recover boundary segment {a}-{b}")
            u, v = todo.popleft()
            x, y = self.quad(u, v)
            if self.orient(x, y, u) * self.orient(x, y, v) >= 0:
                todo.append((u, v))
                continue
            self.flip(u, v)
            if x in (a, b) or y in (a, b):
                continue
            sx = self.orient(a, b, x)
            sy = self.orient(a, b, y)
            if sx * sy < 0:
                todo.append((x, y) if sx < 0 else (y, x))


def constrained_delaunay(pm: PolygonMap) -> list[tuple[int, int, int]]:
    """Triangles (ccw vertex-id triples) of the constrained Delaunay
    triangulation of ``pm``; vertex ids index ``pm.vertices``."""
    P = pm.vertices
    n = len(P)
    lo = P.min(axis=0)
    hi = P.max(axis=0)
    cx, cy = (lo + hi) / 2.0
    span = float(max(hi - lo)) or 1.0
    big = 64.0 * span
    pts = [tuple(map(float, p)) for p in P]
    pts += [(cx, cy + 2.0 * big), (cx - 1.8 * big, cy - big), (cx + 1.8 * big, cy - big)]
    tri = _Tri(pts)
    tri.add(n, n + 1, n + 2)
    t = 0
    for v in range(n):
        t = tri.insert(v, t)

    bnd = pm.boundary_edges
    constrained = set()
    for a, b in bnd.tolist():
        tri.recover(a, b)
        constrained.add((min(a, b), max(a, b)))

    # depth flood fill: outside = 0, map interior = 1, holes = 2
    start = tri.vt[n]
    depth = {start: 0}
    dq = deque([start])
    while dq:
        t = dq.popleft()
        a, b, c = tri.tv[t]
        for u, v in ((a, b), (b, c), (c, a)):
            s = tri.he.get((v, u))
            if s is None:
                continue
            wall = (min(u, v), max(u, v)) in constrained
            dd = depth[t] + (1 if wall else 0)
            if s not in depth or dd < depth[s]:
                depth[s] = dd
                if wall:
                    dq.append(s)
                else:
                    dq.appendleft(s)
    for t, dd in depth.items():
        if dd != 1:
            tri.remove(t)
    if any(v >= n for tv in tri.tv.values() for v in tv):
        raise DegenerateMapError("enclosing triangle leaked into the map interior")

    # restore the Delaunay criterion on unconstrained edges
    stack = [e for e in tri.he if e[0] < e[1] and (e[1], e[0]) in tri.he
             and e not in constrained]
    while stack:
        u, v = stack.pop()
        q = tri.quad(u, v)
        if q is None or (min(u, v), max(u, v)) in constrained:
            continue
        x, y = q
        if tri.incircle(u, v, x, y) > 0:
            tri.flip(u, v)
            stack.extend([(u, y), (y, v), (v, x), (x, u)])
    return [tri.tv[t] for t in sorted(tri.tv)]


def is_constrained_delaunay(mesh, pm: PolygonMap) -> list[int]:
    """Interior edges violating the empty-circumcircle test (should be empty)."""
    P = mesh.vertices
    bad = []
    for e in np.nonzero(~mesh.edge_boundary)[0]:
        t1, t2 = mesh.edge_tris[e]
        u, v = mesh.edge_verts[e]
        y = [w for w in mesh.tri_verts[t2] if w != u and w != v][0]
        a, b, c = mesh.tri_verts[t1]
        if incircle(P[a], P[b], P[c], P[y]) > 0:
            bad.append(int(e))
    return bad
