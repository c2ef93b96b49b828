"""Seeded synthetic maps: random simple polygons, convex polygons, polygons
with holes, and large office-like floor plans."""
from __future__ import annotations

import math

import numpy as np
from shapely.geometry import Polygon

from .mapio import MapValidationError, PolygonMap, make_map


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def star_polygon(n: int, seed, center=(0.0, 0.0), radius=10.0, spread=0.7) -> np.ndarray:
    """Star-shaped loop around ``center`` with n vertices; simple by construction."""
    rng = _rng(seed)
    # one angle per stratum: no two vertices on one ray and no gap wide
    # enough to leave the centre outside
    ang = (np.arange(n) + rng.uniform(0.25, 0.75, n)) * (2.0 * math.pi / n)
    r = radius * (1.0 - spread * rng.uniform(0.0, 1.0, n))
    return np.column_stack([center[0] + r * np.cos(ang), center[1] + r * np.sin(ang)])


def random_simple_polygon(n: int, seed, radius=10.0) -> PolygonMap:
    return make_map(star_polygon(n, seed, radius=radius), name=f"simple-{n}")


def random_convex_polygon(n: int, seed, radius=10.0) -> PolygonMap:
    rng = _rng(seed)
    while True:
        ang = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
        if np.min(np.diff(np.r_[ang, ang[0] + 2 * math.pi])) > 1e-3:
            break
    pts = np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])
    return make_map(pts, name=f"convex-{n}")


def random_map_with_holes(n_outer: int, n_holes: int, seed, hole_size=(3, 6),
                          radius=20.0) -> PolygonMap:
    """Star-shaped outer loop with up to ``n_holes`` small star-shaped holes."""
    rng = _rng(seed)
    outer = star_polygon(n_outer, rng, radius=radius, spread=0.35)
    holes = []
    tries = 0
    while len(holes) < n_holes and tries < 200:
        tries += 1
        k = int(rng.integers(hole_size[0], hole_size[1] + 1))
        c = rng.uniform(-0.5 * radius, 0.5 * radius, 2)
        h = star_polygon(k, rng, center=c, radius=rng.uniform(0.05, 0.15) * radius, spread=0.5)
        try:
            make_map(outer, holes + [h])
        except MapValidationError:
            continue
        holes.append(h)
    return make_map(outer, holes, name=f"holes-{n_outer}-{len(holes)}")


def _rect(x0, y0, x1, y1):
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


def _rotate(pts, cx, cy, a):
    c, s = math.cos(a), math.sin(a)
    return [(cx + c * (x - cx) - s * (y - cy), cy + s * (x - cx) + c * (y - cy)) for x, y in pts]


def _hole_shape(rng, cx, cy, size):
    kind = int(rng.integers(0, 5))
    w = size * rng.uniform(0.4, 1.0)
    h = size * rng.uniform(0.4, 1.0)
    if kind == 0:  # desk / room block
        pts = _rect(cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2)
    elif kind == 1:  # L-shaped wall
        t = 0.3 * min(w, h)
        x0, y0 = cx - w / 2, cy - h / 2
        pts = [(x0, y0), (x0 + w, y0), (x0 + w, y0 + t), (x0 + t, y0 + t),
               (x0 + t, y0 + h), (x0, y0 + h)]
    elif kind == 2:  # rotated block
        pts = _rotate(_rect(cx - w / 2, cy - h / 8 - 0.1, cx + w / 2, cy + h / 8 + 0.1),
                      cx, cy, rng.uniform(0, math.pi))
    elif kind == 3:  # pillar
        m = int(rng.integers(6, 11))
        r = 0.25 * min(w, h)
        pts = [(cx + r * math.cos(2 * math.pi * i / m), cy + r * math.sin(2 * math.pi * i / m))
               for i in range(m)]
    else:  # U-shaped partition
        t = 0.25 * min(w, h)
        x0, y0 = cx - w / 2, cy - h / 2
        pts = [(x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0 + w - t, y0 + h),
               (x0 + w - t, y0 + t), (x0 + t, y0 + t), (x0 + t, y0 + h), (x0, y0 + h)]
    return pts


def office_map(seed, nx=11, ny=8, cell=12.0, notch_every=3.0) -> PolygonMap:
    """Rectangular floor with notched outer walls and an irregular grid of
    obstacles (blocks, L/U walls, pillars, rotated furniture)."""
    rng = _rng(seed)
    W = nx * cell
    H = ny * cell
    # outer wall walked ccw with rectangular notches of random depth
    outer = []

    def wall(p0, p1, inward):
        L = math.dist(p0, p1)
        ux, uy = (p1[0] - p0[0]) / L, (p1[1] - p0[1]) / L
        ix, iy = inward
        outer.append(p0)
        s = notch_every
        while s + notch_every < L - notch_every:
            a = s + rng.uniform(0.2, 0.8)
            b = a + rng.uniform(0.8, 2.2)
            if b >= L - 1.0:
                break
            dep = rng.uniform(0.4, 1.8) * (1 if rng.random() < 0.5 else -1)
            for t, dd in ((a, 0.0), (a, dep), (b, dep), (b, 0.0)):
                outer.append((p0[0] + ux * t + ix * dd, p0[1] + uy * t + iy * dd))
            s = b + rng.uniform(0.5, notch_every)

    wall((0.0, 0.0), (W, 0.0), (0.0, 1.0))
    wall((W, 0.0), (W, H), (-1.0, 0.0))
    wall((W, H), (0.0, H), (0.0, -1.0))
    wall((0.0, H), (0.0, 0.0), (1.0, 0.0))

    holes = []
    for i in range(nx):
        for j in range(ny):
            cx = (i + 0.5) * cell + rng.uniform(-0.15, 0.15) * cell
            cy = (j + 0.5) * cell + rng.uniform(-0.15, 0.15) * cell
            holes.append(_hole_shape(rng, cx, cy, 0.6 * cell))
            if rng.random() < 0.35:  # extra small obstacle in the corridor
                holes.append(_hole_shape(rng, (i + 1.0) * cell, (j + 1.0) * cell, 0.18 * cell))
    # drop any obstacle that clashes with the walls or another obstacle
    room = Polygon(outer).buffer(-0.1)
    keep, taken = [], []
    for h in holes:
        poly = Polygon(h)
        if not (poly.is_valid and room.contains(poly)):
            continue
        if any(poly.distance(o) < 0.1 for o in taken):
            continue
        keep.append(h)
        taken.append(poly)
    return make_map(outer, keep, name=f"office-{seed}")


def _cross(x, y, t, r, u, l, d):
    return [(x + t, y - t), (x + r, y - t), (x + r, y + t), (x + t, y + t), (x + t, y + u),
            (x - t, y + u), (x - t, y + t), (x - l, y + t), (x - l, y - t), (x - t, y - t),
            (x - t, y - d), (x + t, y - d)]


def floor_plan_map(seed, nx=10, ny=8, cell=12.0, wall=0.3, door=(1.5, 2.5),
                   furniture=(0, 3), notch_every=3.0) -> PolygonMap:
    """Grid of rooms separated by thin walls with one door per wall segment.

    The interior walls are cross-shaped obstacles centred on the wall
    junctions; each arm stops at a door, so the obstacles never touch.
    Rooms are furnished with small random obstacles and the outer wall has
    outward bays.
    """
    rng = _rng(seed)
    xs = np.r_[0.0, np.cumsum(rng.uniform(0.75, 1.25, nx) * cell)]
    ys = np.r_[0.0, np.cumsum(rng.uniform(0.75, 1.25, ny) * cell)]
    W, H = float(xs[-1]), float(ys[-1])
    t = 0.5 * wall
    outer = []

    def side(p0, p1, outward):
        L = math.dist(p0, p1)
        ux, uy = (p1[0] - p0[0]) / L, (p1[1] - p0[1]) / L
        outer.append(p0)
        s = notch_every
        while s + notch_every < L - notch_every:
            a = s + rng.uniform(0.2, 0.8)
            b = a + rng.uniform(0.8, 2.2)
            if b >= L - 1.0:
                break
            dep = rng.uniform(0.4, 1.8)
            for q, dd in ((a, 0.0), (a, dep), (b, dep), (b, 0.0)):
                outer.append((p0[0] + ux * q + outward[0] * dd, p0[1] + uy * q + outward[1] * dd))
            s = b + rng.uniform(0.5, notch_every)

    side((0.0, 0.0), (W, 0.0), (0.0, -1.0))
    side((W, 0.0), (W, H), (1.0, 0.0))
    side((W, H), (0.0, H), (0.0, 1.0))
    side((0.0, H), (0.0, 0.0), (-1.0, 0.0))

    def split(L, ends):
        # arm lengths on both sides of one door; ``ends`` marks which side
        # is a junction (a missing junction means the outer wall)
        dw = rng.uniform(*door)
        lo = t + 0.5 if ends[0] else 0.0
        hi = L - dw - (t + 0.5 if ends[1] else 0.0)
        s = rng.uniform(lo, hi) if ends[0] and ends[1] else (hi if ends[0] else lo)
        return s, L - s - dw

    # arms[i][j] = [right, up, left, down] for junction (xs[i], ys[j])
    arms = {(i, j): [0.0] * 4 for i in range(1, nx) for j in range(1, ny)}
    for j in range(1, ny):
        for i in range(nx):
            a, b = split(xs[i + 1] - xs[i], (i > 0, i + 1 < nx))
            if i > 0:
                arms[i, j][0] = a
            if i + 1 < nx:
                arms[i + 1, j][2] = b
    for i in range(1, nx):
        for j in range(ny):
            a, b = split(ys[j + 1] - ys[j], (j > 0, j + 1 < ny))
            if j > 0:
                arms[i, j][1] = a
            if j + 1 < ny:
                arms[i, j + 1][3] = b
    holes = [_cross(xs[i], ys[j], t, *arms[i, j]) for (i, j) in sorted(arms)]
    taken = [Polygon(h) for h in holes]
    for i in range(nx):
        for j in range(ny):
            x0, x1, y0, y1 = xs[i] + t, xs[i + 1] - t, ys[j] + t, ys[j + 1] - t
            size = 0.35 * min(x1 - x0, y1 - y0)
            for _ in range(int(rng.integers(furniture[0], furniture[1] + 1))):
                cx = rng.uniform(x0 + 0.5 * size, x1 - 0.5 * size)
                cy = rng.uniform(y0 + 0.5 * size, y1 - 0.5 * size)
                h = _hole_shape(rng, cx, cy, size)
                poly = Polygon(h)
                if not poly.is_valid or not Polygon(_rect(x0, y0, x1, y1)).buffer(-0.3).contains(poly):
                    continue
                if any(poly.distance(o) < 0.3 for o in taken):
                    continue
                holes.append(h)
                taken.append(poly)
    return make_map(outer, holes, name=f"floorplan-{seed}")


def terrain_map(seed, n_outer=400, n_holes=70, hole_size=(6, 16), radius=60.0,
                hole_radius=(0.03, 0.08), clearance=0.5) -> PolygonMap:
    """Irregular open terrain: a jagged star-shaped outline with many small
    irregular obstacles (rocks, ruins, craters) kept ``clearance`` apart."""
    rng = _rng(seed)
    outer = star_polygon(n_outer, rng, radius=radius, spread=0.35)
    room = Polygon(outer).buffer(-clearance)
    holes, taken = [], []
    tries = 0
    while len(holes) < n_holes and tries < 50 * n_holes:
        tries += 1
        k = int(rng.integers(hole_size[0], hole_size[1] + 1))
        c = rng.uniform(-0.75 * radius, 0.75 * radius, 2)
        h = star_polygon(k, rng, center=c, radius=rng.uniform(*hole_radius) * radius, spread=0.6)
        poly = Polygon(h)
        if not (poly.is_valid and room.contains(poly)):
            continue
        if any(poly.distance(o) < clearance for o in taken):
            continue
        holes.append(h)
        taken.append(poly)
    return make_map(outer, holes, name=f"terrain-{seed}")
