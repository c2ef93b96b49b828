"""Low-level geometric primitives.

Orientation is exact (see ``_predicates``). Constructed points, such as
ray/segment intersections, are plain floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from ._predicates import orient as _orient

TWO_PI = 2.0 * math.pi


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise GeometryError("degenerate segment")

    @property
    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)

    @property
    def midpoint(self) -> Point:
        return Point(0.5 * (self.a.x + self.b.x), 0.5 * (self.a.y + self.b.y))


class Orientation(IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


@dataclass(frozen=True)
class ArcEdge:
    """Counter-clockwise circular arc from ``start_angle`` sweeping to ``end_angle``."""

    center: Point
    radius: float
    start_angle: float
    end_angle: float

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError("arc radius must be positive")
        if not 0.0 <= self.sweep <= TWO_PI + 1e-12:
            raise GeometryError(f"invalid arc sweep {self.sweep}")

    @property
    def sweep(self) -> float:
        return self.end_angle - self.start_angle


def _xy(p) -> tuple[float, float]:
    if isinstance(p, Point):
        return p.x, p.y
    return float(p[0]), float(p[1])


def orient2d(a, b, c) -> Orientation:
    ax, ay = _xy(a)
    bx, by = _xy(b)
    cx, cy = _xy(c)
    return Orientation(_orient(ax, ay, bx, by, cx, cy))


def orient2d_rational(a, b, c) -> Orientation:
    """Reference orientation in exact rational arithmetic (slow)."""
    ax, ay = (Fraction(v) for v in _xy(a))
    bx, by = (Fraction(v) for v in _xy(b))
    cx, cy = (Fraction(v) for v in _xy(c))
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return Orientation((det > 0) - (det < 0))


def incircle(a, b, c, d) -> int:
    """Positive if ``d`` lies strictly inside the circle through ccw ``a, b, c``."""
    ax, ay = _xy(a)
    bx, by = _xy(b)
    cx, cy = _xy(c)
    dx, dy = _xy(d)
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    det = (alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    if abs(det) > 1.1102230246251577e-15 * permanent:
        return 1 if det > 0 else -1
    fa = [Fraction(v) for v in (ax, ay, bx, by, cx, cy, dx, dy)]
    ax, ay, bx, by, cx, cy, dx, dy = fa
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return (det > 0) - (det < 0)


def ray_segment_intersection(origin, through, seg) -> Optional[Point]:
    """Point where the ray from ``origin`` through ``through`` meets ``seg``.

    Touching an endpoint counts. For a collinear overlap the point of the
    segment nearest to the origin along the ray is returned.
    """
    ox, oy = _xy(origin)
    tx, ty = _xy(through)
    if (ox, oy) == (tx, ty):
        raise GeometryError("ray direction undefined")
    a, b = (seg.a, seg.b) if isinstance(seg, Segment) else seg
    ax, ay = _xy(a)
    bx, by = _xy(b)
    sa = _orient(ox, oy, tx, ty, ax, ay)
    sb = _orient(ox, oy, tx, ty, bx, by)
    if sa * sb > 0:
        return None
    dx, dy = tx - ox, ty - oy
    if sa == 0 and sb == 0:
        ta = (ax - ox) * dx + (ay - oy) * dy
        tb = (bx - ox) * dx + (by - oy) * dy
        if ta < 0 and tb < 0:
            return None
        if ta >= 0 and tb >= 0:
            return Point(ax, ay) if ta <= tb else Point(bx, by)
        return Point(ox, oy)
    if sa == 0:
        hit = (ax, ay)
    elif sb == 0:
        hit = (bx, by)
    else:
        ex, ey = bx - ax, by - ay
        den = dx * ey - dy * ex
        s = ((ax - ox) * dy - (ay - oy) * dx) / den
        s = min(1.0, max(0.0, s))
        hit = (ax + s * ex, ay + s * ey)
    if (hit[0] - ox) * dx + (hit[1] - oy) * dy < 0:
        return None
    return Point(*hit)


def point_in_triangle(p, a, b, c) -> bool:
    """Boundary-inclusive containment test for a ccw triangle."""
    return (orient2d(a, b, p) >= 0 and orient2d(b, c, p) >= 0
            and orient2d(c, a, p) >= 0)


def polygon_area(loop: Sequence) -> float:
    """Signed shoelace area; positive for ccw loops."""
    if len(loop) < 3:
        raise GeometryError("a polygon needs at least 3 vertices")
    return _shoelace(loop)


def _shoelace(loop: Sequence) -> float:
    n = len(loop)
    if n < 2:
        return 0.0
    # Centering on the first vertex keeps cancellation small for far-off maps.
    x0, y0 = _xy(loop[0])
    terms = []
    for i in range(1, n - 1):
        x1, y1 = _xy(loop[i])
        x2, y2 = _xy(loop[i + 1])
        terms.append((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))
    return 0.5 * math.fsum(terms)


def circular_segment_area(radius: float, sweep: float) -> float:
    return 0.5 * radius * radius * (sweep - math.sin(sweep))


def arc_region_area(vertices: Sequence, arcs: Iterable[Optional[ArcEdge]]) -> float:
    """Area of a closed region whose edges are chords or ccw arcs.

    ``arcs[i]`` describes the edge from ``vertices[i]`` to ``vertices[i+1]``
    (``None`` for a straight edge).
    """
    total = _shoelace(vertices)
    for arc in arcs:
        if arc is None:
            continue
        sweep = arc.sweep
        if sweep < 0.0 or sweep > TWO_PI + 1e-12:
            raise GeometryError(f"invalid arc sweep {sweep}")
        total += circular_segment_area(arc.radius, sweep)
    return total


def segments_cross_properly(a, b, c, d) -> bool:
    """True iff open segments ab and cd intersect in a single interior point."""
    o1 = orient2d(a, b, c)
    o2 = orient2d(a, b, d)
    o3 = orient2d(c, d, a)
    o4 = orient2d(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def on_segment(p, a, b) -> bool:
    """True iff ``p`` lies on the closed segment ab."""
    if orient2d(a, b, p) != 0:
        return False
    px, py = _xy(p)
    ax, ay = _xy(a)
    bx, by = _xy(b)
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def segments_intersect(a, b, c, d) -> bool:
    """Closed-segment intersection test."""
    o1 = orient2d(a, b, c)
    o2 = orient2d(a, b, d)
    o3 = orient2d(c, d, a)
    o4 = orient2d(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (on_segment(c, a, b) or on_segment(d, a, b)
            or on_segment(a, c, d) or on_segment(b, c, d))
