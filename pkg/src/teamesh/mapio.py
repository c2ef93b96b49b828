"""Polygon maps (polygons with holes) and the text formats for maps and meshes.

``polymap`` format::

    polymap 1
    NAME office-3          # optional
    UNIT m                 # optional, informational only
    OUTER 4
    0 0
    10 0
    10 10
    0 10
    HOLE 3
    ...

``#`` starts a comment; blank lines are ignored. Loop orientation in the file
is free; loaded maps always have a ccw outer loop and cw holes.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from ._predicates import orient
from .geom import polygon_area


class MapError(ValueError):
    pass


class MapParseError(MapError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class MapValidationError(MapError):
    pass


class MeshFormatError(ValueError):
    def __init__(self, msg, offset=None):
        self.offset = offset
        super().__init__(f"byte {offset}: {msg}" if offset is not None else msg)


def _as_loop(loop) -> np.ndarray:
    arr = np.asarray(loop, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise MapValidationError("a loop must be a sequence of (x, y) pairs")
    return arr


@dataclass(frozen=True, eq=False)
class PolygonMap:
    """A polygon with holes. Vertex ids run over the outer loop, then each hole."""

    outer: np.ndarray
    holes: tuple = ()
    name: str = ""
    unit: str = "m"

    @cached_property
    def vertices(self) -> np.ndarray:
        return np.ascontiguousarray(np.vstack([self.outer, *self.holes]))

    @property
    def n(self) -> int:
        return len(self.outer) + sum(len(h) for h in self.holes)

    @property
    def h(self) -> int:
        return len(self.holes)

    @cached_property
    def loops(self) -> list[np.ndarray]:
        """Vertex id arrays of every loop (outer first)."""
        out, s = [], 0
        for loop in (self.outer, *self.holes):
            out.append(np.arange(s, s + len(loop)))
            s += len(loop)
        return out

    @cached_property
    def boundary_edges(self) -> np.ndarray:
        """Directed boundary edges (i, j), the map interior lies to their left."""
        rows = []
        for ids in self.loops:
            rows.append(np.column_stack([ids, np.roll(ids, -1)]))
        return np.vstack(rows)

    @cached_property
    def boundary_edge_set(self) -> frozenset:
        return frozenset((min(i, j), max(i, j)) for i, j in self.boundary_edges.tolist())

    @cached_property
    def area(self) -> float:
        return polygon_area(self.outer) + sum(polygon_area(h) for h in self.holes)

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        x0, y0 = self.outer.min(axis=0)
        x1, y1 = self.outer.max(axis=0)
        return float(x0), float(y0), float(x1), float(y1)

    @property
    def diameter(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return float(np.hypot(x1 - x0, y1 - y0))

    def same_geometry(self, other: "PolygonMap") -> bool:
        return (len(self.holes) == len(other.holes)
                and np.array_equal(self.outer, other.outer)
                and all(np.array_equal(a, b) for a, b in zip(self.holes, other.holes)))


@njit(cache=True)
def _on_closed_segment(P, a, b, c):
    # c on closed segment ab, assuming collinearity has been checked
    return (min(P[a, 0], P[b, 0]) <= P[c, 0] <= max(P[a, 0], P[b, 0])
            and min(P[a, 1], P[b, 1]) <= P[c, 1] <= max(P[a, 1], P[b, 1]))


@njit(cache=True)
def _segments_touch(P, a, b, c, d):
    o1 = orient(P[a, 0], P[a, 1], P[b, 0], P[b, 1], P[c, 0], P[c, 1])
    o2 = orient(P[a, 0], P[a, 1], P[b, 0], P[b, 1], P[d, 0], P[d, 1])
    o3 = orient(P[c, 0], P[c, 1], P[d, 0], P[d, 1], P[a, 0], P[a, 1])
    o4 = orient(P[c, 0], P[c, 1], P[d, 0], P[d, 1], P[b, 0], P[b, 1])
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and _on_closed_segment(P, a, b, c):
        return True
    if o2 == 0 and _on_closed_segment(P, a, b, d):
        return True
    if o3 == 0 and _on_closed_segment(P, c, d, a):
        return True
    if o4 == 0 and _on_closed_segment(P, c, d, b):
        return True
    return False


@njit(cache=True)
def first_bad_edge_pair(P, E):
    """O(m^2) check that loop edges meet only at shared loop vertices."""
    m = E.shape[0]
    for i in range(m):
        a = E[i, 0]
        b = E[i, 1]
        x0 = min(P[a, 0], P[b, 0])
        x1 = max(P[a, 0], P[b, 0])
        y0 = min(P[a, 1], P[b, 1])
        y1 = max(P[a, 1], P[b, 1])
        for j in range(i + 1, m):
            c = E[j, 0]
            d = E[j, 1]
            if (max(P[c, 0], P[d, 0]) < x0 or min(P[c, 0], P[d, 0]) > x1
                    or max(P[c, 1], P[d, 1]) < y0 or min(P[c, 1], P[d, 1]) > y1):
                continue
            if b == c or a == d:
                # consecutive edges: only a fold-back onto each other is bad
                if b == c:
                    p, s, r = a, b, d
                else:
                    p, s, r = c, a, b
                if orient(P[p, 0], P[p, 1], P[s, 0], P[s, 1], P[r, 0], P[r, 1]) == 0:
                    dot = ((P[s, 0] - P[p, 0]) * (P[r, 0] - P[s, 0])
                           + (P[s, 1] - P[p, 1]) * (P[r, 1] - P[s, 1]))
                    if dot < 0:
                        return i, j
                if b == c and a == d:
                    continue
                # a 3-vertex loop has edges adjacent at both ends; the other
                # endpoint must not lie on the edge
                continue
            if _segments_touch(P, a, b, c, d):
                return i, j
    return -1, -1


def point_in_loop(loop: np.ndarray, x: float, y: float) -> int:
    """Winding test with exact predicates: 1 inside, 0 on boundary, -1 outside."""
    wn = 0
    k = len(loop)
    for i in range(k):
        ax, ay = loop[i]
        bx, by = loop[(i + 1) % k]
        o = orient(ax, ay, bx, by, x, y)
        if o == 0 and min(ax, bx) <= x <= max(ax, bx) and min(ay, by) <= y <= max(ay, by):
            return 0
        if ay <= y < by and o > 0:
            wn += 1
        elif by <= y < ay and o < 0:
            wn -= 1
    return 1 if wn != 0 else -1


def make_map(outer, holes: Iterable = (), name: str = "", unit: str = "m") -> PolygonMap:
    """Validate loops and build a map with normalised orientation."""
    outer = _as_loop(outer)
    holes = [_as_loop(h) for h in holes]
    for loop in (outer, *holes):
        if len(loop) < 3:
            raise MapValidationError("every loop needs at least 3 vertices")
        if not np.all(np.isfinite(loop)):
            raise MapValidationError("non-finite coordinate")
        if np.any(np.all(loop == np.roll(loop, -1, axis=0), axis=1)):
            raise MapValidationError("duplicate consecutive vertices")
    if polygon_area(outer) < 0:
        outer = outer[::-1]
    holes = [h[::-1] if polygon_area(h) > 0 else h for h in holes]
    pm = PolygonMap(np.ascontiguousarray(outer), tuple(np.ascontiguousarray(h) for h in holes),
                    name=name, unit=unit)
    _validate(pm)
    return pm


def _validate(pm: PolygonMap) -> None:
    P = pm.vertices
    E = np.ascontiguousarray(pm.boundary_edges, dtype=np.int64)
    i, j = first_bad_edge_pair(P, E)
    if i >= 0:
        raise MapValidationError(
            f"boundary edges {tuple(E[i])} and {tuple(E[j])} intersect (self-intersection "
            "or touching loops)")
    for loop in (pm.outer, *pm.holes):
        if polygon_area(loop) == 0.0:
            raise MapValidationError("degenerate loop with zero area")
    for k, hole in enumerate(pm.holes):
        if point_in_loop(pm.outer, *hole[0]) != 1:
            raise MapValidationError(f"hole {k} is not inside the outer boundary")
        for m, other in enumerate(pm.holes):
            if m != k and point_in_loop(other, *hole[0]) == 1:
                raise MapValidationError(f"hole {k} lies inside hole {m}")


# ------------------------------------------------------------------ polymap


def _read_text(source) -> str:
    if isinstance(source, (bytes, bytearray)):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def load_map(source, format: str = "polymap") -> PolygonMap:
    """Parse a ``polymap`` document (text, bytes, or a readable stream)."""
    if format != "polymap":
        raise MapParseError(f"unknown map format {format!r}")
    lines = []
    for no, raw in enumerate(_read_text(source).splitlines(), start=1):
        s = raw.split("#", 1)[0].strip()
        if s:
            lines.append((no, s))
    if not lines or lines[0][1].split() != ["polymap", "1"]:
        raise MapParseError("expected header 'polymap 1'", lines[0][0] if lines else 1)
    name, unit = "", "m"
    outer, holes = None, []
    pos = 1

    def read_block(pos, count, no):
        pts = []
        for _ in range(count):
            if pos >= len(lines):
                raise MapParseError(f"expected {count} coordinate lines", no)
            no_, s = lines[pos]
            parts = s.split()
            if len(parts) != 2:
                raise MapParseError("expected 'x y'", no_)
            try:
                pts.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise MapParseError(f"bad coordinate {s!r}", no_) from None
            pos += 1
        return pts, pos

    while pos < len(lines):
        no, s = lines[pos]
        parts = s.split(None, 1)
        key = parts[0]
        if key in ("NAME", "UNIT"):
            val = parts[1] if len(parts) > 1 else ""
            if key == "NAME":
                name = val
            else:
                unit = val
            pos += 1
            continue
        if key not in ("OUTER", "HOLE"):
            raise MapParseError(f"unexpected {key!r}", no)
        try:
            count = int(parts[1])
        except (IndexError, ValueError):
            raise MapParseError(f"{key} needs a vertex count", no) from None
        pts, pos = read_block(pos + 1, count, no)
        if key == "OUTER":
            if outer is not None:
                raise MapParseError("more than one OUTER block", no)
            outer = pts
        else:
            if outer is None:
                raise MapParseError("HOLE before OUTER", no)
            holes.append(pts)
    if outer is None:
        raise MapParseError("missing OUTER block")
    return make_map(outer, holes, name=name, unit=unit)


def dump_map(pm: PolygonMap) -> str:
    out = ["polymap 1"]
    if pm.name:
        out.append(f"NAME {pm.name}")
    out.append(f"UNIT {pm.unit}")
    for key, loop in [("OUTER", pm.outer)] + [("HOLE", h) for h in pm.holes]:
        out.append(f"{key} {len(loop)}")
        out.extend(f"{x:.17g} {y:.17g}" for x, y in loop.tolist())
    return "\n".join(out) + "\n"


def save_map(pm: PolygonMap, sink) -> None:
    text = dump_map(pm)
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "w") as fh:
            fh.write(text)
    else:
        sink.write(text)


def read_map(path) -> PolygonMap:
    with open(path, "rb") as fh:
        return load_map(fh)


def normalize_map(raw: Sequence) -> PolygonMap:
    """Keep the largest polygon of a multi-polygon map plus the holes inside it.

    ``raw`` items are ``(outer, holes)`` pairs or bare loops (no holes).
    """
    if not raw:
        raise MapError("empty map list")
    comps = []
    for item in raw:
        if isinstance(item, tuple) and len(item) == 2 and not np.isscalar(item[0][0]):
            outer, holes = _as_loop(item[0]), [_as_loop(h) for h in item[1]]
        else:
            outer, holes = _as_loop(item), []
        comps.append((outer, holes))
    best = max(range(len(comps)), key=lambda k: abs(polygon_area(comps[k][0])))
    outer = comps[best][0]
    ccw = outer if polygon_area(outer) > 0 else outer[::-1]
    holes = []
    for outer_k, holes_k in comps:
        for h in holes_k:
            if point_in_loop(ccw, *h[0]) == 1:
                holes.append(h)
    return make_map(outer, holes)


# ------------------------------------------------------------------ trimesh


def dump_mesh(mesh) -> str:
    out = ["trimesh 1", str(len(mesh.vertices))]
    out.extend(f"{x:.17g} {y:.17g}" for x, y in mesh.vertices.tolist())
    out.append(str(len(mesh.tri_verts)))
    for v, nb in zip(mesh.tri_verts.tolist(), mesh.tri_nbrs.tolist()):
        out.append(f"{v[0]} {v[1]} {v[2]} {nb[0]} {nb[1]} {nb[2]}")
    return "\n".join(out) + "\n"


def save_mesh(mesh, sink) -> None:
    text = dump_mesh(mesh)
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "w") as fh:
            fh.write(text)
    else:
        sink.write(text)


def load_mesh(source):
    """Parse a ``trimesh`` document; errors report the byte offset."""
    from .trimesh import TriMesh

    data = source if isinstance(source, (bytes, bytearray)) else _read_bytes(source)
    stream = io.BytesIO(data)
    offset = 0

    def next_line():
        nonlocal offset
        while True:
            start = offset
            raw = stream.readline()
            if not raw:
                raise MeshFormatError("unexpected end of file", start)
            offset += len(raw)
            s = raw.split(b"#", 1)[0].strip()
            if s:
                return start, s.decode("ascii", "replace").split()

    pos, hdr = next_line()
    if hdr != ["trimesh", "1"]:
        raise MeshFormatError(f"expected 'trimesh 1', got {' '.join(hdr)!r}", pos)
    pos, tok = next_line()
    try:
        nv = int(tok[0])
        verts = np.empty((nv, 2))
        for i in range(nv):
            pos, tok = next_line()
            if len(tok) != 2:
                raise MeshFormatError("expected 'x y'", pos)
            verts[i] = float(tok[0]), float(tok[1])
        pos, tok = next_line()
        nt = int(tok[0])
        tv = np.empty((nt, 3), np.int64)
        tn = np.empty((nt, 3), np.int64)
        for t in range(nt):
            pos, tok = next_line()
            if len(tok) != 6:
                raise MeshFormatError("expected 3 vertex and 3 neighbour ids", pos)
            vals = [int(x) for x in tok]
            tv[t] = vals[:3]
            tn[t] = vals[3:]
    except ValueError as exc:
        raise MeshFormatError(str(exc), pos) from None
    mesh = TriMesh.from_arrays(verts, tv)
    if not np.array_equal(mesh.tri_nbrs, tn):
        raise MeshFormatError("neighbour table inconsistent with triangles", pos)
    return mesh


def _read_bytes(source) -> bytes:
    if isinstance(source, str) or hasattr(source, "__fspath__"):
        with open(source, "rb") as fh:
            return fh.read()
    data = source.read()
    return data.encode() if isinstance(data, str) else data
