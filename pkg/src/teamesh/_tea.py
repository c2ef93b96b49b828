"""Numba kernels behind ``visibility`` and ``trimesh`` point location.

Mesh arrays: ``P`` (n, 2) coordinates, ``TV`` (T, 3) ccw vertex ids, ``TN``
(T, 3) neighbour opposite each vertex (-1 on the boundary), ``TE`` (T, 3)
edge id opposite each vertex, ``EV`` (E, 2) edge endpoints.
"""
import math

import numpy as np
from numba import njit

from ._predicates import orient

# terminal piece kinds / region edge kinds
FREE = 0
OBSTACLE = 1
RANGE = 2
ARC = 3

# region vertex kinds
MAP_VERTEX = 0
EDGE_INTERSECTION = 1
ARC_POINT = 2

# start kinds
START_INTERIOR = 0
START_BOUNDARY_EDGE = 1
START_VERTEX = 2


@njit(cache=True)
def _grow_rows(a):
    b = np.empty((2 * a.shape[0], a.shape[1]), a.dtype)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def _grow1(a):
    b = np.empty(2 * a.shape[0], a.dtype)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def in_triangle(P, TV, t, qx, qy):
    a = TV[t, 0]
    b = TV[t, 1]
    c = TV[t, 2]
    if orient(P[a, 0], P[a, 1], P[b, 0], P[b, 1], qx, qy) < 0:
        return False
    if orient(P[b, 0], P[b, 1], P[c, 0], P[c, 1], qx, qy) < 0:
        return False
    return orient(P[c, 0], P[c, 1], P[a, 0], P[a, 1], qx, qy) >= 0


# ---------------------------------------------------------------- buckets


@njit(cache=True)
def _tri_rect_overlap(P, TV, t, x0, y0, x1, y1):
    # separating axis test on closed sets
    tx0 = min(P[TV[t, 0], 0], P[TV[t, 1], 0], P[TV[t, 2], 0])
    tx1 = max(P[TV[t, 0], 0], P[TV[t, 1], 0], P[TV[t, 2], 0])
    ty0 = min(P[TV[t, 0], 1], P[TV[t, 1], 1], P[TV[t, 2], 1])
    ty1 = max(P[TV[t, 0], 1], P[TV[t, 1], 1], P[TV[t, 2], 1])
    if tx1 < x0 or tx0 > x1 or ty1 < y0 or ty0 > y1:
        return False
    for k in range(3):
        a = TV[t, k]
        b = TV[t, (k + 1) % 3]
        # rectangle entirely strictly right of the ccw edge a->b => separated
        sep = True
        for cx, cy in ((x0, y0), (x1, y0), (x1, y1), (x0, y1)):
            if orient(P[a, 0], P[a, 1], P[b, 0], P[b, 1], cx, cy) >= 0:
                sep = False
                break
        if sep:
            return False
    return True


@njit(cache=True)
def build_bucket_lists(P, TV, x0, y0, cell, nx, ny):
    counts = np.zeros(nx * ny + 1, np.int64)
    cap = max(16, 4 * TV.shape[0])
    pairs = np.empty((cap, 2), np.int64)
    m = 0
    pad = 1e-9 * cell
    for t in range(TV.shape[0]):
        tx0 = min(P[TV[t, 0], 0], P[TV[t, 1], 0], P[TV[t, 2], 0])
        tx1 = max(P[TV[t, 0], 0], P[TV[t, 1], 0], P[TV[t, 2], 0])
        ty0 = min(P[TV[t, 0], 1], P[TV[t, 1], 1], P[TV[t, 2], 1])
        ty1 = max(P[TV[t, 0], 1], P[TV[t, 1], 1], P[TV[t, 2], 1])
        i0 = max(0, int(math.floor((tx0 - x0) / cell)) - 1)
        i1 = min(nx - 1, int(math.floor((tx1 - x0) / cell)) + 1)
        j0 = max(0, int(math.floor((ty0 - y0) / cell)) - 1)
        j1 = min(ny - 1, int(math.floor((ty1 - y0) / cell)) + 1)
        for j in range(j0, j1 + 1):
            for i in range(i0, i1 + 1):
                # cells are padded so rounding in locate() can never miss
                if _tri_rect_overlap(P, TV, t, x0 + i * cell - pad, y0 + j * cell - pad,
                                     x0 + (i + 1) * cell + pad, y0 + (j + 1) * cell + pad):
                    if m == pairs.shape[0]:
                        pairs = _grow_rows(pairs)
                    pairs[m, 0] = j * nx + i
                    pairs[m, 1] = t
                    m += 1
                    counts[j * nx + i + 1] += 1
    start = np.cumsum(counts)
    items = np.empty(m, np.int64)
    fill = start[:-1].copy()
    # triangles were visited in ascending id, so each list stays sorted
    for k in range(m):
        c = pairs[k, 0]
        items[fill[c]] = pairs[k, 1]
        fill[c] += 1
    return start, items


@njit(cache=True)
def locate(qx, qy, P, TV, gx, gy, cell, nx, ny, cstart, citems):
    fx = (qx - gx) / cell
    fy = (qy - gy) / cell
    if not (fx >= 0.0 and fy >= 0.0 and fx <= nx and fy <= ny):
        return -1
    ix = min(int(fx), nx - 1)
    iy = min(int(fy), ny - 1)
    c = iy * nx + ix
    for k in range(cstart[c], cstart[c + 1]):
        t = citems[k]
        if in_triangle(P, TV, t, qx, qy):
            return t
    return -1


@njit(cache=True)
def locate_linear(qx, qy, P, TV):
    for t in range(TV.shape[0]):
        if in_triangle(P, TV, t, qx, qy):
            return t
    return -1


# ---------------------------------------------------------------- expansion


@njit(cache=True)
def _out_of_range(qx, qy, P, a, b, d2):
    ax = P[a, 0]
    ay = P[a, 1]
    ex = P[b, 0] - ax
    ey = P[b, 1] - ay
    ll = ex * ex + ey * ey
    s = ((qx - ax) * ex + (qy - ay) * ey) / ll
    if s < 0.0:
        s = 0.0
    elif s > 1.0:
        s = 1.0
    dx = ax + s * ex - qx
    dy = ay + s * ey - qy
    return dx * dx + dy * dy > d2


@njit(cache=True)
def expand(qx, qy, t0, d, P, TV, TN, TE, mark):
    """Triangular expansion from the triangle ``t0`` containing ``q``.

    Returns ``(pieces, npieces, eta, start)``. Each piece row is
    ``(edge, kind, cw_vertex, ccw_vertex, cw_ray, ccw_ray)``: a boundary (or
    out-of-range) edge seen between the rays from q through ``cw_ray`` and
    ``ccw_ray``. Pieces come out in ccw order around q. ``start`` is
    ``(kind, vertex, edge_in, edge_out)`` describing where q sits. When
    ``mark`` is non-empty, every map vertex seen from q is flagged in it.
    """
    limited = d < np.inf
    d2 = d * d
    want = mark.shape[0] > 0
    pieces = np.empty((32, 6), np.int64)
    npc = 0
    stack = np.empty((64, 4), np.int64)
    eta = 0
    start = np.full(4, -1, np.int64)
    start[0] = START_INTERIOR

    o = np.empty(3, np.int64)
    nz = 0
    for k in range(3):
        a = TV[t0, (k + 1) % 3]
        b = TV[t0, (k + 2) % 3]
        o[k] = orient(P[a, 0], P[a, 1], P[b, 0], P[b, 1], qx, qy)
        if o[k] == 0:
            nz += 1

    tasks = np.empty((8, 2), np.int64)
    ntask = 0
    if nz == 0:
        for k in range(3):
            tasks[ntask, 0] = t0
            tasks[ntask, 1] = k
            ntask += 1
        if want:
            for k in range(3):
                mark[TV[t0, k]] = 1
    elif nz == 1:
        k = 0
        while o[k] != 0:
            k += 1
        if want:
            for i in range(3):
                mark[TV[t0, i]] = 1
        tasks[0, 0] = t0
        tasks[0, 1] = (k + 1) % 3
        tasks[1, 0] = t0
        tasks[1, 1] = (k + 2) % 3
        ntask = 2
        u = TN[t0, k]
        if u < 0:
            start[0] = START_BOUNDARY_EDGE
            start[2] = TE[t0, k]
        else:
            e = TE[t0, k]
            m = 0
            while TE[u, m] != e:
                m += 1
            eta += 1
            tasks[2, 0] = u
            tasks[2, 1] = (m + 1) % 3
            tasks[3, 0] = u
            tasks[3, 1] = (m + 2) % 3
            ntask = 4
            if want:
                mark[TV[u, m]] = 1
    else:
        k = 0
        while o[k] == 0:
            k += 1
        v = TV[t0, k]
        # rotate cw to the fan's boundary spoke
        f = t0
        i = k
        while True:
            g = TN[f, (i + 2) % 3]
            if g < 0:
                break
            j = 0
            while TV[g, j] != v:
                j += 1
            f = g
            i = j
        start[0] = START_VERTEX
        start[1] = v
        start[2] = TE[f, (i + 2) % 3]
        while True:
            if ntask == tasks.shape[0]:
                tasks = _grow_rows(tasks)
            tasks[ntask, 0] = f
            tasks[ntask, 1] = i
            ntask += 1
            if want:
                for j in range(3):
                    mark[TV[f, j]] = 1
            g = TN[f, (i + 1) % 3]
            if g < 0:
                start[3] = TE[f, (i + 1) % 3]
                break
            eta += 1
            j = 0
            while TV[g, j] != v:
                j += 1
            f = g
            i = j

    for s in range(ntask):
        t = tasks[s, 0]
        k = tasks[s, 1]
        stack[0, 0] = t
        stack[0, 1] = k
        stack[0, 2] = TV[t, (k + 1) % 3]
        stack[0, 3] = TV[t, (k + 2) % 3]
        sp = 1
        while sp > 0:
            sp -= 1
            t = stack[sp, 0]
            k = stack[sp, 1]
            rr = stack[sp, 2]
            ll = stack[sp, 3]
            a = TV[t, (k + 1) % 3]
            b = TV[t, (k + 2) % 3]
            nb = TN[t, k]
            kind = -1
            if nb < 0:
                kind = OBSTACLE
            elif limited and _out_of_range(qx, qy, P, a, b, d2):
                kind = RANGE
            if kind >= 0:
                if npc == pieces.shape[0]:
                    pieces = _grow_rows(pieces)
                pieces[npc, 0] = TE[t, k]
                pieces[npc, 1] = kind
                pieces[npc, 2] = a
                pieces[npc, 3] = b
                pieces[npc, 4] = rr
                pieces[npc, 5] = ll
                npc += 1
                continue
            eta += 1
            e = TE[t, k]
            j = 0
            while TE[nb, j] != e:
                j += 1
            w = TV[nb, j]
            sr = orient(qx, qy, P[rr, 0], P[rr, 1], P[w, 0], P[w, 1])
            sl = orient(qx, qy, P[ll, 0], P[ll, 1], P[w, 0], P[w, 1])
            if sp + 2 > stack.shape[0]:
                stack = _grow_rows(stack)
            if sr < 0:
                stack[sp, 0] = nb
                stack[sp, 1] = (j + 2) % 3
                stack[sp, 2] = rr
                stack[sp, 3] = ll
                sp += 1
            elif sl > 0:
                stack[sp, 0] = nb
                stack[sp, 1] = (j + 1) % 3
                stack[sp, 2] = rr
                stack[sp, 3] = ll
                sp += 1
            else:
                if want:
                    mark[w] = 1
                # push the ccw child first so the cw child is handled first
                if sl < 0:
                    stack[sp, 0] = nb
                    stack[sp, 1] = (j + 2) % 3
                    stack[sp, 2] = w
                    stack[sp, 3] = ll
                    sp += 1
                if sr > 0:
                    stack[sp, 0] = nb
                    stack[sp, 1] = (j + 1) % 3
                    stack[sp, 2] = rr
                    stack[sp, 3] = w
                    sp += 1
    return pieces, npc, eta, start


# ---------------------------------------------------------------- assembly


@njit(cache=True)
def _same_vertex(vk, r1, r2, i, k, a1, a2):
    return vk[i] == k and r1[i] == a1 and r2[i] == a2


@njit(cache=True)
def assemble(pieces, npc, start, EV):
    """Turn terminal pieces into a closed ccw vertex loop (no coordinates).

    Returns ``(vk, vr1, vr2, ek, er)``: vertex kind and references (map
    vertex id, or edge id and ray vertex id), and the kind/edge id of the
    edge leaving each vertex.
    """
    cap = 2 * npc + 4
    vk = np.empty(cap, np.int64)
    vr1 = np.empty(cap, np.int64)
    vr2 = np.empty(cap, np.int64)
    ik = np.empty(cap, np.int64)  # kind of the edge arriving at each vertex
    ir = np.empty(cap, np.int64)
    m = 0
    for p in range(npc):
        e = pieces[p, 0]
        kind = pieces[p, 1]
        a = pieces[p, 2]
        b = pieces[p, 3]
        rr = pieces[p, 4]
        ll = pieces[p, 5]
        if rr == a:
            k1, x1, y1 = MAP_VERTEX, a, -1
        else:
            k1, x1, y1 = EDGE_INTERSECTION, e, rr
        if ll == b:
            k2, x2, y2 = MAP_VERTEX, b, -1
        else:
            k2, x2, y2 = EDGE_INTERSECTION, e, ll
        if not (m > 0 and _same_vertex(vk, vr1, vr2, m - 1, k1, x1, y1)):
            vk[m] = k1
            vr1[m] = x1
            vr2[m] = y1
            ik[m] = FREE
            ir[m] = -1
            m += 1
        vk[m] = k2
        vr1[m] = x2
        vr2[m] = y2
        ik[m] = kind
        ir[m] = e
        m += 1

    closing_kind = FREE
    closing_ref = -1
    if start[0] == START_VERTEX:
        v = start[1]
        ein = start[2]
        eout = start[3]
        kind_out = FREE
        ref_out = -1
        if vk[m - 1] == MAP_VERTEX and (EV[eout, 0] == vr1[m - 1] or EV[eout, 1] == vr1[m - 1]):
            kind_out = OBSTACLE
            ref_out = eout
        vk[m] = MAP_VERTEX
        vr1[m] = v
        vr2[m] = -1
        ik[m] = kind_out
        ir[m] = ref_out
        m += 1
        if vk[0] == MAP_VERTEX and (EV[ein, 0] == vr1[0] or EV[ein, 1] == vr1[0]):
            closing_kind = OBSTACLE
            closing_ref = ein
    elif start[0] == START_BOUNDARY_EDGE:
        es = start[2]
        if (vk[0] == MAP_VERTEX and vk[m - 1] == MAP_VERTEX
                and (vr1[0] == EV[es, 0] or vr1[0] == EV[es, 1])
                and (vr1[m - 1] == EV[es, 0] or vr1[m - 1] == EV[es, 1])):
            closing_kind = OBSTACLE
            closing_ref = es
    else:
        while m > 1 and _same_vertex(vk, vr1, vr2, m - 1, vk[0], vr1[0], vr2[0]):
            closing_kind = ik[m - 1]
            closing_ref = ir[m - 1]
            m -= 1

    ek = np.empty(m, np.int64)
    er = np.empty(m, np.int64)
    for i in range(m - 1):
        ek[i] = ik[i + 1]
        er[i] = ir[i + 1]
    ek[m - 1] = closing_kind
    er[m - 1] = closing_ref
    return vk[:m].copy(), vr1[:m].copy(), vr2[:m].copy(), ek, er


@njit(cache=True)
def ray_hit(qx, qy, rx, ry, ax, ay, bx, by):
    """Point of segment ab on the line through q and r (clamped to ab)."""
    dx = rx - qx
    dy = ry - qy
    ex = bx - ax
    ey = by - ay
    den = dx * ey - dy * ex
    if den == 0.0:
        if (ax - qx) * (ax - qx) + (ay - qy) * (ay - qy) <= (bx - qx) * (bx - qx) + (by - qy) * (by - qy):
            return ax, ay
        return bx, by
    s = ((ax - qx) * dy - (ay - qy) * dx) / den
    if s < 0.0:
        s = 0.0
    elif s > 1.0:
        s = 1.0
    return ax + s * ex, ay + s * ey


@njit(cache=True)
def resolve(vk, vr1, vr2, qx, qy, P, EV):
    m = vk.shape[0]
    xy = np.empty((m, 2))
    for i in range(m):
        if vk[i] == MAP_VERTEX:
            xy[i, 0] = P[vr1[i], 0]
            xy[i, 1] = P[vr1[i], 1]
        else:
            e = vr1[i]
            r = vr2[i]
            a = EV[e, 0]
            b = EV[e, 1]
            x, y = ray_hit(qx, qy, P[r, 0], P[r, 1], P[a, 0], P[a, 1], P[b, 0], P[b, 1])
            xy[i, 0] = x
            xy[i, 1] = y
    return xy


# ---------------------------------------------------------------- circle clip


@njit(cache=True)
def clip_circle(xy, vk, vr1, vr2, ek, er, qx, qy, d):
    """Intersect a region, star-shaped about q, with the disc (q, d).

    Edges replaced by the circle get kind ``ARC``; new vertices on the
    circle get kind ``ARC_POINT``.
    """
    m = xy.shape[0]
    d2 = d * d
    cap = 2 * m + 2
    oxy = np.empty((cap, 2))
    ok = np.empty(cap, np.int64)
    o1 = np.empty(cap, np.int64)
    o2 = np.empty(cap, np.int64)
    oek = np.empty(cap, np.int64)
    oer = np.empty(cap, np.int64)
    n = 0
    inside = np.empty(m, np.bool_)
    for i in range(m):
        dx = xy[i, 0] - qx
        dy = xy[i, 1] - qy
        inside[i] = dx * dx + dy * dy <= d2
    for i in range(m):
        j = (i + 1) % m
        ax = xy[i, 0] - qx
        ay = xy[i, 1] - qy
        ex = xy[j, 0] - xy[i, 0]
        ey = xy[j, 1] - xy[i, 1]
        t0 = 0.0
        t1 = 1.0
        if not (inside[i] and inside[j]):
            A = ex * ex + ey * ey
            if A == 0.0:
                continue
            B = ax * ex + ay * ey
            C = ax * ax + ay * ay - d2
            disc = B * B - A * C
            if disc < 0.0:
                if not (inside[i] or inside[j]):
                    continue
                disc = 0.0
            sq = math.sqrt(disc)
            # stable roots of A t^2 + 2 B t + C = 0
            qq = -(B + sq) if B >= 0.0 else -B + sq
            if qq == 0.0:
                lo = 0.0
                hi = 0.0
            else:
                lo = min(qq / A, C / qq)
                hi = max(qq / A, C / qq)
            if inside[i]:
                t1 = min(max(hi, 0.0), 1.0)
            elif inside[j]:
                t0 = min(max(lo, 0.0), 1.0)
            elif 0.0 < lo and lo < hi and hi < 1.0:
                t0 = lo
                t1 = hi
            else:
                continue
        # a point cut from a shadow edge remembers the map vertex its ray passes
        ray = -1
        if ek[i] == FREE:
            if vk[i] == EDGE_INTERSECTION and vk[j] == MAP_VERTEX and vr2[i] == vr1[j]:
                ray = vr1[j]
            elif vk[j] == EDGE_INTERSECTION and vk[i] == MAP_VERTEX and vr2[j] == vr1[i]:
                ray = vr1[i]
        if n + 2 > cap:
            cap *= 2
            oxy = _grow_rows(oxy)
            ok = _grow1(ok)
            o1 = _grow1(o1)
            o2 = _grow1(o2)
            oek = _grow1(oek)
            oer = _grow1(oer)
        if inside[i]:
            oxy[n, 0] = xy[i, 0]
            oxy[n, 1] = xy[i, 1]
            ok[n] = vk[i]
            o1[n] = vr1[i]
            o2[n] = vr2[i]
        else:
            oxy[n, 0] = xy[i, 0] + t0 * ex
            oxy[n, 1] = xy[i, 1] + t0 * ey
            ok[n] = ARC_POINT
            o1[n] = -1
            o2[n] = ray
        oek[n] = ek[i]
        oer[n] = er[i]
        n += 1
        if not inside[j]:
            oxy[n, 0] = xy[i, 0] + t1 * ex
            oxy[n, 1] = xy[i, 1] + t1 * ey
            ok[n] = ARC_POINT
            o1[n] = -1
            o2[n] = ray
            oek[n] = ARC
            oer[n] = -1
            n += 1
    if n == 0:
        oxy[0, 0] = qx + d
        oxy[0, 1] = qy
        ok[0] = ARC_POINT
        o1[0] = -1
        o2[0] = -1
        oek[0] = ARC
        oer[0] = -1
        n = 1
    return oxy[:n].copy(), ok[:n].copy(), o1[:n].copy(), o2[:n].copy(), oek[:n].copy(), oer[:n].copy()


@njit(cache=True)
def region_area(xy, ek, cx, cy, radius):
    m = xy.shape[0]
    s = 0.0
    x0 = xy[0, 0]
    y0 = xy[0, 1]
    for i in range(1, m - 1):
        s += (xy[i, 0] - x0) * (xy[i + 1, 1] - y0) - (xy[i + 1, 0] - x0) * (xy[i, 1] - y0)
    s *= 0.5
    for i in range(m):
        if ek[i] == ARC:
            j = (i + 1) % m
            a0 = math.atan2(xy[i, 1] - cy, xy[i, 0] - cx)
            a1 = math.atan2(xy[j, 1] - cy, xy[j, 0] - cx)
            sw = arc_sweep(a0, a1, m)
            s += 0.5 * radius * radius * (sw - math.sin(sw))
    return s


@njit(cache=True)
def arc_sweep(a0, a1, m):
    two_pi = 2.0 * math.pi
    if m == 1:
        return two_pi
    sw = (a1 - a0) % two_pi
    if sw < 0.0:
        sw += two_pi
    if two_pi - sw < 1e-12:
        sw = 0.0
    return sw


# ---------------------------------------------------------------- walking


@njit(cache=True)
def _fan_find(v, px, py, P, TV, TN, VT):
    """Triangle around vertex v whose closed corner at v contains direction p - v."""
    vx = P[v, 0]
    vy = P[v, 1]
    f = VT[v]
    i = 0
    while TV[f, i] != v:
        i += 1
    # rotate cw to the boundary spoke, then sweep ccw
    while True:
        g = TN[f, (i + 2) % 3]
        if g < 0:
            break
        j = 0
        while TV[g, j] != v:
            j += 1
        f = g
        i = j
    while True:
        a = TV[f, (i + 1) % 3]
        b = TV[f, (i + 2) % 3]
        if (orient(vx, vy, P[a, 0], P[a, 1], px, py) >= 0
                and orient(vx, vy, px, py, P[b, 0], P[b, 1]) >= 0):
            return f, i
        g = TN[f, (i + 1) % 3]
        if g < 0:
            return -1, -1
        j = 0
        while TV[g, j] != v:
            j += 1
        f = g
        i = j


@njit(cache=True)
def walk_visible(qx, qy, px, py, tq, P, TV, TN, VT):
    """Directed walk from q toward p; True iff segment qp stays in the map.

    Touching the boundary is allowed; leaving the map is not.
    """
    if qx == px and qy == py:
        return True
    t = tq
    prev = -1
    at_vertex = -1
    for k in range(3):
        v = TV[t, k]
        if P[v, 0] == qx and P[v, 1] == qy:
            at_vertex = v
    if at_vertex < 0:
        if in_triangle(P, TV, t, px, py):
            return True
        s = np.empty(3, np.int64)
        for k in range(3):
            v = TV[t, k]
            s[k] = orient(qx, qy, px, py, P[v, 0], P[v, 1])
        for k in range(3):
            v = TV[t, k]
            if s[k] == 0 and (P[v, 0] - qx) * (px - qx) + (P[v, 1] - qy) * (py - qy) > 0.0:
                at_vertex = v
                break
        if at_vertex < 0:
            nxt = -1
            for k in range(3):
                # exit edge: ccw edge a -> b with a right of qp and b left of it
                if s[(k + 1) % 3] < 0 and s[(k + 2) % 3] > 0:
                    nxt = k
                    break
            if nxt < 0 or TN[t, nxt] < 0:
                return False
            prev = t
            t = TN[t, nxt]
    while True:
        if at_vertex >= 0:
            v = at_vertex
            f, fi = _fan_find(v, px, py, P, TV, TN, VT)
            if f < 0:
                return False
            if in_triangle(P, TV, f, px, py):
                return True
            a = TV[f, (fi + 1) % 3]
            b = TV[f, (fi + 2) % 3]
            vx = P[v, 0]
            vy = P[v, 1]
            if orient(vx, vy, P[a, 0], P[a, 1], px, py) == 0:
                at_vertex = a
                continue
            if orient(vx, vy, px, py, P[b, 0], P[b, 1]) == 0:
                at_vertex = b
                continue
            if TN[f, fi] < 0:
                return False
            prev = f
            t = TN[f, fi]
            at_vertex = -1
        if in_triangle(P, TV, t, px, py):
            return True
        j = 0
        while TN[t, j] != prev:
            j += 1
        w = TV[t, j]
        sw = orient(qx, qy, px, py, P[w, 0], P[w, 1])
        if sw == 0:
            at_vertex = w
            continue
        k = (j + 1) % 3 if sw > 0 else (j + 2) % 3
        if TN[t, k] < 0:
            return False
        prev = t
        t = TN[t, k]
