"""Exact orientation predicate for use inside numba kernels.

A floating-point filter answers almost every call. When the filter cannot
certify the sign, the determinant is expanded into six exact products and
summed with expansion arithmetic, so the returned sign is always exact for
finite double inputs (barring overflow/underflow).
"""
import numpy as np
from numba import njit

_EPS = np.finfo(np.float64).eps / 2.0  # 2**-53
SPLITTER = 134217729.0  # 2**27 + 1
CCW_ERRBOUND_A = (3.0 + 16.0 * _EPS) * _EPS


@njit(cache=True, inline="always")
def _two_sum(a, b):
    x = a + b
    bv = x - a
    av = x - bv
    br = b - bv
    ar = a - av
    return x, ar + br


@njit(cache=True, inline="always")
def _split(a):
    c = SPLITTER * a
    abig = c - a
    ahi = c - abig
    return ahi, a - ahi


@njit(cache=True, inline="always")
def _two_product(a, b):
    x = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    err1 = x - ahi * bhi
    err2 = err1 - alo * bhi
    err3 = err2 - ahi * blo
    return x, alo * blo - err3


@njit(cache=True)
def _grow(e, n, b):
    # Shewchuk's Grow-Expansion with zero elimination; e[:n] is nonoverlapping
    # and sorted by increasing magnitude.
    q = b
    m = 0
    for i in range(n):
        q, h = _two_sum(q, e[i])
        if h != 0.0:
            e[m] = h
            m += 1
    if q != 0.0 or m == 0:
        e[m] = q
        m += 1
    return m


@njit(cache=True)
def orient2d_exact(ax, ay, bx, by, cx, cy):
    e = np.zeros(16)
    n = 0
    terms = (
        _two_product(ax, by),
        _two_product(-ax, cy),
        _two_product(bx, cy),
        _two_product(-bx, ay),
        _two_product(cx, ay),
        _two_product(-cx, by),
    )
    for hi, lo in terms:
        n = _grow(e, n, lo)
        n = _grow(e, n, hi)
    for i in range(n - 1, -1, -1):
        if e[i] > 0.0:
            return 1
        if e[i] < 0.0:
            return -1
    return 0


@njit(cache=True)
def orient(ax, ay, bx, by, cx, cy):
    """Sign of det[b-a, c-a]: 1 for ccw, -1 for cw, 0 for collinear."""
    detl = (bx - ax) * (cy - ay)
    detr = (by - ay) * (cx - ax)
    det = detl - detr
    bound = CCW_ERRBOUND_A * (abs(detl) + abs(detr))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    if detl == 0.0 and detr == 0.0:
        return 0
    return orient2d_exact(ax, ay, bx, by, cx, cy)


@njit(cache=True)
def orient_pts(P, i, j, k):
    return orient(P[i, 0], P[i, 1], P[j, 0], P[j, 1], P[k, 0], P[k, 1])
