import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from teamesh.mapio import make_map
from teamesh.maps import random_convex_polygon, random_map_with_holes, random_simple_polygon
from teamesh.meshopt import (BOUNDARY, FORBIDDEN, INTERIOR, PENALTY, MwtConfig,
                             NotTriangulableError, candidate_edges, classify_pairs,
                             compute_weights, mesh_total_weight, mwt_holes, mwt_simple,
                             penalized_pairs, read_weights_csv)
from teamesh.oracles import (oracle_enumerate_triangulations, oracle_is_diagonal,
                             oracle_segment_in_polygon)
from teamesh.trimesh import build_buckets, build_cdt, validate_mesh

from conftest import SQUARE, square_with_hole


def test_classify_square_and_ring():
    C = classify_pairs(make_map(SQUARE))
    assert C[0, 2] == C[1, 3] == INTERIOR
    assert C[0, 1] == BOUNDARY
    ring = square_with_hole()
    C = classify_pairs(ring)
    # opposite outer corners: the hole is in the way
    assert C[0, 2] == FORBIDDEN and C[1, 3] == FORBIDDEN
    names = {(i, j): c for i, j, c in candidate_edges(ring)}
    assert names[(0, 2)] == "forbidden" and names[(0, 1)] == "boundary"


@pytest.mark.parametrize("seed", range(6))
def test_classify_matches_oracles(seed):
    pm = random_simple_polygon(16, seed) if seed % 2 else random_map_with_holes(16, 2, seed)
    C = classify_pairs(pm)
    bnd = pm.boundary_edge_set
    for i in range(pm.n):
        for j in range(i + 1, pm.n):
            if (i, j) in bnd:
                assert C[i, j] == BOUNDARY
                continue
            diag = oracle_is_diagonal(pm, i, j)
            assert (C[i, j] == INTERIOR) == diag, (i, j)
            if diag:  # two independent oracles agree on interior diagonals
                assert oracle_segment_in_polygon(pm, (pm.vertices[i], pm.vertices[j]))
            assert C[i, j] == C[j, i]


def test_weights_sentinels_and_symmetry():
    pm = square_with_hole()
    for scheme in ("minlt", "maxlt", "minvt", "maxvt"):
        w = compute_weights(pm, scheme=scheme, d_samp=1.0)
        assert (w.W == w.W.T).all()
        assert w[0, 1] == 0.0
        assert w[0, 2] == math.inf
        finite = np.isfinite(w.W) & (w.classes == INTERIOR)
        assert finite.sum() == (w.classes == INTERIOR).sum()
        if scheme.startswith("max"):
            assert (w.W[finite] < 0).all()
    d = compute_weights(pm, scheme="dminvt", d_samp=1.0, d=1.5)
    full = compute_weights(pm, scheme="minvt", d_samp=1.0)
    m = d.classes == INTERIOR
    assert (d.W[m] <= full.W[m] + 1e-9).all()
    with pytest.raises(ValueError):
        compute_weights(pm, scheme="dminvt")
    with pytest.raises(ValueError):
        compute_weights(pm, scheme="minvt", d=3.0)
    with pytest.raises(ValueError):
        compute_weights(pm, scheme="bogus")


def test_minlt_is_length():
    pm = random_simple_polygon(12, 0)
    w = compute_weights(pm, scheme="minlt")
    for i, j in w.interior_pairs():
        assert w[i, j] == math.hypot(*(pm.vertices[i] - pm.vertices[j]))


def test_convex_minvt_is_area():
    pm = random_convex_polygon(9, 1)
    w = compute_weights(pm, scheme="minvt", d_samp=0.7)
    for i, j in w.interior_pairs():
        assert w[i, j] == pytest.approx(pm.area, rel=1e-9)
    mesh = build_cdt(pm)
    assert mesh_total_weight(mesh, w) == pytest.approx((pm.n - 3) * pm.area, rel=1e-9)


def test_penalty_longest_half():
    pm = random_map_with_holes(16, 2, 4)
    w = compute_weights(pm, scheme="minvt", d_samp=2.0, r_pen=50)
    pairs = w.interior_pairs()
    L = {(i, j): math.hypot(*(pm.vertices[i] - pm.vertices[j])) for i, j in pairs}
    k = math.ceil(len(pairs) / 2)
    want = sorted(L, key=lambda p: (-L[p], p))[:k]
    assert set(w.penalized) == set(want)
    for i, j in want:
        assert w[i, j] == PENALTY + L[i, j]
    assert penalized_pairs(pm, w.classes, 0) == []
    with pytest.raises(ValueError):
        penalized_pairs(pm, w.classes, 120)
    mx = w.negated()
    for i, j in want:  # penalties stay positive when maximizing
        assert mx[i, j] == PENALTY + L[i, j]


def test_weights_csv_round_trip():
    pm = random_map_with_holes(14, 1, 2)
    w = compute_weights(pm, scheme="minlt")
    text = w.to_csv()
    assert text.splitlines()[0] == "i,j,class,weight"
    back = read_weights_csv(text, pm.n)
    assert np.array_equal(back.W, w.W) and np.array_equal(back.classes, w.classes)


def test_mesh_total_weight_direct_sum():
    pm = random_map_with_holes(20, 2, 1)
    mesh = build_cdt(pm)
    w = compute_weights(pm, scheme="minlt")
    direct = math.fsum(math.hypot(*(pm.vertices[a] - pm.vertices[b])) for a, b in mesh.interior_edges)
    assert mesh_total_weight(mesh, w) == pytest.approx(direct, rel=1e-12)
    sq = make_map(SQUARE)
    W = np.full((4, 4), np.inf)
    W[0, 2] = W[2, 0] = 2.0
    W[1, 3] = W[3, 1] = 7.0
    m = build_cdt(sq)
    (a, b), = m.interior_edges
    assert mesh_total_weight(m, W) == W[a, b]


def test_mwt_simple_triangle_and_quad():
    w = np.array([[0, 1, 2], [1, 0, 3], [2, 3, 0]], float)
    tris, nu = mwt_simple(w)
    assert tris == [(0, 1, 2)] and nu == 3.0
    w = np.zeros((4, 4))
    w[0, 2] = w[2, 0] = 1.0
    w[1, 3] = w[3, 1] = 5.0
    tris, nu = mwt_simple(w)
    assert sorted(tris) == [(0, 1, 2), (0, 2, 3)] and nu == 1.0
    w[0, 2] = w[2, 0] = np.inf
    tris, nu2 = mwt_simple(w)
    assert nu2 - nu == 4.0
    w[1, 3] = w[3, 1] = np.inf
    with pytest.raises(NotTriangulableError):
        mwt_simple(w)


def _enum_min(pm, W):
    best = math.inf
    for diag in oracle_enumerate_triangulations(pm):
        best = min(best, math.fsum(W[i, j] for i, j in diag))
    return best


@pytest.mark.parametrize("seed", range(25))
def test_mwt_simple_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 11))
    pm = random_simple_polygon(n, seed)
    C = classify_pairs(pm)
    W = rng.integers(1, 50, (n, n)).astype(float)
    W = np.triu(W, 1) + np.triu(W, 1).T
    bnd = W.copy()
    W[C == FORBIDDEN] = np.inf
    np.fill_diagonal(W, 0)
    _, nu = mwt_simple(W)
    # offset: half the boundary weights are paid by every triangulation
    half = 0.5 * sum(bnd[i, j] for i, j in pm.boundary_edge_set)
    assert nu - half == _enum_min(pm, W)


@given(st.integers(0, 10 ** 6))
def test_mwt_simple_offset_identity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    pm = random_convex_polygon(n, seed)
    W = rng.integers(0, 20, (n, n)).astype(float)
    W = W + W.T
    tris, nu = mwt_simple(W)
    direct = sum(0.5 * (W[a, b] + W[b, c] + W[c, a]) for a, b, c in tris)
    assert nu == direct
    diag = {(min(a, b), max(a, b)) for t in tris for a, b in zip(t, t[1:] + t[:1])} - \
        {(min(i, j), max(i, j)) for i, j in pm.boundary_edge_set}
    half = 0.5 * sum(W[i, j] for i, j in pm.boundary_edge_set)
    assert nu == sum(W[i, j] for i, j in diag) + half


def test_mwt_config_validation():
    with pytest.raises(ValueError):
        MwtConfig(n_P=2)
    with pytest.raises(ValueError):
        MwtConfig(it_max=-1)
    with pytest.raises(ValueError):
        MwtConfig(t_max=0)
    assert MwtConfig() == MwtConfig(450, 200, 6.0, 13)


def test_mwt_holes_itmax_zero_is_cdt():
    pm = random_map_with_holes(20, 2, 3)
    mesh, log = mwt_holes(pm, compute_weights(pm, scheme="minlt"), MwtConfig(it_max=0))
    assert mesh.same_as(build_cdt(pm))
    assert len(log.rows) == 1


@pytest.mark.parametrize("scheme", ["minlt", "maxlt", "minvt", "maxvt"])
def test_mwt_holes_monotone_and_valid(scheme):
    pm = random_map_with_holes(24, 3, 7)
    w = compute_weights(pm, scheme=scheme, d_samp=2.0)
    cdt = build_cdt(pm)
    mesh, log = mwt_holes(pm, w, MwtConfig(n_P=12, it_max=40, t_max=60))
    ws = log.weights
    assert all(b <= a for a, b in zip(ws, ws[1:]))
    assert validate_mesh(mesh, pm).ok
    assert mesh_total_weight(mesh, w) == pytest.approx(ws[-1])
    assert mesh_total_weight(mesh, w) <= mesh_total_weight(cdt, w)
    assert log.to_csv().splitlines()[0] == "iter,elapsed_s,total_weight,polygon_size"
    assert max(r[3] for r in log.rows) <= 13


def test_mwt_holes_deterministic():
    pm = random_map_with_holes(24, 3, 8)
    w = compute_weights(pm, scheme="minlt")
    a, la = mwt_holes(pm, w, MwtConfig(it_max=30, t_max=60, seed=5))
    b, lb = mwt_holes(pm, w, MwtConfig(it_max=30, t_max=60, seed=5))
    assert a.same_as(b) and la.weights == lb.weights and la.seed == 5


def test_maxvt_not_below_cdt_under_minvt_weights():
    pm = random_map_with_holes(24, 3, 2)
    wv = compute_weights(pm, scheme="minvt", d_samp=2.0)
    cdt = build_cdt(pm)
    mx, _ = mwt_holes(pm, wv.negated(), MwtConfig(it_max=40, t_max=60))
    mn, _ = mwt_holes(pm, wv, MwtConfig(it_max=40, t_max=60))
    assert mesh_total_weight(mn, wv) <= mesh_total_weight(cdt, wv) <= mesh_total_weight(mx, wv)


@pytest.mark.parametrize("outer, hole", [
    ([(0, 0), (6, 0), (6, 5), (0, 5)], [(2, 2), (3, 3.2), (4, 1.8)]),
    ([(0, 0), (5, -1), (7, 3), (3, 6), (-1, 4)], [(2, 2), (2.5, 3), (3.5, 2.6), (3, 1.5)]),
])
def test_mwt_holes_reaches_global_optimum_on_small_map(outer, hole):
    pm = make_map(outer, [hole])
    w = compute_weights(pm, scheme="minlt")
    mesh, _ = mwt_holes(pm, w, MwtConfig(n_P=None, it_max=300, t_max=60, seed=1))
    assert mesh_total_weight(mesh, w) == pytest.approx(_enum_min(pm, w.W), rel=1e-12)
