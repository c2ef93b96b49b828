import math

import numpy as np
import pytest
import shapely
from hypothesis import given
from hypothesis import strategies as st
from shapely.geometry import Point as SPoint
from shapely.geometry import Polygon

from teamesh.mapio import make_map
from teamesh.maps import random_convex_polygon, random_map_with_holes, random_simple_polygon
from teamesh.meshopt import mwt_simple
from teamesh.oracles import (oracle_expansion_count, oracle_segment_in_polygon,
                             oracle_visibility_sweep, polygon_area_plain)
from teamesh.trimesh import build_buckets, build_cdt, mesh_from_triangles
from teamesh.visibility import (EDGE_INTERSECTION, INF, MAP_VERTEX, Engine, OutsideMapError,
                                clip_to_circle, finalize_region, is_visible, query,
                                segment_samples, segment_visibility_region, visibility_region,
                                visible_vertices)

from conftest import SQUARE, l_shape, points_in, square_with_hole


def engine(pm):
    mesh = build_cdt(pm)
    return mesh, build_buckets(mesh)


def random_triangulation(pm, seed):
    """Arbitrary triangulation of a convex polygon: optimal for random weights."""
    rng = np.random.default_rng(seed)
    W = rng.uniform(1, 2, (pm.n, pm.n))
    W = W + W.T
    local, _ = mwt_simple(W)
    return mesh_from_triangles(pm, local)


@pytest.mark.parametrize("seed", range(5))
def test_convex_whole_polygon_and_eta(seed):
    pm = random_convex_polygon(8 + 4 * seed, seed)
    for mesh in (build_cdt(pm), random_triangulation(pm, seed)):
        g = build_buckets(mesh)
        for q in points_in(pm, 30, seed):
            reg, st_ = query(mesh, g, q)
            assert st_.eta == pm.n - 3
            assert reg.area == pytest.approx(pm.area, rel=1e-12)
            assert not (reg.vertex_kind == EDGE_INTERSECTION).any()


def test_early_exit_gives_disc():
    pm = make_map([(0, 0), (10, 0), (5, 9)])
    mesh, g = engine(pm)
    reg, st_ = query(mesh, g, (5, 3), d=1.0)
    assert st_.eta == 0
    assert reg.area == pytest.approx(math.pi, rel=1e-12)
    sq = make_map([(0, 0), (4, 0), (4, 4), (0, 4)])
    mesh, g = engine(sq)
    reg, _ = query(mesh, g, (2, 2), d=1.0)
    assert reg.area == pytest.approx(math.pi, rel=1e-12)


def test_l_shape_hand_computed():
    pm = l_shape()
    mesh, g = engine(pm)
    reg, _ = query(mesh, g, (1.5, 0.25))
    # the reflex corner (1,1) hides the triangle (1,1),(1,2),(1/3,2)
    assert reg.area == pytest.approx(3 - 1 / 3, rel=1e-12)
    hits = reg.xy[reg.vertex_kind == EDGE_INTERSECTION]
    assert len(hits) == 1
    assert np.allclose(hits[0], (1 / 3, 2), atol=1e-12)
    assert reg.vertex_ray[reg.vertex_kind == EDGE_INTERSECTION][0] == 3  # through vertex (1,1)


def test_finalize_identity_without_intersections():
    pm = random_convex_polygon(10, 1)
    mesh, g = engine(pm)
    ab, _ = visibility_region(mesh, g, (0.1, 0.2))
    reg = finalize_region(ab)
    assert (reg.vertex_kind == MAP_VERTEX).all()
    assert np.array_equal(reg.xy, pm.vertices[reg.vertex_ref])


@pytest.mark.parametrize("kind, seed", [("simple", s) for s in range(6)] + [("holes", s) for s in range(6)])
def test_area_matches_sweep_oracle(kind, seed):
    pm = random_simple_polygon(30, seed) if kind == "simple" else random_map_with_holes(30, 3, seed)
    mesh, g = engine(pm)
    for q in points_in(pm, 25, seed):
        reg, _ = query(mesh, g, q)
        ref = polygon_area_plain(oracle_visibility_sweep(pm, q))
        assert reg.area == pytest.approx(ref, rel=1e-6)


@pytest.mark.parametrize("seed", range(4))
def test_region_is_star_shaped(seed):
    pm = random_map_with_holes(30, 3, seed)
    mesh, g = engine(pm)
    for q in points_in(pm, 20, seed):
        for d in (INF, 3.0):
            reg, _ = query(mesh, g, q, d)
            assert reg.vertex_visibility(mesh, g).all()
            if d < INF:
                assert (np.hypot(*(reg.xy - q).T) <= d * (1 + 1e-12)).all()


@pytest.mark.parametrize("seed", range(4))
def test_eta_matches_independent_recount(seed):
    pm = random_map_with_holes(30, 3, seed)
    mesh, g = engine(pm)
    for q in points_in(pm, 50, seed):
        for d in (INF, 2.0, 6.0):
            assert query(mesh, g, q, d)[1].eta == oracle_expansion_count(mesh, q, d)


def test_square_with_hole_recount():
    pm = square_with_hole()
    mesh, g = engine(pm)
    for q in points_in(pm, 100, 0):
        assert query(mesh, g, q)[1].eta == oracle_expansion_count(mesh, q)


@pytest.mark.parametrize("seed", range(4))
def test_dtea_matches_clipped_tea(seed):
    pm = random_map_with_holes(30, 3, seed)
    mesh, g = engine(pm)
    for q in points_in(pm, 20, seed):
        full, _ = query(mesh, g, q)
        for d in (1.0, 4.0, 16.0):
            lim, _ = query(mesh, g, q, d)
            assert lim.area == pytest.approx(clip_to_circle(full, q, d).area, rel=1e-9)
        big, _ = query(mesh, g, q, pm.diameter)
        assert np.array_equal(big.vertex_kind, full.vertex_kind)
        assert np.array_equal(big.vertex_ref, full.vertex_ref)
        assert np.array_equal(big.edge_kind, full.edge_kind)


def test_clip_examples():
    sq = make_map([(0, 0), (4, 0), (4, 4), (0, 4)])
    mesh, g = engine(sq)
    full, _ = query(mesh, g, (2, 2))
    assert clip_to_circle(full, (2, 2), 1.0).area == pytest.approx(math.pi, rel=1e-12)
    same = clip_to_circle(full, (2, 2), 10.0)
    assert same.area == pytest.approx(16.0) and np.array_equal(same.xy, full.xy)
    with pytest.raises(ValueError):
        clip_to_circle(full, (2, 2), 0.0)


@pytest.mark.parametrize("seed", range(3))
def test_clip_vs_polygonized_oracle(seed):
    pm = random_map_with_holes(30, 3, seed)
    mesh, g = engine(pm)
    for q in points_in(pm, 10, seed):
        full, _ = query(mesh, g, q)
        poly = Polygon(oracle_visibility_sweep(pm, q))
        for d in (2.0, 5.0):
            got = clip_to_circle(full, q, d).area
            ref = poly.intersection(SPoint(q).buffer(d, quad_segs=4096)).area
            assert got == pytest.approx(ref, rel=1e-6)


@given(st.integers(0, 10 ** 6), st.floats(0.5, 20), st.floats(0.5, 20))
def test_area_monotone_in_d(seed, d1, d2):
    pm = random_map_with_holes(20, 2, seed % 50)
    mesh, g = engine(pm)
    q = points_in(pm, 1, seed)[0]
    lo, hi = sorted((d1, d2))
    assert query(mesh, g, q, lo)[0].area <= query(mesh, g, q, hi)[0].area * (1 + 1e-12)


def test_outside_query_raises():
    pm = square_with_hole()
    mesh, g = engine(pm)
    with pytest.raises(OutsideMapError):
        query(mesh, g, (2, 2))
    with pytest.raises(OutsideMapError):
        query(mesh, g, (9, 9))


def test_query_on_boundary_is_inside():
    pm = square_with_hole()
    mesh, g = engine(pm)
    reg, _ = query(mesh, g, (0.5, 0.0))
    assert reg.area > 0


def test_is_visible_examples():
    pm = square_with_hole()
    mesh, g = engine(pm)
    assert is_visible(mesh, g, (0.5, 0.5), (0.5, 0.5))
    assert not is_visible(mesh, g, (0.5, 2.0), (3.5, 2.0))
    assert is_visible(mesh, g, (0.5, 0.5), (3.5, 0.5))
    assert is_visible(mesh, g, (0, 0), (4, 0))  # along the boundary
    assert not is_visible(mesh, g, (0.5, 0.5), (3.5, 0.5), d=1.0)


@pytest.mark.parametrize("seed", range(3))
def test_is_visible_matches_oracle(seed):
    pm = random_map_with_holes(30, 3, seed)
    mesh, g = engine(pm)
    pts = points_in(pm, 400, seed)
    for p, q in zip(pts[::2], pts[1::2]):
        assert is_visible(mesh, g, p, q) == oracle_segment_in_polygon(pm, (p, q))


@pytest.mark.parametrize("seed", range(3))
def test_visible_vertices_matches_oracle(seed):
    pm = random_map_with_holes(30, 3, seed)
    mesh, g = engine(pm)
    for q in points_in(pm, 10, seed):
        want = {v for v in range(pm.n) if oracle_segment_in_polygon(pm, (q, pm.vertices[v]))}
        assert visible_vertices(mesh, g, q) == want
        near = visible_vertices(mesh, g, q, d=3.0)
        assert near == {v for v in want if np.hypot(*(pm.vertices[v] - q)) <= 3.0}


def test_visible_vertices_convex():
    pm = random_convex_polygon(12, 3)
    mesh, g = engine(pm)
    assert visible_vertices(mesh, g, (0, 0)) == set(range(12))


def test_segment_samples():
    s = segment_samples((0, 0), (1, 0), 4.0)
    assert np.array_equal(s, [[0.5, 0.0]])
    s = segment_samples((0, 0), (10, 0), 4.0)
    assert len(s) == 3 and np.allclose(np.diff(s[:, 0]), 10 / 3)
    assert (np.diff(s[:, 0]) <= 4.0).all()
    with pytest.raises(ValueError):
        segment_samples((0, 0), (1, 0), 0.0)


def test_segment_region_convex_and_short_edge():
    pm = random_convex_polygon(10, 2)
    mesh, g = engine(pm)
    P = pm.vertices
    r = segment_visibility_region(mesh, g, (P[0], P[5]), 0.5)
    assert r.area == pytest.approx(pm.area, rel=1e-9)
    pm = l_shape()
    mesh, g = engine(pm)
    a, b = np.array([1.2, 0.2]), np.array([1.6, 0.4])
    d_samp = 2 * np.hypot(*(b - a))
    r = segment_visibility_region(mesh, g, (a, b), d_samp)
    mid, _ = query(mesh, g, 0.5 * (a + b))
    assert r.area == mid.area


def test_segment_region_outside_rejected():
    pm = square_with_hole()
    mesh, g = engine(pm)
    with pytest.raises(OutsideMapError):
        segment_visibility_region(mesh, g, ((0.5, 2.0), (3.5, 2.0)), 1.0)


def test_segment_region_converges_with_dense_sampling():
    # mean relative gap to a 100x denser sampling, over edges of several maps
    gaps = {}
    for seed in range(3):
        pm = random_map_with_holes(30, 3, seed)
        mesh, g = engine(pm)
        rng = np.random.default_rng(seed)
        ev = mesh.interior_edges
        for e in rng.choice(len(ev), 6, replace=False):
            a, b = pm.vertices[ev[e]]
            for ds in (pm.diameter / 25, pm.diameter / 100):
                coarse = segment_visibility_region(mesh, g, (a, b), ds).area
                fine = segment_visibility_region(mesh, g, (a, b), ds / 100).area
                gaps.setdefault(ds > pm.diameter / 50, []).append(abs(coarse / fine - 1))
    assert np.mean(gaps[False]) <= 0.01
    assert np.mean(gaps[False]) < np.mean(gaps[True])


def test_segment_region_finite_d_within_stadium():
    pm = random_map_with_holes(30, 3, 0)
    mesh, g = engine(pm)
    a, b = pm.vertices[mesh.interior_edges[0]]
    d = 2.0
    r = segment_visibility_region(mesh, g, (a, b), 0.5, d)
    L = np.hypot(*(b - a))
    assert r.area <= math.pi * d * d + 2 * d * L + 1e-9
    assert r.area <= segment_visibility_region(mesh, g, (a, b), 0.5).area + 1e-9


def test_engine_wrapper():
    pm = square_with_hole()
    eng = Engine(build_cdt(pm))
    assert eng.is_visible((0.5, 0.5), (3.5, 0.5))
    assert eng.query((0.5, 0.5))[0].area > 0
