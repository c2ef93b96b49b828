import math

import numpy as np
import pytest

from teamesh.bench import (CSV_COLUMNS, estimate_eta_T, estimate_eta_T_h, percentage_gap,
                           query_etas, run_benchmark, sample_uniform)
from teamesh.mapio import make_map
from teamesh.maps import random_convex_polygon, random_map_with_holes, random_simple_polygon
from teamesh.meshopt import MwtConfig, compute_weights, mwt_holes
from teamesh.oracles import oracle_expansion_count, point_in_map
from teamesh.trimesh import OUTSIDE, build_buckets, build_cdt, locate_triangle, mesh_from_triangles
from teamesh.visibility import INF

from conftest import square_with_hole


def test_sampling_deterministic_and_inside():
    pm = random_map_with_holes(30, 3, 1)
    mesh = build_cdt(pm)
    a = sample_uniform(pm, mesh, 2000, 7)
    b = sample_uniform(pm, mesh, 2000, 7)
    assert np.array_equal(a.points, b.points) and a.m == 2000
    g = build_buckets(mesh)
    assert all(locate_triangle(g, mesh, q) != OUTSIDE for q in a.points)
    assert all(point_in_map(pm, *q) >= 0 for q in a.points[:300])
    with pytest.raises(ValueError):
        sample_uniform(pm, mesh, 0, 1)


def test_sampling_area_proportional():
    # square split into triangles of area 1/3 and 2/3 of the total
    pm = make_map([(0, 0), (3, 0), (3, 1), (0, 1)])
    mesh = mesh_from_triangles(pm, [(0, 1, 3), (1, 2, 3)])
    # mesh_from_triangles needs a triangulation: (0,1,3) has area 1.5, (1,2,3) 1.5 -> use a skewed map
    pm = make_map([(0, 0), (2, 0), (3, 1), (0, 1)])
    mesh = mesh_from_triangles(pm, [(0, 1, 3), (1, 2, 3)])
    areas = mesh.triangle_areas()
    m = 10 ** 6
    qs = sample_uniform(pm, mesh, m, 3)
    P = mesh.vertices
    a, b, c = P[mesh.tri_verts[0]]
    # the first triangle is the one left of the line from vertex 1 to vertex 3
    v1, v3 = P[1], P[3]
    left = ((v3[0] - v1[0]) * (qs.points[:, 1] - v1[1]) - (v3[1] - v1[1]) * (qs.points[:, 0] - v1[0])) > 0
    t0 = next(t for t in range(2) if 0 in mesh.tri_verts[t])
    p = areas[t0] / areas.sum()
    k = left.sum()
    assert abs(k - m * p) <= 4 * math.sqrt(m * p * (1 - p))


def test_convex_eta_T_and_eta_T_h():
    pm = random_convex_polygon(11, 3)
    mesh = build_cdt(pm)
    g = build_buckets(mesh)
    qs = sample_uniform(pm, mesh, 500, 1)
    est = estimate_eta_T(mesh, g, qs, warmup=10)
    assert est.eta_T == pm.n - 3
    assert estimate_eta_T_h(pm, mesh, g, d_samp=1.0) == pytest.approx(pm.n - 3, rel=1e-9)


def test_eta_T_is_mean_of_stats_and_matches_recount():
    pm = square_with_hole()
    mesh = build_cdt(pm)
    g = build_buckets(mesh)
    qs = sample_uniform(pm, mesh, 100, 5)
    est = estimate_eta_T(mesh, g, qs, warmup=10)
    assert est.eta_T == est.eta.mean()
    assert list(est.eta) == [oracle_expansion_count(mesh, q) for q in qs.points]
    assert np.array_equal(query_etas(mesh, g, qs), est.eta)
    assert (est.t_q > 0).all()


def test_eta_T_diameter_equals_unlimited():
    pm = random_map_with_holes(30, 3, 2)
    mesh = build_cdt(pm)
    g = build_buckets(mesh)
    qs = sample_uniform(pm, mesh, 2000, 1)
    assert estimate_eta_T(mesh, g, qs, pm.diameter, timing=False).eta_T == \
        estimate_eta_T(mesh, g, qs, INF, timing=False).eta_T


def test_eta_T_h_vs_eta_T():
    pm = random_simple_polygon(40, 1)
    mesh = build_cdt(pm)
    g = build_buckets(mesh)
    eta = estimate_eta_T(mesh, g, sample_uniform(pm, mesh, 20000, 2), timing=False).eta_T
    eta_h = estimate_eta_T_h(pm, mesh, g, d_samp=pm.diameter / 200)
    assert abs(percentage_gap(eta_h, eta)) <= 2.0
    pm = random_map_with_holes(30, 3, 4)
    mesh = build_cdt(pm)
    g = build_buckets(mesh)
    eta = estimate_eta_T(mesh, g, sample_uniform(pm, mesh, 20000, 2), timing=False).eta_T
    assert estimate_eta_T_h(pm, mesh, g, d_samp=pm.diameter / 100) <= eta * 1.01


def test_percentage_gap():
    assert percentage_gap(10, 8) == 25
    assert percentage_gap(8.44, 8.44) == 0
    assert round(percentage_gap(201.08, 228.5)) == -12
    with pytest.raises(ZeroDivisionError):
        percentage_gap(1, 0)


def test_run_benchmark_single_and_copy():
    pm = random_map_with_holes(30, 3, 5)
    cdt = build_cdt(pm)
    rep = run_benchmark(pm, [("cdt", cdt)], m=2000, seed=1, warmup=10)
    assert rep.rows[0].gap_eta == 0 and rep.rows[0].gap_t == 0
    rep = run_benchmark(pm, [("cdt", cdt), ("copy", build_cdt(pm))], m=2000, seed=1,
                        d_list=(INF, 3.0), warmup=10)
    assert len(rep.rows) == 4
    assert rep.row("copy").eta_T == rep.row("cdt").eta_T
    assert rep.row("copy", 3.0).eta_T == rep.row("cdt", 3.0).eta_T
    lines = rep.to_csv().splitlines()
    assert lines[0].split(",") == CSV_COLUMNS
    row = dict(zip(CSV_COLUMNS, lines[1].split(",")))
    assert row["d"] == "inf" and row["gap_eta"] == "0"
    assert len(row["eta_T"].split(".")[1]) == 1 and len(row["t_q"].split(".")[1]) == 2
    assert '"d": null' in rep.to_json()


def test_run_benchmark_gap_sign_and_mismatch():
    pm = random_map_with_holes(30, 3, 6)
    cdt = build_cdt(pm)
    mx, _ = mwt_holes(pm, compute_weights(pm, scheme="maxlt"), MwtConfig(t_max=60))
    rep = run_benchmark(pm, [("cdt", cdt), ("maxlt", mx, 0.5)], m=5000, seed=2, timing=False)
    assert rep.row("maxlt").gap_eta > 0 and rep.row("maxlt").t_c == 0.5
    assert "+" in rep.to_csv().splitlines()[2].split(",")[-2]
    other = build_cdt(random_map_with_holes(30, 3, 7))
    with pytest.raises(ValueError):
        run_benchmark(pm, [("cdt", cdt), ("x", other)], m=10)
    with pytest.raises(ValueError):
        run_benchmark(pm, [], m=10)
