import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from teamesh.geom import polygon_area
from teamesh.mapio import (MapParseError, MapValidationError, MeshFormatError, dump_map,
                           dump_mesh, load_map, load_mesh, make_map, normalize_map, save_map,
                           save_mesh)
from teamesh.maps import random_map_with_holes, random_simple_polygon
from teamesh.meshopt import MwtConfig, compute_weights, mwt_holes
from teamesh.trimesh import build_cdt

from conftest import SQUARE

SQ_TEXT = "polymap 1\n# unit square\nOUTER 4\n0 0\n1 0\n1 1\n0 1\n"


def test_load_square():
    pm = load_map(SQ_TEXT)
    assert (pm.n, pm.h) == (4, 0)
    assert pm.area == 1.0


def test_cw_outer_is_normalized():
    pm = load_map("polymap 1\nOUTER 4\n0 0\n0 1\n1 1\n1 0\n")
    assert polygon_area(pm.outer) > 0


def test_holes_normalized_cw():
    pm = make_map([(0, 0), (4, 0), (4, 4), (0, 4)], [[(1, 1), (3, 1), (3, 3), (1, 3)]])
    assert polygon_area(pm.holes[0]) < 0
    assert pm.area == 12.0


def test_hole_crossing_outer_rejected():
    text = SQ_TEXT + "HOLE 3\n0.5 0.5\n2 0.5\n0.5 0.8\n"
    with pytest.raises(MapValidationError):
        load_map(text)


@pytest.mark.parametrize("outer, holes", [
    ([(0, 0), (2, 2), (2, 0), (0, 2)], []),                                   # bow tie
    ([(0, 0), (1, 0), (1, 0), (0, 1)], []),                                   # duplicate
    ([(0, 0), (4, 0), (4, 4), (0, 4)], [[(5, 5), (6, 5), (6, 6)]]),           # hole outside
    ([(0, 0), (4, 0), (4, 4), (0, 4)], [[(1, 1), (3, 1), (3, 3)], [(1.5, 1.2), (2.5, 1.2), (2.5, 1.6)]]),
    ([(0, 0), (4, 0), (4, 4), (0, 4)], [[(0, 0.5), (1, 1), (1, 2)]]),         # hole touches outer
])
def test_invalid_maps(outer, holes):
    with pytest.raises(MapValidationError):
        make_map(outer, holes)


@pytest.mark.parametrize("text, line", [
    ("polygon 1\nOUTER 3\n0 0\n1 0\n0 1\n", 1),
    ("polymap 1\nOUTER 3\n0 0\n1 x\n0 1\n", 4),
    ("polymap 1\nOUTER 3\n0 0\n1 0\n", 2),
    ("polymap 1\nHOLE 3\n0 0\n1 0\n0 1\n", 2),
    ("polymap 1\nBLOB\n", 2),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(MapParseError) as ei:
        load_map(text)
    assert ei.value.line == line


def test_map_round_trip_bit_identical(tmp_path):
    pm = random_map_with_holes(25, 3, seed=11)
    again = load_map(dump_map(pm))
    assert again.same_geometry(pm)
    assert np.array_equal(again.vertices, pm.vertices)
    save_map(pm, tmp_path / "m.poly")
    assert load_map((tmp_path / "m.poly").read_bytes()).same_geometry(pm)


@given(st.integers(0, 10 ** 6))
def test_map_round_trip_property(seed):
    pm = random_simple_polygon(12, seed)
    assert np.array_equal(load_map(dump_map(pm)).vertices, pm.vertices)


def test_normalize_map_picks_largest():
    big = [(0, 0), (2, 0), (2, 2), (0, 2)]
    small = [(5, 5), (6, 5), (6, 6), (5, 6)]
    pm = normalize_map([small, big])
    assert pm.area == 4.0
    assert normalize_map([big]).same_geometry(make_map(big))
    with pytest.raises(ValueError):
        normalize_map([])


def test_normalize_map_keeps_own_holes():
    rng = np.random.default_rng(0)
    comps = []
    for k in range(5):
        s = rng.uniform(1, 5)
        x0 = 10 * k
        outer = [(x0, 0), (x0 + s, 0), (x0 + s, s), (x0, s)]
        hole = [(x0 + 0.25 * s, 0.25 * s), (x0 + 0.5 * s, 0.25 * s), (x0 + 0.5 * s, 0.5 * s)]
        comps.append((outer, [hole]))
    pm = normalize_map(comps)
    areas = [abs(polygon_area(c[0])) - abs(polygon_area(c[1][0])) for c in comps]
    assert pm.area == pytest.approx(max(areas))
    assert pm.h == 1


def test_mesh_round_trip(tmp_path):
    sq = make_map(SQUARE)
    mesh = build_cdt(sq)
    assert load_mesh(dump_mesh(mesh).encode()).same_as(mesh)
    pm = random_map_with_holes(20, 2, seed=3)
    w = compute_weights(pm, scheme="minlt")
    opt, _ = mwt_holes(pm, w, MwtConfig(it_max=20, t_max=60))
    buf = io.StringIO()
    save_mesh(opt, buf)
    back = load_mesh(buf.getvalue().encode())
    assert back.same_as(opt)
    assert np.array_equal(back.vertices, opt.vertices)
    save_mesh(opt, tmp_path / "m.mesh")
    assert load_mesh(tmp_path / "m.mesh").same_as(opt)


def test_truncated_mesh_reports_offset():
    text = dump_mesh(build_cdt(make_map(SQUARE))).encode()
    cut = text[: len(text) - 20]
    with pytest.raises(MeshFormatError) as ei:
        load_mesh(cut)
    assert ei.value.offset is not None and 0 < ei.value.offset <= len(cut)
    with pytest.raises(MeshFormatError):
        load_mesh(b"trimesh 2\n")
