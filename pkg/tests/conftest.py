import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from teamesh.mapio import make_map
from teamesh.maps import random_map_with_holes, random_simple_polygon
from teamesh.trimesh import build_buckets, build_cdt

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def square_with_hole():
    return make_map([(0, 0), (4, 0), (4, 4), (0, 4)], [[(1, 1), (1, 3), (3, 3), (3, 1)]],
                    name="ring")


def l_shape():
    # 2x2 square with the top-right unit square removed
    return make_map([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], name="L")


@pytest.fixture
def square():
    return make_map(SQUARE, name="square")


@pytest.fixture
def ring():
    return square_with_hole()


@pytest.fixture
def lmap():
    return l_shape()


@pytest.fixture(scope="session")
def holes_map():
    return random_map_with_holes(30, 3, seed=5)


@pytest.fixture(scope="session")
def holes_engine(holes_map):
    mesh = build_cdt(holes_map)
    return holes_map, mesh, build_buckets(mesh)


@pytest.fixture(scope="session")
def simple_engine():
    pm = random_simple_polygon(30, seed=3)
    mesh = build_cdt(pm)
    return pm, mesh, build_buckets(mesh)


def points_in(pm, k, seed):
    """Rejection-sampled interior points (independent of the mesh)."""
    from teamesh.oracles import point_in_map
    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = pm.bbox
    out = []
    while len(out) < k:
        x, y = rng.uniform(x0, x1), rng.uniform(y0, y1)
        if point_in_map(pm, x, y) == 1:
            out.append((x, y))
    return np.array(out)


VERDICTS = []


@pytest.fixture
def verdict(capsys):
    """Print and record one PASS/FAIL/WARN line for an acceptance criterion."""
    def emit(k, ok, detail, soft=False):
        tag = "PASS" if ok else ("WARN" if soft else "FAIL")
        line = f"criterion {k:2d} {tag}: {detail}"
        VERDICTS.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS):
            terminalreporter.write_line(line)
