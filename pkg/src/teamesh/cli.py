"""Command-line entry point: build, optimize and query meshes, and benchmark them."""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import maps as _maps
from .bench import run_benchmark
from .mapio import MapError, MeshFormatError, dump_map, dump_mesh, load_map, load_mesh
from .meshopt import SCHEMES, MwtConfig, compute_weights, mwt_holes
from .trimesh import MeshError, build_buckets, build_cdt
from .visibility import INF, OutsideMapError, query

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

DEFAULTS = dict(d_samp=4.0, n_P=450, it_max=200, t_max=6.0, r_pen=0.0, d=INF, seed=13,
                m=100_000)

GENERATORS = {
    "terrain": _maps.terrain_map,
    "floorplan": _maps.floor_plan_map,
    "office": _maps.office_map,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _range(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity", "unlimited", "none"):
        return INF
    v = float(t)
    if not v > 0:
        raise argparse.ArgumentTypeError("range must be positive or 'inf'")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _read_map(path):
    with open(path, "rb") as f:
        return load_map(f.read())


def _read_mesh(path, pm):
    with open(path, "rb") as f:
        mesh = load_mesh(f.read())
    if len(mesh.vertices) != pm.n or not np.array_equal(mesh.vertices, pm.vertices):
        raise MeshError(f"mesh {path} does not belong to the given map")
    return mesh


def _write(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# ---------------------------------------------------------------- commands


def cmd_map_generate(a):
    gen = GENERATORS[a.kind]
    pm = gen(a.seed)
    _write(a.out, dump_map(pm))
    print(f"{a.kind} map: n={pm.n} h={pm.h} area={pm.area:.2f}", file=sys.stderr)


def cmd_mesh_build(a):
    pm = _read_map(a.map)
    t0 = time.perf_counter()
    mesh = build_cdt(pm)
    t_c = time.perf_counter() - t0
    _write(a.out, dump_mesh(mesh))
    print(f"t_c {t_c:.3f} s  triangles {mesh.n_triangles}", file=sys.stderr)


def _weights(a, pm, mesh, grid):
    d = a.d if a.scheme == "dminvt" else INF
    return compute_weights(pm, mesh, grid, scheme=a.scheme, d_samp=a.dsamp, d=d, r_pen=a.rpen)


def cmd_mesh_optimize(a):
    pm = _read_map(a.map)
    if a.scheme == "dminvt" and a.d == INF:
        raise UsageError("--scheme dminvt needs a finite --d")
    cdt = build_cdt(pm)
    grid = build_buckets(cdt)
    t0 = time.perf_counter()
    w = _weights(a, pm, cdt, grid)
    t_w = time.perf_counter() - t0
    cfg = MwtConfig(n_P=a.np, it_max=a.itmax, t_max=a.tmax, seed=a.seed)
    t0 = time.perf_counter()
    mesh, log = mwt_holes(pm, w, cfg, start=cdt)
    t_m = time.perf_counter() - t0
    _write(a.out, dump_mesh(mesh))
    if a.weights:
        _write(a.weights, w.to_csv())
    if a.log:
        _write(a.log, log.to_csv())
    print(f"t_c {t_w + t_m:.3f} s  (weights {t_w:.3f} s, mwt {t_m:.3f} s, "
          f"{len(log.rows) - 1} iterations)", file=sys.stderr)


def cmd_weights(a):
    pm = _read_map(a.map)
    if a.scheme == "dminvt" and a.d == INF:
        raise UsageError("--scheme dminvt needs a finite --d")
    cdt = build_cdt(pm)
    w = _weights(a, pm, cdt, build_buckets(cdt))
    _write(a.out, w.to_csv())


def cmd_query(a):
    with open(a.mesh, "rb") as f:
        mesh = load_mesh(f.read())
    grid = build_buckets(mesh)
    query(mesh, grid, (a.x, a.y), a.d)  # warm-up, so the timings exclude compilation
    reg, st = query(mesh, grid, (a.x, a.y), a.d)
    out = reg.to_dict()
    out["eta"] = st.eta
    out["timing_us"] = {"locate": st.t_locate, "tea": st.t_tea,
                        "intersect": st.t_intersect, "clip": st.t_clip, "total": st.total}
    _write(a.out, json.dumps(out, indent=1) + "\n")


def cmd_bench(a):
    pm = _read_map(a.map)
    meshes = []
    for item in a.mesh:
        label, _, path = item.rpartition("=")
        label = label or Path(path).stem
        meshes.append((label, _read_mesh(path, pm)))
    d_list = a.d or [INF]
    rep = run_benchmark(pm, meshes, m=a.m, seed=a.seed, d_list=d_list, timing=not a.no_timing)
    _write(a.out, rep.to_csv() if a.format == "csv" else rep.to_json(indent=1) + "\n")


# ---------------------------------------------------------------- parser


def _opt_params(p):
    p.add_argument("--scheme", choices=SCHEMES, default="minvt",
                   help="edge weights (default: %(default)s)")
    p.add_argument("--dsamp", type=_positive, default=DEFAULTS["d_samp"],
                   help="sampling distance along an edge for visual weights, e.g. 2, 4 or 8 "
                        "(default: %(default)g)")
    p.add_argument("--d", type=_range, default=DEFAULTS["d"],
                   help="visibility range for dminvt (default: inf)")
    p.add_argument("--rpen", type=float, default=DEFAULTS["r_pen"],
                   help="percentage of longest diagonals given weight 1000+length "
                        "(default: %(default)g)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="teamesh", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mp = sub.add_parser("map", help="map utilities")
    msub = mp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    g = msub.add_parser("generate", help="write a bundled synthetic map")
    g.add_argument("kind", choices=sorted(GENERATORS))
    g.add_argument("--seed", type=int, default=DEFAULTS["seed"], help="generator seed (default: %(default)s)")
    g.add_argument("-o", "--out", help="output map file (default: stdout)")
    g.set_defaults(func=cmd_map_generate)

    me = sub.add_parser("mesh", help="build or optimize a mesh")
    esub = me.add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = esub.add_parser("build", help="constrained Delaunay triangulation of a map")
    b.add_argument("map")
    b.add_argument("-o", "--out", help="output mesh file (default: stdout)")
    b.set_defaults(func=cmd_mesh_build)

    o = esub.add_parser("optimize", help="minimum-weight triangulation from random sub-polygons")
    o.add_argument("map")
    _opt_params(o)
    o.add_argument("--np", type=int, default=DEFAULTS["n_P"],
                   help="sub-polygon size limit (default: %(default)s)")
    o.add_argument("--itmax", type=int, default=DEFAULTS["it_max"],
                   help="iteration limit (default: %(default)s)")
    o.add_argument("--tmax", type=float, default=DEFAULTS["t_max"],
                   help="time limit in seconds (default: %(default)g)")
    o.add_argument("--seed", type=int, default=DEFAULTS["seed"],
                   help="random seed (default: %(default)s)")
    o.add_argument("-o", "--out", help="output mesh file (default: stdout)")
    o.add_argument("--weights", help="also write the weights CSV here")
    o.add_argument("--log", help="also write the iteration log CSV here")
    o.set_defaults(func=cmd_mesh_optimize)

    w = sub.add_parser("weights", help="edge weights of every vertex pair as CSV")
    w.add_argument("map")
    _opt_params(w)
    w.add_argument("-o", "--out", help="output CSV (default: stdout)")
    w.set_defaults(func=cmd_weights)

    q = sub.add_parser("query", help="visibility region of one point")
    q.add_argument("mesh")
    q.add_argument("x", type=float)
    q.add_argument("y", type=float)
    q.add_argument("--d", type=_range, default=DEFAULTS["d"],
                   help="visibility range (default: inf)")
    q.add_argument("-o", "--out", help="output JSON (default: stdout)")
    q.set_defaults(func=cmd_query)

    be = sub.add_parser("bench", help="compare meshes of one map on shared random queries")
    be.add_argument("map")
    be.add_argument("mesh", nargs="+", help="mesh file, optionally LABEL=PATH; the first is the reference")
    be.add_argument("--m", type=int, default=DEFAULTS["m"], help="number of queries (default: %(default)s)")
    be.add_argument("--seed", type=int, default=DEFAULTS["seed"], help="query seed (default: %(default)s)")
    be.add_argument("--d", type=_range, action="append",
                    help="visibility range, repeatable (default: inf)")
    be.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="report format (default: %(default)s)")
    be.add_argument("--no-timing", action="store_true", help="expansion counts only")
    be.add_argument("-o", "--out", help="output report (default: stdout)")
    be.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        for k in ("m", "np"):
            if getattr(a, k, 1) is not None and getattr(a, k, 1) < 1:
                raise UsageError(f"--{k} must be at least 1")
        if getattr(a, "itmax", 0) < 0:
            raise UsageError("--itmax must be non-negative")
        a.func(a)
    except UsageError as e:
        print(f"teamesh: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, MapError, MeshFormatError, MeshError, OutsideMapError, ValueError) as e:
        print(f"teamesh: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
