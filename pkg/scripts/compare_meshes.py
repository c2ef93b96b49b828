"""Build CDT and optimized meshes on generated maps and print a comparison report.

    python scripts/compare_meshes.py --kind terrain --seeds 0 1 2 --schemes minlt minvt maxlt maxvt
"""
import argparse
import sys
import time

from teamesh.bench import run_benchmark
from teamesh.cli import DEFAULTS, GENERATORS
from teamesh.meshopt import MwtConfig, compute_weights, mwt_holes
from teamesh.trimesh import build_buckets, build_cdt


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--kind", choices=sorted(GENERATORS), default="terrain")
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    p.add_argument("--schemes", nargs="+", default=["minlt", "minvt", "maxlt", "maxvt"])
    p.add_argument("--dsamp", type=float, default=DEFAULTS["d_samp"])
    p.add_argument("--m", type=int, default=DEFAULTS["m"])
    p.add_argument("--d", type=float, nargs="+", default=[float("inf")])
    p.add_argument("--itmax", type=int, default=DEFAULTS["it_max"])
    p.add_argument("--tmax", type=float, default=600.0)
    a = p.parse_args()
    header = True
    for seed in a.seeds:
        pm = GENERATORS[a.kind](seed)
        t0 = time.perf_counter()
        cdt = build_cdt(pm)
        meshes = [("CDT", cdt, time.perf_counter() - t0)]
        grid = build_buckets(cdt)
        cache = {}
        for scheme in a.schemes:
            t0 = time.perf_counter()
            base = scheme.replace("max", "min")
            if base not in cache:
                cache[base] = compute_weights(pm, cdt, grid, scheme=base, d_samp=a.dsamp)
            w = cache[base] if scheme == base else cache[base].negated()
            mesh, _ = mwt_holes(pm, w, MwtConfig(it_max=a.itmax, t_max=a.tmax), start=cdt)
            meshes.append((scheme, mesh, time.perf_counter() - t0))
            print(f"{pm.name}: {scheme} done in {meshes[-1][2]:.0f} s", file=sys.stderr)
        csv = run_benchmark(pm, meshes, m=a.m, d_list=a.d).to_csv()
        sys.stdout.write(csv if header else csv.split("\n", 1)[1])
        sys.stdout.flush()
        header = False


if __name__ == "__main__":
    main()
