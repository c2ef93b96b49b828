"""Compare the sampled expanded-edge estimate with the Monte-Carlo expansion mean
for decreasing sampling distances.

    python scripts/eta_h_convergence.py --n 500 --fractions 0.04 0.02 0.01 0.005 0.001
"""
import argparse

from teamesh.bench import estimate_eta_T, estimate_eta_T_h, percentage_gap, sample_uniform
from teamesh.maps import random_map_with_holes, random_simple_polygon
from teamesh.trimesh import build_buckets, build_cdt


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=500, help="vertices of the simple polygon")
    p.add_argument("--holes", type=int, default=5, help="holes of the second map")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, default=100_000)
    p.add_argument("--fractions", type=float, nargs="+", default=[0.04, 0.02, 0.01, 0.005, 0.001],
                   help="sampling distances as fractions of the map diameter")
    a = p.parse_args()
    print("map,n,h,d_samp,eta_T,eta_T_h,gap_pct")
    for pm in (random_simple_polygon(a.n, a.seed), random_map_with_holes(60, a.holes, a.seed)):
        mesh = build_cdt(pm)
        grid = build_buckets(mesh)
        eta = estimate_eta_T(mesh, grid, sample_uniform(pm, mesh, a.m, 13), timing=False).eta_T
        for f in a.fractions:
            ds = f * pm.diameter
            eh = estimate_eta_T_h(pm, mesh, grid, ds)
            print(f"{pm.name or 'map'},{pm.n},{pm.h},{ds:.4g},{eta:.3f},{eh:.3f},"
                  f"{percentage_gap(eh, eta):+.2f}", flush=True)


if __name__ == "__main__":
    main()
