"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat N]

The first numba call of each kernel includes compilation (or a cache
load) and is reported separately.
"""

import argparse
import time

import numpy as np

from scgeom import _kernels as K
from scgeom.fixtures import unit_disk


def _cases(rng):
    B = unit_disk().boundary_points(np.arange(2048) / 2048)
    P = rng.uniform(-1.2, 1.2, (200_000, 2))
    V = np.array([[0.0, 0.0], [1.0, 0.0], [1.3, 0.8], [0.4, 1.2], [-0.3, 0.6]])
    C = rng.uniform(-0.3, 0.3, (256, 2))
    g = np.linspace(-1.1, 1.1, 441)
    X, Y = np.meshgrid(g, g, indexing="ij")
    occ = X**2 + Y**2 <= 1
    depth = 1 - np.hypot(X, Y)
    A = np.array([(i, j) for i in range(-21, 22) for j in range(-21, 22) if abs(np.hypot(i, j) - 20) <= 1])
    return {
        "crossing_brackets": ((B, 0.5), K.crossing_brackets_np, getattr(K, "crossing_brackets_nb", None)),
        "polygon_depth": ((P, V), K.polygon_depth_np, getattr(K, "polygon_depth_nb", None)),
        "max_center_distance": ((P[:50_000], C), K.max_center_distance_np, getattr(K, "max_center_distance_nb", None)),
        "grid_pair_min": ((occ, depth, A), K.grid_pair_min_np, getattr(K, "grid_pair_min_nb", None)),
    }


def _best(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()
    print(f"backend: {K.BACKEND}")
    print(f"{'kernel':<22}{'numpy ms':>10}{'numba ms':>10}{'first ms':>10}{'speedup':>9}")
    for name, (args, f_np, f_nb) in _cases(np.random.default_rng(0)).items():
        t_np = _best(f_np, args, a.repeat)
        if f_nb is None:
            print(f"{name:<22}{t_np * 1e3:>10.2f}{'-':>10}{'-':>10}{'-':>9}")
            continue
        t = time.perf_counter()
        f_nb(*args)
        first = time.perf_counter() - t
        t_nb = _best(f_nb, args, a.repeat)
        print(f"{name:<22}{t_np * 1e3:>10.2f}{t_nb * 1e3:>10.2f}{first * 1e3:>10.1f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
