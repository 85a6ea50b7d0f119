"""Time the compiled and NumPy series kernels on the same grid.

Usage: python benchmarks/bench_kernel.py [--m 10] [--points 401] [--times 20] [--repeat 3]
"""
import argparse
import time

import numpy as np

from fluorospec import kernel
from fluorospec.numerics import bessel_table


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=float, default=10.0, help="modulation index delta / omega")
    ap.add_argument("--omega", type=float, default=10.0)
    ap.add_argument("--gamma", type=float, default=0.1)
    ap.add_argument("--points", type=int, default=401, help="detuning points")
    ap.add_argument("--times", type=int, default=20, help="time points")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    jk = bessel_table(args.m).symmetric()
    reach = 2.0 * max(args.m * args.omega, 10.0)
    d_grid = np.linspace(-reach, reach, args.points)
    t_grid = np.linspace(0.5, 100.0, args.times)
    print(f"orders {jk.size}, grid {args.times} x {args.points}, "
          f"{jk.size**2 * args.times * args.points:.2e} bracket terms")

    results = {}
    for name, fn in kernel.available_backends().items():
        def run(fn=fn):
            rows = [fn(np.array([t]), d_grid, jk, 1.0, args.gamma, args.omega, 0.0) for t in t_grid]
            return np.vstack([r[0] + r[1] for r in rows])
        seconds, values = best_time(run, args.repeat)
        results[name] = (seconds, values)
        print(f"{name:>7}: {seconds:8.3f} s")

    if "cython" in results:
        (tc, vc), (tp, vp) = results["cython"], results["python"]
        rel = np.max(np.abs(vc - vp)) / np.max(np.abs(vp))
        print(f"speedup {tp / tc:.1f}x, max deviation between backends {rel:.1e} (relative to peak)")
    else:
        print("compiled backend not built; only the NumPy kernel was timed")


if __name__ == "__main__":
    main()
