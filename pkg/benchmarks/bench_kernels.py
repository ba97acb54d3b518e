#!/usr/bin/env python3
"""Time the hot kernels under both backends.

The backend is fixed at import time by PLAPBOUNDS_NO_NUMBA, so the script
re-runs itself in a subprocess per backend and prints a comparison table.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import subprocess
import sys
import time


def _timings(repeat: int) -> dict:
    import numpy as np

    import plapbounds as pb
    from plapbounds import shapes
    from plapbounds._kernels import pair_ratio_min

    results = {}

    def bench(name, fn, warm=True):
        if warm:
            fn()
        best = min(timeit(fn) for _ in range(repeat))
        results[name] = best

    def timeit(fn):
        t0 = time.perf_counter()
        fn()
        return time.perf_counter() - t0

    disk = shapes.regular_polygon_disk(256)
    grid = pb.build_grid(disk, 1.0 / 64)
    bench("ray_weight_field(12.5k nodes x 90 angles x 256 edges)",
          lambda: pb.hardy_weight_field(disk, grid, 2.0, 90))

    bench("laplace_eigen_p2(disk, h=1/64)",
          lambda: pb.laplace_eigen_p2(grid))

    bench("radial_eigenvalue(p=3 interval, mesh 4096)",
          lambda: pb.mixed_interval_eigenvalue(3.0))

    theta = 2 * np.pi * np.arange(2048) / 2048
    xs, ys = np.cos(theta), np.sin(theta)
    bench("pair_ratio_min(2048 boundary samples)",
          lambda: pair_ratio_min(xs, ys, xs, ys, 4.0))

    return results


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--worker", choices=["numba", "numpy"], default=None,
                        help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        from plapbounds import backend
        assert backend() == args.worker, f"expected {args.worker}, got {backend()}"
        for name, secs in _timings(args.repeat).items():
            print(f"{name}\t{secs:.6f}")
        return 0

    rows = {}
    for mode, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, PLAPBOUNDS_NO_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker", mode,
             "--repeat", str(args.repeat)],
            env=env, capture_output=True, text=True, check=True)
        for line in out.stdout.strip().splitlines():
            name, secs = line.rsplit("\t", 1)
            rows.setdefault(name, {})[mode] = float(secs)

    width = max(len(n) for n in rows)
    print(f"{'kernel':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for name, t in rows.items():
        ratio = t["numpy"] / t["numba"] if t["numba"] > 0 else float("inf")
        print(f"{name:<{width}}  {t['numba']:>9.4f}s  {t['numpy']:>9.4f}s  {ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
