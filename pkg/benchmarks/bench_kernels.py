"""Time the numba kernels against the numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call per kernel includes compilation (or a cache load) and
is reported separately.
"""
import argparse
import time

import numpy as np

from squeezebell import kernels
from squeezebell._accel import HAVE_NUMBA
from squeezebell.bell import OptimizerConfig, max_bell
from squeezebell.phase_space import coeffs_at


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    starts = np.random.default_rng(0).uniform(0, 3, size=(16, 2))
    c = coeffs_at(0.5, 0.5, 0.3)
    yield "ascend (16 restarts, k=0.6)", lambda b: kernels.ascend(0.6, starts, 1e-10, 1e-10, 10_000, backend=b)
    yield "grid_max 800x800", lambda b: kernels.grid_max(c.e, c.f, 1.0, 2.0, 800, backend=b)
    yield "displacement 61x61, |alpha|=3", lambda b: kernels.displacement(3.0 + 1.0j, 61, backend=b)
    yield "max_bell x 50 r-points", lambda b: [max_bell(coeffs_at(0.5, 1.0, r), OptimizerConfig(), backend=b) for r in np.linspace(0, 1, 50)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    if not HAVE_NUMBA:
        print("numba unavailable or disabled; timing numpy only")
    print(f"{'kernel':36s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'first call':>12s} {'speedup':>8s}")
    for name, fn in cases():
        row = {}
        first = float("nan")
        for b in backends:
            if b == "numba":
                t0 = time.perf_counter()
                fn(b)
                first = time.perf_counter() - t0
            row[b] = timeit(lambda: fn(b), args.repeat)
        nb = row.get("numba", float("nan"))
        print(f"{name:36s} {row['numpy'] * 1e3:12.3f} {nb * 1e3:12.3f} {first * 1e3:12.1f} {row['numpy'] / nb:8.1f}x")


if __name__ == "__main__":
    main()
