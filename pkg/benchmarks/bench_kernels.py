"""Compare the compiled and numpy sweep kernels on a full-size grid.

    python3 benchmarks/bench_kernels.py [--steps 2000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from coldplasma.experiments import gaussian_pulse, label_grid
from coldplasma.kernels import BACKENDS
from coldplasma.sweep import Sweep


def bench(backend, grid, field, steps, repeat):
    best, final = np.inf, None
    for _ in range(repeat):
        sw = Sweep(grid, field, 1e-3, backend=backend)
        t0 = time.perf_counter()
        sw.step(steps)
        best = min(best, time.perf_counter() - t0)
        final = sw.state.copy()
    return best, final


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    field = gaussian_pulse(0.4761, 0.0, 3.0)
    grid = label_grid(13.5, 1e-2)
    print(f"{grid.size} characteristics x {args.steps} RK4 steps")
    results = {}
    for name in sorted(BACKENDS):
        t, y = bench(name, grid, field, args.steps, args.repeat)
        results[name] = (t, y)
        rate = grid.size * args.steps / t / 1e6
        print(f"{name:>7}: {t:8.3f} s  ({rate:6.2f} M char-steps/s)")
    if len(results) == 2:
        (tp, yp), (tc, yc) = results["python"], results["cython"]
        print(f"speed-up {tp / tc:.2f}x, bitwise equal: {np.array_equal(yp, yc)}")


if __name__ == "__main__":
    main()
