"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--grid 60] [--repeat 3]

Each kernel is evaluated over a grid of (u, v) points by both backends. The
script reports the best wall time of each backend, the speed-up, and the
largest difference between the two results.
"""

import argparse
import time

import numpy as np

from welltime import _fallback, kernels


def best_time(fn, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--grid", type=int, default=60, help="points per axis")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if not kernels.compiled_available():
        raise SystemExit("compiled kernels are not built; reinstall with Cython and a C compiler")
    compiled = kernels.implementation("compiled")
    u = np.linspace(0.5, 10.0, args.grid)
    v = np.linspace(0.5, 3.0, args.grid)[:, None]
    print("grid %d x %d, best of %d" % (args.grid, args.grid, args.repeat))
    print("%-18s %12s %12s %9s %12s" % ("kernel", "compiled s", "python s", "speed-up", "max diff"))
    for name in kernels.KERNEL_NAMES:
        tc, (vc, _) = best_time(lambda: compiled.batch(name, u, v), args.repeat)
        tp, (vp, _) = best_time(lambda: _fallback.batch(name, u, v), args.repeat)
        diff = float(np.max(np.abs(vc - vp) / np.maximum(1.0, np.abs(vp))))
        print("%-18s %12.4f %12.4f %9.1f %12.2e" % (name, tc, tp, tp / tc, diff))


if __name__ == "__main__":
    main()
