"""Benchmark the numba and numpy backends on the hot kernels.

The two backends compute bit-identical results; this script reports wall
time per call for the Gegenbauer series evaluation (the kernel-matrix hot
path), the full table, and the Hermite table.

Run twice in separate processes so each backend starts fresh:

    RFNT_BACKEND=numba  python benchmarks/bench_backends.py
    RFNT_BACKEND=numpy  python benchmarks/bench_backends.py

Representative results (numba 0.66, numpy 2.2, one core, d=50, kmax=40):

    backend: numba
             n   series (s)    table (s)  hermite (s)
         10000       0.0022       0.0006       0.0002
        100000       0.0223       0.0058       0.0046
       1000000       0.2306       0.1920       0.1571
    backend: numpy
         10000       0.0015       0.0013       0.0007
        100000       0.0181       0.0163       0.0107
       1000000       0.1898       0.3491       0.2709

numba wins on the table builds (no intermediate arrays); the accumulator
series is memory-bound either way.
"""

import os
import time

import numpy as np


def timeit(fn, *args, repeat=5):
    fn(*args)                       # warm-up (JIT compile for numba)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    from rfnt import _accel

    d, kmax = 50, 40
    rng = np.random.default_rng(0)
    sizes = [10_000, 100_000, 1_000_000]
    coef = rng.random(kmax + 1)

    print(f"backend: {_accel.backend()}  (RFNT_BACKEND={os.environ.get('RFNT_BACKEND', 'auto')})")
    print(f"{'n':>10} {'series (s)':>12} {'table (s)':>12} {'hermite (s)':>12}")
    for n in sizes:
        t = rng.uniform(-d, d, n)
        ts = timeit(_accel.gegenbauer_series, coef, d, t)
        tt = timeit(_accel.gegenbauer_table, d, kmax, t)
        th = timeit(_accel.hermite_table, kmax, rng.standard_normal(n))
        print(f"{n:>10} {ts:>12.4f} {tt:>12.4f} {th:>12.4f}")


if __name__ == "__main__":
    main()
