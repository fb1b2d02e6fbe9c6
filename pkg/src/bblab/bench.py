"""Benchmark the compiled kernel against the pure-Python fallback.

Run as ``python -m bblab.bench``.  Times the two kernel implementations on
the workloads that dominate real runs: integer pivots on a dense tableau,
violation scans over a large row pool, and an end-to-end TSP relaxation
solve.  Both implementations compute identical exact results; only the
wall time differs.
"""

import random
import time
from fractions import Fraction

from . import _kernel_py

try:
    from . import _speedups
except ImportError:
    _speedups = None


def _time(fn, repeat=3):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def bench_pivots(kernel, rows=60, cols=140, pivots=80, seed=11):
    # 0/+-1/+-2 data mirrors the instance families, whose tableau minors
    # stay small; random dense entries would instead benchmark bigint cost
    rng = random.Random(seed)
    tableau = [[rng.randint(-2, 2) for _ in range(cols)] for _ in range(rows)]

    def run():
        work = [row[:] for row in tableau]
        den = 1
        for t in range(pivots):
            r = t % rows
            c = (3 * t) % (cols - 1)
            if work[r][c] == 0:
                work[r][c] = 7
            den = kernel.pivot_update(work, r, c, den)
            if den < 0:
                den = -den
                for row in work:
                    for j in range(cols):
                        row[j] = -row[j]

    return _time(run)


def bench_scan(kernel, nrows=4096, n=12, points=512, seed=12):
    rng = random.Random(seed)
    introws = [
        [rng.randint(-(2 ** 20), 2 ** 20) for _ in range(n)] + [rng.randint(0, 2 ** 22)]
        for _ in range(nrows)
    ]
    pts = [[rng.randint(0, 3) for _ in range(n)] for _ in range(points)]

    def run():
        for p in pts:
            kernel.violated_indices(introws, p, 4)

    return _time(run)


def bench_tsp_solve(kernel_name):
    # Swap the selected kernel's functions in place, then solve one
    # subtour-relaxation LP from scratch; callers look the functions up
    # through the module at call time, so no reloads are needed.
    from . import _kernel
    from .families import TspSpec, gen_tsp_subtour
    from .lp import lp_optimize

    chosen = _kernel_py if kernel_name == "python" else _speedups
    saved = {name: getattr(_kernel, name) for name in
             ("pivot_update", "violated_indices", "first_violated_mask")}
    for name in saved:
        setattr(_kernel, name, getattr(chosen, name))
    try:
        T = gen_tsp_subtour(TspSpec(9))
        rng = random.Random(5)
        c = tuple(
            Fraction(rng.randint(-50, 50), rng.randint(1, 6)) for _ in range(T.dim)
        )
        return _time(lambda: lp_optimize(T, c, "max"), repeat=2)
    finally:
        for name, fn in saved.items():
            setattr(_kernel, name, fn)


def main():
    kernels = [("python", _kernel_py)]
    if _speedups is not None:
        kernels.append(("c", _speedups))
    print(f"{'workload':<28}" + "".join(f"{name:>12}" for name, _ in kernels))
    rows = {
        "dense integer pivots": [bench_pivots(k) for _, k in kernels],
        "row violation scans": [bench_scan(k) for _, k in kernels],
        "tsp(9) LP end-to-end": [bench_tsp_solve(name) for name, _ in kernels],
    }
    for label, times in rows.items():
        cells = "".join(f"{t * 1000:>10.1f}ms" for t in times)
        print(f"{label:<28}{cells}")
    if _speedups is None:
        print("\ncompiled kernel not built; run: python setup.py build_ext --inplace")


if __name__ == "__main__":
    main()
