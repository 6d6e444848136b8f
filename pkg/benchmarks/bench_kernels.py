"""Compare the compiled and numpy subset-product kernels.

Run with ``python benchmarks/bench_kernels.py``; add ``--quick`` for a short pass.
"""

import argparse
import timeit

import numpy as np

from hdginv import kernels


def bench(fn, x, y, budget):
    timer = timeit.Timer(lambda: fn(x, y))
    loops, _ = timer.autorange()
    loops = max(1, int(loops * budget / 0.2))
    return min(timer.repeat(repeat=3, number=loops)) / loops


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--quick", action="store_true", help="fewer sizes, shorter timing")
    args = parser.parse_args(argv)
    backends = dict(kernels.available_backends())
    backends["dispatch"] = kernels.subset_matmul
    orders = (1, 2, 4) if args.quick else (0, 1, 2, 3, 4, 6)
    sizes = (4, 32) if args.quick else (2, 4, 8, 16, 32, 64, 128)
    budget = 0.05 if args.quick else 0.2
    names = sorted(backends)
    print(f"active backend: {kernels.BACKEND}; 'dispatch' is the public kernel, which "
          f"hands blocks with n*m*p >= {kernels.BLAS_CROSSOVER} to numpy")
    header = f"{'order':>5} {'n':>5} " + " ".join(f"{name + ' [us]':>14}" for name in names)
    if "cython" in backends:
        header += f" {'numpy/cython':>13}"
    print(header)
    rng = np.random.default_rng(0)
    for order in orders:
        k = 1 << order
        for n in sizes:
            if k * n * n > 4_000_000:
                continue
            x = rng.standard_normal((k, n, n))
            y = rng.standard_normal((k, n, n))
            times = {name: bench(fn, x, y, budget) for name, fn in backends.items()}
            row = f"{order:>5} {n:>5} " + " ".join(f"{times[m] * 1e6:>14.2f}" for m in names)
            if "cython" in times:
                row += f" {times['numpy'] / times['cython']:>13.2f}"
            print(row)


if __name__ == "__main__":
    main()
