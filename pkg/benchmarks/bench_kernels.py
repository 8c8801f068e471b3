#!/usr/bin/env python3
"""Benchmark the compiled sort kernel against the pure-Python fallback.

The two kernels implement the identical algorithm and return identical
counts; this script measures the wall-clock gap between them across input
shapes, and optionally times a whole simulated run on each backend.

Example:

    python benchmarks/bench_kernels.py --sizes 10000,100000 --repeats 3
"""

import argparse
import time

import numpy as np

from ohhcsim import kernels
from ohhcsim.partition import DistributionKind, DistributionSpec, generate

SHAPES = ["random", "sorted", "reversed", "local"]


def make_input(shape: str, n: int, seed: int) -> np.ndarray:
    return generate(DistributionSpec(DistributionKind(shape), n, seed))


def best_of(fn, arr, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(arr)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="10000,100000",
                        help="comma-separated element counts")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s]

    have_compiled = kernels.BACKEND == "compiled"
    if not have_compiled:
        print("compiled kernel not built; timing the pure-Python kernel only")

    header = f"{'shape':<10} {'n':>10} {'python (s)':>12}"
    if have_compiled:
        header += f" {'compiled (s)':>13} {'speedup':>9}"
    print(header)
    print("-" * len(header))

    for n in sizes:
        for shape in SHAPES:
            arr = make_input(shape, n, args.seed)
            t_py = best_of(kernels.python_sort_with_counts, arr, args.repeats)
            line = f"{shape:<10} {n:>10} {t_py:>12.4f}"
            if have_compiled:
                out_py, counts_py = kernels.python_sort_with_counts(arr)
                out_cy, counts_cy = kernels.compiled_sort_with_counts(arr)
                if counts_py != counts_cy or not np.array_equal(out_py, out_cy):
                    raise SystemExit(f"backend mismatch on {shape}/{n}")
                t_cy = best_of(kernels.compiled_sort_with_counts, arr, args.repeats)
                line += f" {t_cy:>13.4f} {t_py / t_cy:>8.1f}x"
            print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
