"""Benchmark the exact inversion kernel: compiled extension vs pure Python.

Usage: python benchmarks/bench_kernels.py [--sizes 8,12,16,24,32] [--seed 1]

Times fraction-free Gauss-Jordan elimination over big integers on matrices
built from generated instances (strict annotations, so every draw is
nonsingular in practice).  Reports per-size timings and the speedup of the
compiled backend when it is available.
"""

from __future__ import annotations

import argparse
import math
import time

from rootlink import _kernels_py
from rootlink.build import build_matrix, random_instance

try:
    from rootlink import _kernels
except ImportError:
    _kernels = None


def int_matrix(seed: int, leaves: int) -> list[list[int]]:
    tree, annotation = random_instance(seed, leaves, "strict", min_leaves=leaves)
    rows = build_matrix(tree, annotation).matrix.rows
    scale = math.lcm(*(x.denominator for row in rows for x in row))
    return [[int(x * scale) for x in row] for row in rows]


def time_backend(backend, matrix: list[list[int]], repeats: int) -> float:
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        result = backend.inverse_scaled(matrix)
        best = min(best, time.perf_counter() - start)
        assert result is not None, "benchmark matrix is singular"
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="8,12,16,24,32")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _kernels is None:
        print("compiled backend not available; timing pure Python only")
    header = f"{'leaves':>6}  {'python (ms)':>12}"
    if _kernels is not None:
        header += f"  {'compiled (ms)':>14}  {'speedup':>8}"
    print(header)
    for size in sizes:
        matrix = int_matrix(args.seed, size)
        py = time_backend(_kernels_py, matrix, args.repeats)
        line = f"{size:>6}  {py * 1000:>12.3f}"
        if _kernels is not None:
            cy = time_backend(_kernels, matrix, args.repeats)
            line += f"  {cy * 1000:>14.3f}  {py / cy:>7.2f}x"
        print(line)


if __name__ == "__main__":
    main()
