#!/usr/bin/env python3
"""Benchmark the 1-D k-means Lloyd step: numba JIT kernel vs pure-numpy fallback.

The workload mirrors clustering word counts for a full-size corpus
(hundreds of thousands of values, k up to 10). Run:

    python3 benchmarks/bench_kmeans.py [--n 356011] [--k 10] [--iters 30]

Set CASESIFT_NUMBA=0 to confirm the selected backend switches to numpy.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from casesift import _kernels
from casesift.analytics import kmeans_1d


def time_step(step, values: np.ndarray, centroids: np.ndarray, iters: int) -> float:
    step(values, centroids)  # warm-up (JIT compile / cache touch)
    start = time.perf_counter()
    current = centroids
    for _ in range(iters):
        _, current, _ = step(values, current)
    return time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=356_011)
    parser.add_argument("--k", type=int, default=10)
    parser.add_argument("--iters", type=int, default=30)
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    # Long-tailed word counts, roughly judgment-sized.
    values = np.concatenate([
        rng.lognormal(mean=9.0, sigma=1.1, size=int(args.n * 0.775)),
        rng.lognormal(mean=11.5, sigma=0.6, size=args.n - int(args.n * 0.775)),
    ]).clip(300, 700_000)
    centroids = np.quantile(values, [(i + 0.5) / args.k for i in range(args.k)])

    print(f"values={args.n}  k={args.k}  iterations={args.iters}")
    print(f"selected kernel backend: {_kernels.KERNEL_BACKEND}")

    numpy_time = time_step(_kernels.numpy_lloyd_step, values, centroids, args.iters)
    print(f"numpy fallback : {numpy_time:.3f} s  ({numpy_time / args.iters * 1000:.1f} ms/iter)")

    if _kernels.KERNEL_BACKEND == "numba":
        numba_time = time_step(_kernels.lloyd_step, values, centroids, args.iters)
        print(f"numba kernel   : {numba_time:.3f} s  ({numba_time / args.iters * 1000:.1f} ms/iter)")
        print(f"speedup        : {numpy_time / numba_time:.2f}x")
    else:
        print("numba unavailable or disabled; only the fallback was timed")

    start = time.perf_counter()
    result = kmeans_1d(values, k=args.k)
    total = time.perf_counter() - start
    print(f"full kmeans_1d : {total:.3f} s, {result.iterations} iterations, "
          f"wcss={result.wcss:.3e}")


if __name__ == "__main__":
    main()
