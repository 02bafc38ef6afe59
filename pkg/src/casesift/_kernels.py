"""Hot numeric kernels for 1-D k-means, JIT-compiled when numba is available.

The pure-numpy path is always present and is selected by setting
``CASESIFT_NUMBA=0`` (or when numba is not importable). Both paths implement
the identical contract: nearest-centroid assignment with ties going to the
lower centroid index, mean-update of centroids (empty clusters keep their
previous value), and the within-cluster sum of squares of the *incoming*
centroids. ``benchmarks/bench_kmeans.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np


def _numpy_lloyd_step(values: np.ndarray, centroids: np.ndarray
                      ) -> tuple[np.ndarray, np.ndarray, float]:
    distances = np.abs(values[:, None] - centroids[None, :])
    assignments = distances.argmin(axis=1)          # argmin ties -> lowest index
    wcss = float(((values - centroids[assignments]) ** 2).sum())
    new_centroids = centroids.copy()
    for cluster in range(centroids.shape[0]):
        members = values[assignments == cluster]
        if members.size:
            new_centroids[cluster] = members.mean()
    return assignments, new_centroids, wcss


def _make_numba_step():
    from numba import njit

    @njit(cache=True)
    def step(values, centroids):  # pragma: no cover - exercised via lloyd_step
        n = values.shape[0]
        k = centroids.shape[0]
        assignments = np.empty(n, dtype=np.int64)
        sums = np.zeros(k, dtype=np.float64)
        counts = np.zeros(k, dtype=np.int64)
        wcss = 0.0
        for i in range(n):
            best = 0
            best_d = abs(values[i] - centroids[0])
            for c in range(1, k):
                d = abs(values[i] - centroids[c])
                if d < best_d:
                    best_d = d
                    best = c
            assignments[i] = best
            sums[best] += values[i]
            counts[best] += 1
            wcss += best_d * best_d
        new_centroids = centroids.copy()
        for c in range(k):
            if counts[c] > 0:
                new_centroids[c] = sums[c] / counts[c]
        return assignments, new_centroids, wcss

    return step


def _select_backend():
    if os.environ.get("CASESIFT_NUMBA", "").strip() == "0":
        return _numpy_lloyd_step, "numpy"
    try:
        return _make_numba_step(), "numba"
    except ImportError:
        return _numpy_lloyd_step, "numpy"


_STEP, KERNEL_BACKEND = _select_backend()


def lloyd_step(values: np.ndarray, centroids: np.ndarray
               ) -> tuple[np.ndarray, np.ndarray, float]:
    """One Lloyd iteration; returns (assignments, updated centroids, incoming WCSS)."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    centroids = np.ascontiguousarray(centroids, dtype=np.float64)
    assignments, new_centroids, wcss = _STEP(values, centroids)
    return np.asarray(assignments), np.asarray(new_centroids), float(wcss)


def numpy_lloyd_step(values: np.ndarray, centroids: np.ndarray
                     ) -> tuple[np.ndarray, np.ndarray, float]:
    """Fallback path, callable directly for parity checks and benchmarks."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    centroids = np.ascontiguousarray(centroids, dtype=np.float64)
    return _numpy_lloyd_step(values, centroids)
