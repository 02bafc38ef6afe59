"""Distribution analytics: yearly/court/tier counts, OLS trend, word-count stats, 1-D k-means.

The regression p-value is the two-sided probability of the slope t statistic
under n-2 degrees of freedom, computed through the regularized incomplete
beta function: p = I_x(df/2, 1/2) with x = df / (df + t^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy.special import betainc

from . import _kernels
from .cfgfile import read_sections
from .corpus import Dataset

UNMAPPED_TIER = "unmapped"


@dataclass(frozen=True)
class YearSeries:
    """Zero-filled contiguous year counts; undated cases are counted separately."""

    counts: dict[int, int]
    undated: int

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def counts_by_year(dataset: Dataset) -> YearSeries:
    undated = 0
    tally: dict[int, int] = {}
    for case in dataset:
        if case.hearing_date is None:
            undated += 1
        else:
            tally[case.hearing_date.year] = tally.get(case.hearing_date.year, 0) + 1
    if not tally:
        return YearSeries(counts={}, undated=undated)
    lo, hi = min(tally), max(tally)
    return YearSeries(counts={year: tally.get(year, 0) for year in range(lo, hi + 1)},
                      undated=undated)


def counts_by_court(dataset: Dataset) -> list[tuple[str, int]]:
    """One row per distinct verbatim court string, descending count then name."""
    tally: dict[str, int] = {}
    for case in dataset:
        tally[case.court] = tally.get(case.court, 0) + 1
    return sorted(tally.items(), key=lambda kv: (-kv[1], kv[0]))


@dataclass(frozen=True)
class CourtTierMap:
    tiers: Mapping[str, str]

    def tier_of(self, court_name: str) -> str:
        return self.tiers.get(court_name, UNMAPPED_TIER)


def load_tier_map(config_path: str | Path) -> CourtTierMap:
    """Sections are tier labels; lines are verbatim court names."""
    tiers: dict[str, str] = {}
    for tier, courts, lineno in read_sections(config_path):
        for court in courts:
            tiers[court] = tier
    return CourtTierMap(tiers=tiers)


def default_tier_map() -> CourtTierMap:
    with resources.as_file(resources.files("casesift.data") / "appendix3.cfg") as path:
        return load_tier_map(path)


def default_tier_map_path() -> Path:
    return Path(str(resources.files("casesift.data") / "appendix3.cfg"))


def tier_of(court_name: str, tier_map: CourtTierMap) -> str:
    return tier_map.tier_of(court_name)


def counts_by_tier(dataset: Dataset, tier_map: CourtTierMap) -> list[tuple[str, int]]:
    tally: dict[str, int] = {}
    for case in dataset:
        tier = tier_map.tier_of(case.court)
        tally[tier] = tally.get(tier, 0) + 1
    return sorted(tally.items(), key=lambda kv: (-kv[1], kv[0]))


class DegenerateInputError(ValueError):
    """Regression input whose x values are all identical."""


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    r_squared: float
    p_value: float | None
    n: int
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept,
                "r_squared": self.r_squared, "p_value": self.p_value, "n": self.n,
                "warnings": list(self.warnings)}


def linear_regression(pairs: Sequence[tuple[float, float]]) -> RegressionResult:
    """Ordinary least squares y = slope*x + intercept with slope p-value.

    The p-value needs n >= 3 (one residual degree of freedom); with fewer
    points it is None.
    """
    if len(pairs) < 2:
        raise ValueError("linear_regression needs at least 2 points")
    x = np.asarray([p[0] for p in pairs], dtype=np.float64)
    y = np.asarray([p[1] for p in pairs], dtype=np.float64)
    sxx = float(((x - x.mean()) ** 2).sum())
    if sxx == 0:
        raise DegenerateInputError("all x values identical; slope is undefined")
    sxy = float(((x - x.mean()) * (y - y.mean())).sum())
    slope = sxy / sxx
    intercept = float(y.mean()) - slope * float(x.mean())
    residuals = y - (slope * x + intercept)
    ss_res = float((residuals ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    warnings: list[str] = []
    if ss_tot == 0:
        r_squared = 0.0
        warnings.append("constant y: r_squared reported as 0")
    else:
        r_squared = 1.0 - ss_res / ss_tot
    df = len(pairs) - 2
    if df < 1:
        p_value = None
    elif ss_res == 0:
        p_value = 0.0
    else:
        se = math.sqrt(ss_res / df / sxx)
        t = slope / se
        p_value = float(betainc(df / 2.0, 0.5, df / (df + t * t)))
    return RegressionResult(slope=slope, intercept=intercept, r_squared=r_squared,
                            p_value=p_value, n=len(pairs), warnings=tuple(warnings))


@dataclass(frozen=True)
class DescriptiveStats:
    mean: float
    std: float          # population standard deviation
    min: float
    max: float
    q25: float
    median: float
    q75: float
    n: int

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std": self.std, "min": self.min, "max": self.max,
                "q25": self.q25, "median": self.median, "q75": self.q75, "n": self.n}


def describe(values: Sequence[float]) -> DescriptiveStats:
    """Mean, population std, extrema and linearly interpolated quartiles."""
    if len(values) == 0:
        raise ValueError("describe needs at least one value")
    arr = np.asarray(values, dtype=np.float64)
    q25, median, q75 = np.percentile(arr, [25, 50, 75], method="linear")
    return DescriptiveStats(mean=float(arr.mean()), std=float(arr.std(ddof=0)),
                            min=float(arr.min()), max=float(arr.max()),
                            q25=float(q25), median=float(median), q75=float(q75),
                            n=int(arr.size))


def word_count_stats(dataset: Dataset) -> DescriptiveStats:
    return describe([case.word_count for case in dataset])


@dataclass(frozen=True)
class ClusteringResult:
    k: int
    centroids: tuple[float, ...]            # ascending
    labels: tuple[int, ...]                 # cluster index per input value
    wcss: float
    iterations: int
    objective_trace: tuple[float, ...]      # WCSS before each iteration

    def cluster_summary(self, values: Sequence[float]) -> list[dict]:
        arr = np.asarray(values, dtype=np.float64)
        labels = np.asarray(self.labels)
        out = []
        for cluster in range(self.k):
            members = arr[labels == cluster]
            share = members.size / arr.size if arr.size else 0.0
            out.append({
                "cluster": cluster,
                "min": float(members.min()) if members.size else None,
                "max": float(members.max()) if members.size else None,
                "count": int(members.size),
                "share": share,
            })
        return out


def _initial_centroids(values: np.ndarray, k: int) -> np.ndarray:
    centroids = np.quantile(values, [(i + 0.5) / k for i in range(k)], method="linear")
    if np.unique(centroids).size < k:
        # Quantiles collided; spread over distinct values instead.
        distinct = np.unique(values)
        idx = np.linspace(0, distinct.size - 1, k).round().astype(int)
        centroids = distinct[idx].astype(np.float64)
    return np.asarray(centroids, dtype=np.float64)


def kmeans_1d(values: Sequence[float], k: int, max_iters: int = 200,
              tol: float = 1e-9) -> ClusteringResult:
    """Lloyd's algorithm with deterministic quantile initialization.

    Assignment ties go to the lower centroid index; iteration stops when no
    centroid moves more than *tol*. Centroids come back sorted ascending with
    labels remapped to match.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("kmeans_1d needs at least one value")
    if k < 1:
        raise ValueError("k must be >= 1")
    distinct = np.unique(arr).size
    if k > distinct:
        raise ValueError(f"k={k} exceeds the {distinct} distinct value(s)")

    centroids = _initial_centroids(arr, k)
    trace: list[float] = []
    assignments = np.zeros(arr.size, dtype=np.int64)
    iterations = 0
    for iterations in range(1, max_iters + 1):
        assignments, new_centroids, wcss = _kernels.lloyd_step(arr, centroids)
        trace.append(wcss)
        movement = float(np.abs(new_centroids - centroids).max())
        centroids = new_centroids
        if movement < tol:
            break

    order = np.argsort(centroids, kind="stable")
    remap = np.empty(k, dtype=np.int64)
    remap[order] = np.arange(k)
    centroids = centroids[order]
    assignments = remap[assignments]
    final_wcss = float(((arr - centroids[assignments]) ** 2).sum())
    return ClusteringResult(k=k, centroids=tuple(float(c) for c in centroids),
                            labels=tuple(int(a) for a in assignments),
                            wcss=final_wcss, iterations=iterations,
                            objective_trace=tuple(trace))


def cluster_word_counts(dataset: Dataset, k: int, max_iters: int = 200,
                        tol: float = 1e-9) -> tuple[ClusteringResult, dict[str, int]]:
    values = [case.word_count for case in dataset]
    result = kmeans_1d(values, k, max_iters=max_iters, tol=tol)
    return result, {case.id: result.labels[i] for i, case in enumerate(dataset)}
