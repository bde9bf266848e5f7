"""Post-processing: moments, power-law fits, and a normality statistic.

Conventions: standard deviations use the n-1 denominator everywhere,
including the standardization inside the KS statistic, and the KS value
is the raw sup-distance with no small-sample adjustment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ergmwell.graphs import GraphState


class DegenerateSampleError(ValueError):
    """A statistic that needs spread was given a constant sample."""


@dataclass(frozen=True)
class StatSeries:
    """Values of one statistic across increasing system sizes."""

    label: str
    ns: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.ns) != len(self.values):
            raise ValueError("sizes and values must align")
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise ValueError("sizes must be strictly increasing")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("values must be finite")


def summary_stats(values) -> tuple[float, float]:
    """Sample mean and standard deviation (n-1 denominator)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size < 2:
        raise ValueError("need at least two values for a standard deviation")
    return float(arr.mean()), float(arr.std(ddof=1))


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual: float  # root-mean-square residual in log space


def loglog_fit(series: StatSeries) -> FitResult:
    """Least-squares line through (log n, log value)."""
    if len(series.ns) < 3:
        raise ValueError("need at least three points to fit")
    if any(v <= 0.0 for v in series.values):
        raise ValueError(f"series {series.label!r} has a nonpositive value")
    lx = np.log(np.asarray(series.ns, dtype=np.float64))
    ly = np.log(np.asarray(series.values, dtype=np.float64))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        residual=float(np.sqrt(np.mean(resid**2))),
    )


def normal_cdf(t: float) -> float:
    return 0.5 * (1.0 + math.erf(t / math.sqrt(2.0)))


def ks_normal(values) -> float:
    """Sup-distance between the standardized empirical CDF and the normal CDF.

    Values are shifted by the sample mean and scaled by the sample
    standard deviation; the distance is evaluated on both sides of every
    jump of the empirical CDF.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size < 2:
        raise ValueError("need at least two values")
    mean, std = summary_stats(arr)
    if std == 0.0:
        raise DegenerateSampleError("all values equal: zero standard deviation")
    z = np.sort((arr - mean) / std)
    n = z.size
    d = 0.0
    for i in range(n):
        c = normal_cdf(z[i])
        d = max(d, abs((i + 1) / n - c), abs(i / n - c))
    return d


def empirical_covariance(
    samples: list[GraphState], e: tuple[int, int], e2: tuple[int, int]
) -> float:
    """Unbiased sample covariance of two edge indicators across samples."""
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    if tuple(sorted(e)) == tuple(sorted(e2)):
        raise ValueError("edges must be distinct")
    a = np.array([g.adj[e[0], e[1]] for g in samples], dtype=np.float64)
    b = np.array([g.adj[e2[0], e2[1]] for g in samples], dtype=np.float64)
    return float(np.cov(a, b, ddof=1)[0, 1])
