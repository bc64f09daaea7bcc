"""Log-log least-squares fits for degree distributions and degree growth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from igtopo.errors import FitError
from igtopo.generators import GrowthTrace
from igtopo.metrics import DegreeDistribution

__all__ = ["FitDiagnostics", "log_binned_density", "fit_power_law_exponent", "fit_theta"]

BINS_PER_DECADE = 10
THETA_TRANSIENT_SAMPLES = 10


@dataclass
class FitDiagnostics:
    points: int
    residual: float  # root-mean-square residual in log space
    intercept: float
    per_series: list[float] | None = None


def _line_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid**2)))


def log_binned_density(
    counts: dict[int, int], k_min: int = 1, bins_per_decade: int = BINS_PER_DECADE
) -> tuple[np.ndarray, np.ndarray]:
    """Per-degree probability averaged over logarithmic degree bins.

    Bin edges are ``k_min * 10**(i / bins_per_decade)``. Each bin's density is
    its node count divided by the total node count and by the number of
    integer degrees it spans (capped at the largest observed degree); its
    centre is the geometric mean of the smallest and largest integer it
    spans. Bins with no integers or no nodes are dropped.
    """
    total = sum(counts.values())
    k_hi = max(k for k, c in counts.items() if c > 0)
    n_edges = int(np.ceil(bins_per_decade * np.log10(k_hi / k_min))) + 2
    edges = k_min * 10.0 ** (np.arange(n_edges) / bins_per_decade)
    centres, density = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        first = int(np.ceil(lo - 1e-9))
        last = min(int(np.ceil(hi - 1e-9)) - 1, k_hi)
        if last < first:
            continue
        mass = sum(counts.get(k, 0) for k in range(first, last + 1))
        if mass == 0:
            continue
        centres.append(np.sqrt(first * last))
        density.append(mass / total / (last - first + 1))
    return np.asarray(centres), np.asarray(density)


def fit_power_law_exponent(dist: DegreeDistribution | dict[int, int], k_min: int = 3):
    """Slope of log P(k) against log k over log-binned degrees ``>= k_min``.

    Returns ``(exponent, FitDiagnostics)``; the exponent is negative for a
    decaying distribution.
    """
    counts = dist.counts if isinstance(dist, DegreeDistribution) else dict(dist)
    if k_min < 1:
        raise FitError("k_min must be >= 1")
    support = {k: c for k, c in counts.items() if k >= k_min and c > 0}
    if len(support) < 5:
        raise FitError(f"need >= 5 distinct degrees >= {k_min}, found {len(support)}")
    # normalise against all nodes so P(k) keeps its meaning
    total = sum(counts.values())
    centres, density = log_binned_density(support, k_min)
    density = density * sum(support.values()) / total
    if len(centres) < 2:
        raise FitError("fewer than 2 non-empty bins")
    slope, intercept, rms = _line_fit(np.log10(centres), np.log10(density))
    return slope, FitDiagnostics(points=len(centres), residual=rms, intercept=intercept)


def fit_theta(trace: GrowthTrace, transient: int = THETA_TRANSIENT_SAMPLES):
    """Growth exponent of ``k(t) ~ t**theta`` averaged over the traced nodes.

    ``t`` is the number of steps since the node's insertion. The first
    ``transient`` samples after insertion are dropped; every node then needs
    at least 20 samples spanning two decades of ``t``.
    """
    if not trace.tracked_nodes:
        raise FitError("trace has no samples")
    slopes, residuals, points = [], [], 0
    for node, t0 in sorted(trace.tracked_nodes.items()):
        ts, ks = trace.series(node)
        s = np.asarray(ts, dtype=float) - t0
        k = np.asarray(ks, dtype=float)
        after = s > 0
        s, k = s[after][transient:], k[after][transient:]
        if len(s) < 20:
            raise FitError(f"node {node}: {len(s)} samples after the transient, need 20")
        if s[-1] < 100 * s[0]:
            raise FitError(f"node {node}: samples span {s[-1] / s[0]:.1f}x in t, need 100x")
        if k.min() <= 0:
            raise FitError(f"node {node}: zero degree in trace")
        slope, _, rms = _line_fit(np.log10(s), np.log10(k))
        slopes.append(slope)
        residuals.append(rms)
        points += len(s)
    theta = float(np.mean(slopes))
    return theta, FitDiagnostics(
        points=points, residual=float(np.mean(residuals)), intercept=float("nan"), per_series=slopes
    )
