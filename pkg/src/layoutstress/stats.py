"""Rank statistics and monotone regression.

Shared by the Shepard goodness score (Spearman correlation) and non-metric
stress (isotonic regression of drawing distances).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstantSeriesError


@dataclass(frozen=True, eq=False)
class RankedSeries:
    """Values with their 1-based average ranks (ties share the group mean)."""

    values: np.ndarray
    ranks: np.ndarray


@dataclass(frozen=True, eq=False)
class IsotonicFit:
    """Non-decreasing least-squares fit; constant on each pooled block."""

    fitted: np.ndarray


def average_ranks(values) -> RankedSeries:
    """Assign 1-based ranks, averaging within groups of equal values."""
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("values must be a non-empty 1D sequence")
    if not np.all(np.isfinite(vals)):
        raise ValueError("values must be finite")
    n = vals.size
    order = np.argsort(vals, kind="stable")
    sorted_vals = vals[order]
    new_group = np.empty(n, dtype=bool)
    new_group[0] = True
    new_group[1:] = sorted_vals[1:] != sorted_vals[:-1]
    group_id = np.cumsum(new_group) - 1
    counts = np.bincount(group_id)
    first_position = np.concatenate(([0], np.cumsum(counts)[:-1]))
    group_rank = first_position + (counts + 1) / 2.0
    ranks = np.empty(n, dtype=float)
    ranks[order] = group_rank[group_id]
    return RankedSeries(values=vals, ranks=ranks)


def spearman(xs, ys) -> float:
    """Spearman rank correlation: Pearson correlation of average ranks."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"series must be equal-length 1D, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise ValueError("need at least 2 observations")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ConstantSeriesError("rank correlation is undefined for a constant series")
    rx = average_ranks(x).ranks
    ry = average_ranks(y).ranks
    # exact +-1 for identical or exactly mirrored rankings
    if np.array_equal(rx, ry):
        return 1.0
    if np.array_equal(rx + ry, np.full(x.size, x.size + 1.0)):
        return -1.0
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    denominator = float(np.sqrt(np.sum(dx * dx) * np.sum(dy * dy)))
    if denominator == 0.0:
        raise ConstantSeriesError("rank correlation is undefined for a constant series")
    rho = float(np.sum(dx * dy) / denominator)
    return min(1.0, max(-1.0, rho))


def isotonic_regression(ys, weights=None) -> IsotonicFit:
    """Weighted least-squares fit constrained to be non-decreasing.

    Pool-adjacent-violators: exact optimum, linear in the input length.
    """
    y = np.asarray(ys, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("input must be a non-empty 1D sequence")
    if weights is None:
        w = np.ones_like(y)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != y.shape:
            raise ValueError("weights must match input length")
        if np.any(w <= 0.0):
            raise ValueError("weights must be positive")

    # each block: (mean, weight, count); merge while the tail decreases
    means: list[float] = []
    block_w: list[float] = []
    block_n: list[int] = []
    for value, weight in zip(y.tolist(), w.tolist()):
        mean, wsum, count = value, weight, 1
        while means and means[-1] > mean:
            pm, pw, pc = means.pop(), block_w.pop(), block_n.pop()
            total = pw + wsum
            mean = (pm * pw + mean * wsum) / total
            wsum = total
            count += pc
        means.append(mean)
        block_w.append(wsum)
        block_n.append(count)

    fitted = np.empty_like(y)
    pos = 0
    for mean, count in zip(means, block_n):
        fitted[pos : pos + count] = mean
        pos += count
    return IsotonicFit(fitted=fitted)
