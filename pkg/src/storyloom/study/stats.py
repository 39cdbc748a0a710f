"""Descriptive statistics and internal-consistency math.

All spreads are sample statistics (n-1 denominator) throughout the toolkit.
"""

from __future__ import annotations

import math

import numpy as np


class UndefinedStatisticError(ValueError):
    """The requested statistic does not exist for this input."""


def descriptive_stats(values) -> tuple[float, float]:
    """Mean and sample standard deviation (n-1 denominator)."""
    data = [float(v) for v in values]
    n = len(data)
    if n < 2:
        raise UndefinedStatisticError("sample standard deviation needs at least 2 values")
    mean = sum(data) / n
    variance = sum((x - mean) ** 2 for x in data) / (n - 1)
    return mean, math.sqrt(variance)


def cronbach_alpha(item_matrix) -> float:
    """Cronbach's alpha for a participants x items matrix.

    alpha = k/(k-1) * (1 - sum(item variances) / variance(total score)),
    with sample variances. No missing cells allowed.
    """
    matrix = np.asarray(item_matrix, dtype=float)
    if matrix.ndim != 2:
        raise UndefinedStatisticError("item matrix must be two-dimensional")
    participants, k = matrix.shape
    if k < 2:
        raise UndefinedStatisticError("alpha needs at least 2 items")
    if participants < 2:
        raise UndefinedStatisticError("alpha needs at least 2 participants")
    if np.isnan(matrix).any():
        raise UndefinedStatisticError("item matrix has missing cells")

    item_variances = matrix.var(axis=0, ddof=1)
    total_variance = matrix.sum(axis=1).var(ddof=1)
    if total_variance == 0:
        raise UndefinedStatisticError("total score has zero variance; alpha is undefined")
    return (k / (k - 1)) * (1.0 - item_variances.sum() / total_variance)
