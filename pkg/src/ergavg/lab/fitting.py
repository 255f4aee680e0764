"""Scaling-exponent fits on log-log and semi-log axes."""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from ergavg.core.errors import DomainError
from ergavg.types import ScalingFit, Series

Point = Tuple[float, float]


def _line(u: np.ndarray, v: np.ndarray) -> Tuple[float, float, float]:
    if np.unique(u).size < 3:
        raise DomainError("a scaling fit needs at least three distinct abscissae")
    fit = linregress(u, v)
    residual = float(np.max(np.abs(v - (fit.slope * u + fit.intercept))))
    return float(fit.slope), float(fit.intercept), residual


def _split(points: Iterable[Point]) -> Tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(list(points), dtype=np.float64).reshape(-1, 2)
    return arr[:, 0], arr[:, 1]


def fit_scaling(points: Sequence[Point]) -> ScalingFit:
    """Least squares of ``log y`` on ``log x``.

    Args:
        points: At least three ``(x, y)`` pairs with distinct positive x and
            positive y

    Returns:
        Slope, intercept and the largest absolute log-deviation

    Raises:
        DomainError: on nonpositive values or fewer than three distinct x

    """
    x, y = _split(points)
    if x.size and (np.any(x <= 0) or np.any(y <= 0)):
        raise DomainError("log-log fit needs positive x and y")
    slope, intercept, residual = _line(np.log(x), np.log(y))
    return ScalingFit(slope=slope, intercept=intercept, residual=residual)


def fit_semilog(points: Sequence[Point]) -> ScalingFit:
    """Least squares of ``log y`` on x; y must be positive."""
    x, y = _split(points)
    if x.size and np.any(y <= 0):
        raise DomainError("semi-log fit needs positive y")
    slope, intercept, residual = _line(x, np.log(y))
    return ScalingFit(slope=slope, intercept=intercept, residual=residual, semilog=True)


def positive_points(series: Series) -> list:
    """Points of a series with strictly positive y (and x)."""
    return [(x, y) for x, y in zip(series.x, series.y) if x > 0 and y > 0]
