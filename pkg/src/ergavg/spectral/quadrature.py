"""Composite Gauss-Legendre and midpoint rules."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from ergavg.core.errors import DomainError

DEFAULT_ORDER = 16


@lru_cache(maxsize=32)
def _reference_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_legendre_panels(
    a: float, b: float, panels: int, order: int = DEFAULT_ORDER
) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of ``panels`` equal Gauss-Legendre panels on ``[a, b]``.

    Args:
        a: Left end
        b: Right end
        panels: Number of equal sub-intervals
        order: Nodes per panel

    Returns:
        Flat arrays of nodes and weights

    """
    if panels < 1 or order < 1:
        raise DomainError("panels and order must be positive")
    x, w = _reference_rule(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    return (mid + half * x).ravel(), (half * w).ravel()


def gauss_legendre_breakpoints(
    breakpoints: Sequence[float], panels_per_piece: int, order: int = DEFAULT_ORDER
) -> Tuple[np.ndarray, np.ndarray]:
    """Composite rule whose panels never straddle the given breakpoints."""
    nodes, weights = [], []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        if b > a:
            x, w = gauss_legendre_panels(a, b, panels_per_piece, order)
            nodes.append(x)
            weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def midpoint_nodes(a: float, b: float, panels: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite midpoint rule."""
    if panels < 1:
        raise DomainError("panels must be positive")
    h = (b - a) / panels
    return a + h * (np.arange(panels) + 0.5), np.full(panels, h)


def integrate(
    fn: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    panels: int,
    order: int = DEFAULT_ORDER,
) -> complex:
    """Integrate a vectorized function with composite Gauss-Legendre panels."""
    x, w = gauss_legendre_panels(a, b, panels, order)
    return complex(np.dot(w, fn(x)))
