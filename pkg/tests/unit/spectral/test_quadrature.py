"""Tests for the composite quadrature rules."""

import numpy as np
import pytest

from ergavg.core.errors import DomainError
from ergavg.spectral.quadrature import (
    gauss_legendre_breakpoints,
    gauss_legendre_panels,
    integrate,
    midpoint_nodes,
)


def test_polynomials_are_exact():
    """Test that one panel of order 16 integrates degree 31 exactly."""
    assert integrate(lambda x: x**31, 0.0, 1.0, panels=1) == pytest.approx(1 / 32)


def test_oscillatory_integral():
    """Test int_0^1 e(10 x) dx = 0 with several panels."""
    value = integrate(lambda x: np.exp(20j * np.pi * x), 0.0, 1.0, panels=8)
    assert abs(value) < 1e-12


def test_weights_sum_to_length():
    """Test that the weights add up to b - a."""
    _, w = gauss_legendre_panels(-1.0, 2.0, panels=5, order=7)
    assert w.sum() == pytest.approx(3.0)


def test_breakpoints_are_respected():
    """Test that no node lies outside its piece and empty pieces are skipped."""
    x, w = gauss_legendre_breakpoints([0.0, 0.25, 0.25, 1.0], panels_per_piece=2)
    assert x.size == 2 * 2 * 16
    assert np.all((x > 0) & (x < 1))
    assert w.sum() == pytest.approx(1.0)


def test_midpoint_rule():
    """Test node placement and exactness on linear functions."""
    x, w = midpoint_nodes(0.0, 1.0, 4)
    np.testing.assert_allclose(x, [0.125, 0.375, 0.625, 0.875])
    assert float(np.dot(w, 3 * x + 1)) == pytest.approx(2.5)


def test_rejects_empty_rules():
    """Test that zero panels are rejected."""
    with pytest.raises(DomainError):
        gauss_legendre_panels(0.0, 1.0, 0)
    with pytest.raises(DomainError):
        midpoint_nodes(0.0, 1.0, 0)
