"""Tests for the rotation systems."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from ergavg.core.errors import DomainError
from ergavg.lab.cyclic import CyclicSystem, fibonacci_pair


def direct_average(system, f, g, N):
    """Reference: the defining sum, one term at a time."""
    Q, a = system.Q, system.a
    out = np.zeros(Q, dtype=np.complex128)
    for x in range(Q):
        for n in range(1, N + 1):
            out[x] += f[(x - a * math.isqrt(n)) % Q] * g[(x - a * n) % Q]
    return out / N


class TestCyclicSystem:
    """Test suite for CyclicSystem."""

    def test_fibonacci(self):
        """Test the Fibonacci moduli."""
        assert fibonacci_pair(3) == (2, 1)
        assert fibonacci_pair(7) == (13, 8)
        system = CyclicSystem.fibonacci(16)
        assert (system.Q, system.a) == (987, 610)
        with pytest.raises(DomainError):
            fibonacci_pair(2)

    def test_rejects_non_coprime_rotation(self):
        """Test the coprimality check."""
        with pytest.raises(ValidationError):
            CyclicSystem(Q=12, a=8)

    def test_interval(self):
        """Test that intervals wrap around the modulus."""
        system = CyclicSystem(Q=7, a=3)
        expected = [1, 0, 0, 0, 0, 1, 1]
        np.testing.assert_array_equal(system.interval(3, start=5), expected)
        with pytest.raises(DomainError):
            system.interval(8)

    def test_average_matches_direct_sum(self, rng):
        """Test the run-histogram evaluation against the defining sum."""
        system = CyclicSystem.fibonacci(7)
        f = rng.standard_normal(13) + 1j * rng.standard_normal(13)
        g = rng.standard_normal(13)
        for N in (1, 5, 40):
            np.testing.assert_allclose(
                system.average(f, g, N), direct_average(system, f, g, N), atol=1e-12
            )

    def test_real_inputs_give_real_output(self):
        """Test the real output and the whole-space mean."""
        system = CyclicSystem(Q=11, a=4)
        ones = np.ones(11)
        out = system.average(ones, ones, 30)
        assert np.isrealobj(out)
        assert system.mean_average(ones, ones, 30) == pytest.approx(1.0)

    def test_shape_guard(self):
        """Test that inputs must live on Z/QZ."""
        system = CyclicSystem(Q=5, a=2)
        with pytest.raises(DomainError):
            system.average(np.ones(4), np.ones(5), 3)
        with pytest.raises(DomainError):
            system.average(np.ones(5), np.ones(5), 0)
