"""Tests for the bilinear averages, the smoothing average and the duals."""

import math

import numpy as np
import pytest

from ergavg.core.errors import DomainError
from ergavg.core.gridfn import GridFunction, lp_norm, pairing, shift
from ergavg.operators.averages import (
    average_family,
    bilinear_average,
    dual_star,
    dual_star_star,
    holder_constant,
    linear_smoothing_average,
    maximal_average,
    sqrt_blocks,
    upper_half_average,
    upper_half_range,
)


def direct_average(f, g, N, upper_half=False):
    """Evaluate the average term by term on a generous window."""
    n_lo = N // 2 + 1 if upper_half else 1
    lo = min(f.start, g.start) - 2
    hi = max(f.stop, g.stop) + N + 2
    xs = np.arange(lo, hi)
    out = np.zeros(xs.size, dtype=complex)
    for n in range(n_lo, N + 1):
        out += f.at(xs - math.isqrt(n)) * g.at(xs - n)
    return GridFunction(out / N, lo)


def direct_smoothing(g, N):
    lo, hi = g.start - 2, g.stop + N + 2
    xs = np.arange(lo, hi)
    out = np.zeros(xs.size, dtype=complex)
    for n in range(1, N + 1):
        out += g.at(xs + math.isqrt(n) - n)
    return GridFunction(out / N, lo)


def test_sqrt_blocks_cover_range():
    """Test that the runs partition [a, b] with constant floor sqrt."""
    seen = []
    for s, a, b in sqrt_blocks(5, 50):
        for n in range(a, b + 1):
            assert math.isqrt(n) == s
            seen.append(n)
    assert seen == list(range(5, 51))
    assert list(sqrt_blocks(3, 2)) == []


def test_upper_half_range():
    """Test that n > N/2 starts at floor(N/2) + 1."""
    assert upper_half_range(10) == (6, 10)
    assert upper_half_range(7) == (4, 7)
    assert upper_half_range(1) == (1, 1)


@pytest.mark.parametrize("N", [1, 2, 3, 9, 17, 64])
def test_bilinear_matches_direct(random_pair, N):
    """Test A_N and the upper-half average against the direct sum."""
    f, g = random_pair
    assert bilinear_average(f, g, N).allclose(direct_average(f, g, N), atol=1e-12)
    assert upper_half_average(f, g, N).allclose(
        direct_average(f, g, N, upper_half=True), atol=1e-12
    )


@pytest.mark.parametrize("N", [1, 4, 10, 33])
def test_smoothing_matches_direct(random_pair, N):
    """Test B_N against the direct sum."""
    _, g = random_pair
    assert linear_smoothing_average(g, N).allclose(direct_smoothing(g, N), atol=1e-12)


def test_delta_inputs():
    """Test A_N(delta_0, delta_0) counts n with floor(sqrt n) = n."""
    d = GridFunction.delta(0)
    # only n = 1 has floor(sqrt n) = n, landing at x = 1
    result = bilinear_average(d, d, 10)
    assert result.allclose(GridFunction([0.1], offset=1))
    assert result.at(1) == pytest.approx(0.1)


def test_smoothing_of_delta_is_multiplicity():
    """Test N B_N delta_0(x) counts n with n - floor(sqrt n) = x."""
    N = 30
    result = linear_smoothing_average(GridFunction.delta(0), N)
    for x in range(0, N):
        count = sum(1 for n in range(1, N + 1) if n - math.isqrt(n) == x)
        assert N * result.at(x).real == pytest.approx(count)


def test_zero_inputs():
    """Test that a zero input gives the zero function."""
    d = GridFunction.delta(0)
    assert bilinear_average(GridFunction(), d, 5).is_zero
    assert upper_half_average(d, GridFunction(), 5).is_zero
    assert linear_smoothing_average(GridFunction(), 5).is_zero


def test_rejects_bad_scale():
    """Test that N < 1 is a domain error."""
    d = GridFunction.delta(0)
    with pytest.raises(DomainError):
        bilinear_average(d, d, 0)


@pytest.mark.parametrize("N", [1, 5, 16, 31])
def test_duality(rng, N):
    """Test the bilinear dual identities of the upper-half average."""
    f = GridFunction(rng.standard_normal(9) + 1j * rng.standard_normal(9), 2)
    g = GridFunction(rng.standard_normal(25) + 1j * rng.standard_normal(25), -15)
    h = GridFunction(rng.standard_normal(40) + 1j * rng.standard_normal(40), -30)
    lhs = pairing(h, upper_half_average(f, g, N))
    assert pairing(f, dual_star(h, g, N)) == pytest.approx(lhs, abs=1e-10)
    assert pairing(g, dual_star_star(h, f, N)) == pytest.approx(lhs, abs=1e-10)


def test_average_family_layout(random_pair):
    """Test that every row of the family equals the single-scale average."""
    f, g = random_pair
    scales = [3, 7, 15]
    lo, table = average_family(f, g, scales)
    assert table.shape[0] == 3
    for row, N in zip(table, scales):
        assert GridFunction(row, lo).allclose(upper_half_average(f, g, N))


def test_maximal_average_dominates(random_pair):
    """Test the maximal function against each single-scale average."""
    f, g = random_pair
    sup = maximal_average(f, g, 20)
    for N in range(1, 21):
        avg = bilinear_average(f, g, N)
        xs = np.arange(avg.start, avg.stop)
        assert np.all(sup.at(xs).real >= np.abs(avg.at(xs)) - 1e-12)
    xs = np.arange(sup.start, sup.stop)
    best = np.max(
        [np.abs(bilinear_average(f, g, N).at(xs)) for N in range(1, 21)], axis=0
    )
    np.testing.assert_allclose(sup.at(xs).real, best, atol=1e-12)


def test_holder_constant(rng):
    """Test the Hoelder ratio is the normalised l^p norm."""
    f = GridFunction(rng.choice([-1.0, 1.0], 16))
    g = GridFunction(rng.choice([-1.0, 1.0], 16))
    expected = lp_norm(upper_half_average(f, g, 8), 1.0) / (
        lp_norm(f, 2) * lp_norm(g, 2)
    )
    assert holder_constant(f, g, 8, 2, 2) == pytest.approx(expected)
    with pytest.raises(DomainError):
        holder_constant(GridFunction(), g, 8, 2, 2)


def random_function(rng, length, offset):
    values = rng.standard_normal(length) + 1j * rng.standard_normal(length)
    return GridFunction(values, offset)


class TestAverageIdentities:
    """Test suite for the structural identities of the averages."""

    @pytest.mark.parametrize("average", [bilinear_average, upper_half_average])
    def test_bilinearity(self, rng, average):
        """Test linearity in each argument separately."""
        f, f2 = random_function(rng, 11, -4), random_function(rng, 7, 3)
        g, g2 = random_function(rng, 30, -12), random_function(rng, 19, 5)
        alpha = 0.7 - 1.3j
        N = 23
        lhs = average(alpha * f + f2, g, N)
        rhs = alpha * average(f, g, N) + average(f2, g, N)
        assert lhs.allclose(rhs, atol=1e-12)
        lhs = average(f, alpha * g + g2, N)
        rhs = alpha * average(f, g, N) + average(f, g2, N)
        assert lhs.allclose(rhs, atol=1e-12)

    @pytest.mark.parametrize("k", [-17, 1, 40])
    def test_shift_covariance(self, random_pair, k):
        """Test A_N(shift(f, k), shift(g, k)) = shift(A_N(f, g), k)."""
        f, g = random_pair
        for average in (bilinear_average, upper_half_average):
            moved = average(shift(f, k), shift(g, k), 19)
            assert moved.allclose(shift(average(f, g, 19), k), atol=1e-12)

    @pytest.mark.parametrize("N", list(range(2, 40)))
    def test_upper_half_identity(self, random_pair, N):
        """Test upper-half = A_N - (floor(N/2)/N) A_floor(N/2)."""
        f, g = random_pair
        half = N // 2
        expected = bilinear_average(f, g, N) - (half / N) * bilinear_average(f, g, half)
        assert upper_half_average(f, g, N).allclose(expected, atol=1e-12)

    @pytest.mark.parametrize("N", [16, 64, 256])
    def test_duality_at_full_size(self, rng, N):
        """Test both dual identities to 1e-12 relative error with supports of 256."""
        f = random_function(rng, 256, -40)
        g = random_function(rng, 256, 17)
        h = random_function(rng, 256, 0)
        lhs = pairing(h, upper_half_average(f, g, N))
        scale = lp_norm(h, 1) * lp_norm(f, math.inf) * lp_norm(g, math.inf)
        assert abs(lhs) > 1e-6 * scale
        assert pairing(f, dual_star(h, g, N)) == pytest.approx(lhs, rel=1e-12)
        assert pairing(g, dual_star_star(h, f, N)) == pytest.approx(lhs, rel=1e-12)
