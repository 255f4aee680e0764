"""Tests for the model paraproduct and the shifted square function."""

import numpy as np
import pytest

from ergavg.core.errors import AliasingError, CutoffScaleError, DomainError
from ergavg.core.gridfn import GridFunction
from ergavg.core.sequences import LacunarySet
from ergavg.spectral.cutoffs import CutoffKind, CutoffSpec
from ergavg.spectral.paraproduct import (
    model_paraproduct,
    paraproduct_cutoffs,
    paraproduct_kernel_oracle,
    shifted_square_function,
)
from ergavg.spectral.transform import centered_window


class TestParaproductCutoffs:
    """Test suite for the cutoff pair."""

    def test_levels_select_kinds(self):
        """Test that level -C1 is lowpass and other levels are bands."""
        phi, psi = paraproduct_cutoffs(16, -1, 0, 1)
        assert phi.kind is CutoffKind.LOWPASS
        assert phi.scale == pytest.approx(0.125)
        assert psi.kind is CutoffKind.BAND
        assert psi.scale == pytest.approx(1 / 16)

    def test_rejects_bad_levels(self):
        """Test the parameter guards."""
        with pytest.raises(DomainError):
            paraproduct_cutoffs(16, 0, 0, 0)
        with pytest.raises(DomainError):
            paraproduct_cutoffs(16, -3, 0, 2)
        with pytest.raises(CutoffScaleError):
            paraproduct_cutoffs(1, 0, 0, 1)


class TestModelParaproduct:
    """Test suite for the midpoint-rule paraproduct."""

    def test_matches_kernel_oracle(self, random_pair):
        """Test the table-based evaluation against frequency quadrature."""
        f, g = random_pair
        xs = np.array([-4, 0, 5, 12, 20])
        model = model_paraproduct(f, g, 16, 0, 0, 1, panels=512)
        oracle = paraproduct_kernel_oracle(f, g, 16, 0, 0, 1, xs)
        scale = np.max(np.abs(oracle))
        assert scale > 0
        np.testing.assert_allclose(model.at(xs), oracle, rtol=0, atol=1e-4 * scale)

    def test_zero_inputs(self, random_pair):
        """Test that a zero factor gives zero."""
        f, _ = random_pair
        assert model_paraproduct(f, GridFunction(), 16, 0, 0, 1, 8).is_zero
        oracle = paraproduct_kernel_oracle(GridFunction(), f, 16, 0, 0, 1, [0, 1])
        np.testing.assert_array_equal(oracle, 0)

    def test_rejects_nonpositive_panels(self, random_pair):
        """Test the panel guard."""
        f, g = random_pair
        with pytest.raises(DomainError):
            model_paraproduct(f, g, 16, 0, 0, 1, panels=0)


class TestShiftedSquareFunction:
    """Test suite for the shifted square function."""

    eta = CutoffSpec(scale=0.25, kind=CutoffKind.BAND)

    def test_shift_translates_a_single_scale(self, random_pair):
        """Test that lambda_N A N^d is a pure translation."""
        f, _ = random_pair
        scales = LacunarySet(lambda_=2, scales=[8])
        plain = shifted_square_function(f, scales, self.eta, 1.0, 1.0, M=512)
        moved = shifted_square_function(
            f, scales, self.eta, 1.0, 1.0, lambda_by_scale={8: 1.0}, M=512
        )
        lo = centered_window(f, 512)
        xs = np.arange(lo + 16, lo + 480)
        np.testing.assert_allclose(moved.at(xs + 8), plain.at(xs), atol=1e-10)

    def test_squares_add_over_scales(self, random_pair):
        """Test that the squared output sums the squared single-scale outputs."""
        f, _ = random_pair
        shifts = {4: 0.5, 16: -1.0}
        both = shifted_square_function(
            f, LacunarySet(lambda_=2, scales=[4, 16]), self.eta, 1.0, 1.0,
            lambda_by_scale=shifts, M=1024,
        )
        parts = [
            shifted_square_function(
                f, LacunarySet(lambda_=2, scales=[n]), self.eta, 1.0, 1.0,
                lambda_by_scale=shifts, M=1024,
            )
            for n in (4, 16)
        ]
        lo = centered_window(f, 1024)
        xs = np.arange(lo, lo + 1024)
        expected = sum(np.abs(p.at(xs)) ** 2 for p in parts)
        np.testing.assert_allclose(np.abs(both.at(xs)) ** 2, expected, atol=1e-10)

    def test_accepts_callable_symbol(self, random_pair):
        """Test a callable symbol with an explicit support radius."""
        f, _ = random_pair
        scales = LacunarySet(lambda_=2, scales=[8])
        out = shifted_square_function(
            f, scales, self.eta.__call__, 1.0, 1.0, support_radius=0.25, M=512
        )
        ref = shifted_square_function(f, scales, self.eta, 1.0, 1.0, M=512)
        assert out.allclose(ref, atol=1e-12)

    def test_validation(self, random_pair):
        """Test the symbol, dilation and grid guards."""
        f, _ = random_pair
        scales = LacunarySet(lambda_=2, scales=[8])
        low = CutoffSpec(scale=0.25)
        with pytest.raises(DomainError):
            shifted_square_function(f, scales, low, 1.0, 1.0)
        with pytest.raises(DomainError):
            shifted_square_function(f, scales, self.eta.__call__, 1.0, 1.0)
        with pytest.raises(DomainError):
            shifted_square_function(
                f, scales, lambda xi: np.ones_like(xi), 1.0, 1.0, support_radius=0.25
            )
        with pytest.raises(DomainError):
            shifted_square_function(f, scales, self.eta, 0.0, 1.0)
        with pytest.raises(AliasingError):
            shifted_square_function(f, scales, self.eta, 1.0, 1.0, M=64)
