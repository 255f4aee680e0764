"""Smooth cutoff family, dyadic cutoff symbols and band projections."""

from __future__ import annotations

import math
import threading
from enum import Enum
from functools import partial
from typing import Any, Optional

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field
from scipy.interpolate import CubicSpline

from ergavg.core.errors import (
    AliasingError,
    CutoffScaleError,
    DomainError,
    RefinementError,
)
from ergavg.core.gridfn import GridFunction
from ergavg.spectral.quadrature import gauss_legendre_panels
from ergavg.spectral.transform import apply_symbol, default_grid_size

logger = structlog.get_logger(__name__)

TABLE_STEP = 2.0**-10
TABLE_RADIUS = 128.0
DECAY_FLOOR = 1e-12
INTERPOLATION_BUDGET = 1e-9


def _bump(u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def cutoff_psi(t: Any) -> Any:
    """The fixed even cutoff: 1 on ``[-1/2, 1/2]``, 0 off ``(-1, 1)``, smooth between.

    On ``1/2 < |t| < 1`` it is ``s(u) = b(1-u) / (b(1-u) + b(u))`` with
    ``u = 2|t| - 1`` and ``b(u) = exp(-1/u)`` for ``u > 0``.
    """
    scalar = np.ndim(t) == 0
    a = np.abs(np.atleast_1d(np.asarray(t, dtype=np.float64)))
    u = np.clip(2.0 * a - 1.0, 0.0, 1.0)
    left, right = _bump(1.0 - u), _bump(u)
    with np.errstate(invalid="ignore"):
        s = np.where(u <= 0, 1.0, np.where(u >= 1, 0.0, left / (left + right)))
    return float(s[0]) if scalar else s.reshape(np.shape(t))


class CutoffKind(str, Enum):
    """Which piece of the dyadic decomposition a cutoff selects."""

    LOWPASS = "lowpass"
    BAND = "band"
    HIGHPASS = "highpass"


def dyadic_scale(x: float) -> float:
    """Return ``2**ceil(log2 x)`` exactly."""
    if not x > 0:
        raise DomainError(f"cutoff scale must be positive, got {x}")
    mantissa, exponent = math.frexp(x)
    return x if mantissa == 0.5 else math.ldexp(1.0, exponent)


class CutoffSpec(BaseModel):
    """A lowpass, band or highpass cutoff at a dyadic scale.

    With ``S = dyadic_scale(scale)``: lowpass is ``Psi(xi / S)``, band is
    ``Psi(xi / S) - Psi(2 xi / S)`` and highpass is ``1 - Psi(xi / S)``.
    """

    model_config = ConfigDict(frozen=True)

    scale: float = Field(gt=0)
    kind: CutoffKind = CutoffKind.LOWPASS

    @property
    def dyadic(self) -> float:
        return dyadic_scale(self.scale)

    def __call__(self, xi: Any) -> Any:
        S = self.dyadic
        low = cutoff_psi(np.asarray(xi, dtype=np.float64) / S)
        if self.kind is CutoffKind.LOWPASS:
            return low
        if self.kind is CutoffKind.HIGHPASS:
            return 1.0 - low
        return low - cutoff_psi(2.0 * np.asarray(xi, dtype=np.float64) / S)

    def check_torus(self) -> None:
        """Lowpass and band cutoffs must fit inside ``[-1/2, 1/2]``."""
        if self.kind is not CutoffKind.HIGHPASS and self.scale > 0.5:
            raise CutoffScaleError(f"{self.kind.value} scale {self.scale} exceeds 1/2")


def band_project(
    f: GridFunction, spec: CutoffSpec, M: Optional[int] = None
) -> GridFunction:
    """Apply the cutoff as a Fourier multiplier on an M-point grid.

    The result lives on the length-M window centred on the support of ``f``;
    lowpass and highpass projections at one scale sum back to ``f`` there.
    """
    spec.check_torus()
    if M is None:
        M = default_grid_size(f.length)
    if M < 8 * f.length:
        raise AliasingError(f"grid size {M} is below 8 x support length {f.length}")
    return apply_symbol(f, spec, M)


def _psi_inverse_direct(y: np.ndarray, panels: int = 64) -> np.ndarray:
    """Real-line inverse transform of Psi by quadrature.

    ``Psi`` is 1 on ``[-1/2, 1/2]``, so the inverse is ``sinc(y)`` plus
    ``2 int_{1/2}^{1} Psi(xi) cos(2 pi y xi) dxi``.
    """
    nodes, weights = gauss_legendre_panels(0.5, 1.0, panels)
    wpsi = weights * cutoff_psi(nodes)
    shape = np.shape(y)
    y = np.asarray(y, dtype=np.float64).ravel()
    out = np.empty(y.size)
    for lo in range(0, y.size, 4096):
        chunk = y[lo : lo + 4096]
        out[lo : lo + 4096] = np.sinc(chunk) + 2.0 * np.cos(
            2.0 * np.pi * np.outer(chunk, nodes)
        ) @ wpsi
    return out.reshape(shape)


class PsiInverseTable:
    """Cached samples of the inverse transform of Psi on ``[0, 128]``.

    Values between samples come from a cubic spline. Beyond ``radius`` the
    transform is below ``1e-12`` and is treated as zero.
    """

    def __init__(self, step: float = TABLE_STEP, extent: float = TABLE_RADIUS):
        self.step = step
        self.grid = np.arange(0.0, extent + step / 2, step)
        self.samples = _psi_inverse_direct(self.grid)
        above = np.flatnonzero(np.abs(self.samples) >= DECAY_FLOOR)
        last = int(above[-1]) + 1
        self.radius = float(self.grid[last]) if last < self.grid.size else extent
        self.spline = CubicSpline(self.grid, self.samples)
        self.refinement_error = self._refinement_check()
        logger.info(
            "psi_inverse_table_built",
            points=int(self.grid.size),
            radius=self.radius,
            refinement_error=self.refinement_error,
        )

    def _refinement_check(self, stride: int = 61) -> float:
        mids = self.grid[:-1:stride] + self.step / 2
        err = float(np.max(np.abs(self.spline(mids) - _psi_inverse_direct(mids))))
        if err > INTERPOLATION_BUDGET:
            raise RefinementError(
                f"inverse cutoff table interpolation error {err:.3e} exceeds budget"
            )
        return err

    def __call__(self, y: Any) -> np.ndarray:
        a = np.abs(np.asarray(y, dtype=np.float64))
        out = np.zeros(a.shape)
        inside = a <= self.radius
        out[inside] = self.spline(a[inside])
        return out


_table: Optional[PsiInverseTable] = None
_table_lock = threading.Lock()


def psi_inverse_table() -> PsiInverseTable:
    """Return the process-wide table, building it on first use."""
    global _table
    if _table is None:
        with _table_lock:
            if _table is None:
                _table = PsiInverseTable()
    return _table


def cutoff_kernel(
    spec: CutoffSpec, y: Any, panels: Optional[int] = None
) -> np.ndarray:
    """Real-line inverse transform of a lowpass or band cutoff at ``y``.

    Values come from the cached table unless ``panels`` is given, in which
    case the inverse transform of Psi is integrated afresh with that many
    Gauss-Legendre panels.
    """
    if spec.kind is CutoffKind.HIGHPASS:
        raise DomainError("a highpass cutoff has no integrable kernel")
    if panels is None:
        profile: Any = psi_inverse_table()
    else:
        profile = partial(_psi_inverse_direct, panels=panels)
    S = spec.dyadic
    y = np.asarray(y, dtype=np.float64)
    low = S * profile(S * y)
    if spec.kind is CutoffKind.LOWPASS:
        return low
    return low - 0.5 * S * profile(0.5 * S * y)


def kernel_radius(spec: CutoffSpec) -> float:
    """Half-width outside which :func:`cutoff_kernel` vanishes."""
    narrowest = 0.5 * spec.dyadic if spec.kind is CutoffKind.BAND else spec.dyadic
    return psi_inverse_table().radius / narrowest
