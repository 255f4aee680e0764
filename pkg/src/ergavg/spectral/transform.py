"""Fourier transforms between finitely supported functions and torus grids.

Convention: ``f^(xi) = sum_x f(x) e(-x xi)`` with ``e(t) = exp(2 pi i t)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Dict

import numpy as np

from ergavg.core.errors import AliasingError, DomainError
from ergavg.core.gridfn import GridFunction


def e(t: Any) -> Any:
    """Return ``exp(2 pi i t)``."""
    return np.exp(2j * np.pi * np.asarray(t, dtype=np.float64))


def reduce_torus(xi: Any) -> Any:
    """Reduce frequencies to ``[-1/2, 1/2)``."""
    xi = np.asarray(xi, dtype=np.float64)
    return xi - np.floor(xi + 0.5)


def torus_distance(xi: Any) -> Any:
    """Return ``||xi||``, the distance to the nearest integer."""
    return np.abs(reduce_torus(xi))


def next_pow2(n: int) -> int:
    return 1 << max(int(n) - 1, 0).bit_length()


def default_grid_size(length: int, padding: int = 8) -> int:
    """Smallest power of two at least ``padding`` times the support length."""
    return max(next_pow2(padding * max(length, 1)), padding)


def grid_frequencies(M: int) -> np.ndarray:
    """Grid points ``j/M`` reduced to ``[-1/2, 1/2)``, in FFT order."""
    return reduce_torus(np.arange(M) / M)


@dataclass(frozen=True)
class FrequencyGrid:
    """Transform values at ``xi_j = j/M`` for ``j = 0 .. M-1``."""

    M: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128).ravel()
        if values.size != self.M or self.M < 1:
            raise DomainError(f"grid of size {self.M} got {values.size} values")
        object.__setattr__(self, "values", values)

    @property
    def frequencies(self) -> np.ndarray:
        return grid_frequencies(self.M)

    def apply(self, symbol: Callable[[np.ndarray], np.ndarray]) -> FrequencyGrid:
        """Multiply by ``symbol`` evaluated at the reduced grid frequencies."""
        return FrequencyGrid(self.M, self.values * symbol(self.frequencies))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "M": self.M,
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> FrequencyGrid:
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
        return cls(int(data["M"]), re + 1j * im)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> FrequencyGrid:
        return cls.from_dict(json.loads(text))


def torus_transform(f: GridFunction, M: int) -> FrequencyGrid:
    """Sample ``f^`` on the M-point grid using the FFT."""
    if M < max(f.length, 1):
        raise AliasingError(f"grid size {M} is below support length {f.length}")
    if f.is_zero:
        return FrequencyGrid(M, np.zeros(M, dtype=np.complex128))
    spectrum = np.fft.fft(f.values, n=M)
    # the FFT places the first sample at 0; undo the offset
    return FrequencyGrid(M, spectrum * e(-f.offset * np.arange(M) / M))


def torus_inverse(grid: FrequencyGrid, lo: int) -> GridFunction:
    """Invert a grid onto the window ``[lo, lo + M)``."""
    M = grid.M
    samples = np.fft.ifft(grid.values * e(lo * np.arange(M) / M))
    return GridFunction(samples, offset=lo)


def direct_transform(f: GridFunction, xis: np.ndarray) -> np.ndarray:
    """``f^`` at arbitrary frequencies by direct summation."""
    xis = np.atleast_1d(np.asarray(xis, dtype=np.float64))
    if f.is_zero:
        return np.zeros(xis.size, dtype=np.complex128)
    xs = np.arange(f.start, f.stop)
    return e(-np.outer(xis, xs)) @ f.values


def centered_window(f: GridFunction, M: int) -> int:
    """Left end of the length-M window that centres the support of ``f``."""
    return f.start - (M - f.length) // 2


def apply_symbol(
    f: GridFunction,
    symbol: Callable[[np.ndarray], np.ndarray],
    M: int,
    lo: int | None = None,
) -> GridFunction:
    """Fourier multiplier on the M-periodic grid, returned on a window of length M."""
    if lo is None:
        lo = centered_window(f, M)
    return torus_inverse(torus_transform(f, M).apply(symbol), lo)
