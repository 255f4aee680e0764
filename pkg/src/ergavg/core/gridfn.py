"""Finitely supported complex functions on the integers."""

from __future__ import annotations

import json
import math
from typing import Any, Dict, Iterable, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ergavg.core.errors import DomainError

Scalar = Union[int, float, complex]


class GridFunction:
    """A finitely supported function ``f: Z -> C``.

    Samples are stored from ``offset`` onward in canonical form: leading and
    trailing exact zeros are trimmed, and the zero function has no samples
    and offset 0. Instances are immutable.
    """

    __slots__ = ("_offset", "_values")

    def __init__(self, values: Iterable[Scalar] | np.ndarray = (), offset: int = 0):
        if not isinstance(values, np.ndarray):
            values = list(values)
        arr = np.array(values, dtype=np.complex128).ravel()
        nonzero = np.flatnonzero(arr != 0)
        if nonzero.size == 0:
            arr = np.zeros(0, dtype=np.complex128)
            offset = 0
        else:
            first, last = int(nonzero[0]), int(nonzero[-1])
            arr = arr[first : last + 1].copy()
            offset = int(offset) + first
        arr.flags.writeable = False
        self._values = arr
        self._offset = int(offset)

    # construction helpers

    @classmethod
    def zero(cls) -> GridFunction:
        """Return the zero function."""
        return cls()

    @classmethod
    def delta(cls, at: int = 0) -> GridFunction:
        """Return the point mass at ``at``."""
        return cls([1.0], offset=at)

    @classmethod
    def indicator(cls, start: int, stop: int) -> GridFunction:
        """Return the indicator of the integer interval ``[start, stop)``."""
        return cls(np.ones(max(stop - start, 0)), offset=start)

    # accessors

    @property
    def offset(self) -> int:
        return self._offset

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def start(self) -> int:
        """First stored index."""
        return self._offset

    @property
    def stop(self) -> int:
        """One past the last stored index."""
        return self._offset + self._values.size

    @property
    def length(self) -> int:
        """Length of the stored support interval."""
        return int(self._values.size)

    @property
    def is_zero(self) -> bool:
        return self._values.size == 0

    @property
    def support_size(self) -> int:
        """Number of nonzero samples."""
        return int(np.count_nonzero(self._values))

    def at(self, xs: int | np.ndarray) -> Any:
        """Evaluate at an integer or an integer array; zero off support."""
        xs_arr = np.asarray(xs, dtype=np.int64)
        idx = xs_arr - self._offset
        inside = (idx >= 0) & (idx < self._values.size)
        out = np.zeros(xs_arr.shape, dtype=np.complex128)
        out[inside] = self._values[idx[inside]]
        if np.ndim(xs) == 0:
            return complex(out)
        return out

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Dense samples on ``[lo, hi)``."""
        out = np.zeros(max(hi - lo, 0), dtype=np.complex128)
        if self.is_zero or hi <= lo:
            return out
        a, b = max(lo, self.start), min(hi, self.stop)
        if a < b:
            out[a - lo : b - lo] = self._values[a - self._offset : b - self._offset]
        return out

    # arithmetic

    def _combine(self, other: GridFunction, sign: float) -> GridFunction:
        if self.is_zero:
            return other if sign > 0 else -other
        if other.is_zero:
            return self
        lo, hi = min(self.start, other.start), max(self.stop, other.stop)
        return GridFunction(self.window(lo, hi) + sign * other.window(lo, hi), lo)

    def __add__(self, other: GridFunction) -> GridFunction:
        return self._combine(other, 1.0)

    def __sub__(self, other: GridFunction) -> GridFunction:
        return self._combine(other, -1.0)

    def __neg__(self) -> GridFunction:
        return GridFunction(-self._values, self._offset)

    def __mul__(self, other: Union[Scalar, GridFunction]) -> GridFunction:
        if isinstance(other, GridFunction):
            lo, hi = max(self.start, other.start), min(self.stop, other.stop)
            if self.is_zero or other.is_zero or lo >= hi:
                return GridFunction()
            return GridFunction(self.window(lo, hi) * other.window(lo, hi), lo)
        return GridFunction(self._values * complex(other), self._offset)

    __rmul__ = __mul__

    def conj(self) -> GridFunction:
        return GridFunction(np.conj(self._values), self._offset)

    def abs(self) -> GridFunction:
        return GridFunction(np.abs(self._values), self._offset)

    def shift(self, k: int) -> GridFunction:
        """Return ``x -> f(x - k)``."""
        return shift(self, k)

    def modulate(self, theta: float) -> GridFunction:
        """Return ``x -> e(theta x) f(x)``."""
        xs = np.arange(self.start, self.stop)
        return GridFunction(self._values * np.exp(2j * np.pi * theta * xs), self.start)

    # comparison

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridFunction):
            return NotImplemented
        return self._offset == other._offset and np.array_equal(
            self._values, other._values
        )

    def __hash__(self) -> int:
        return hash((self._offset, self._values.tobytes()))

    def allclose(self, other: GridFunction, atol: float = 1e-12) -> bool:
        """Pointwise comparison up to ``atol`` on the union of supports."""
        if self.is_zero and other.is_zero:
            return True
        lo = min(self.start, other.start)
        hi = max(self.stop, other.stop)
        diff = self.window(lo, hi) - other.window(lo, hi)
        return bool(np.all(np.abs(diff) <= atol))

    def __repr__(self) -> str:
        return f"GridFunction(offset={self._offset}, length={self.length})"

    # serialization

    def to_dict(self) -> Dict[str, Any]:
        return {
            "offset": self._offset,
            "re": [float(v) for v in self._values.real],
            "im": [float(v) for v in self._values.imag],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> GridFunction:
        re = np.asarray(data.get("re", []), dtype=float)
        im = np.asarray(data.get("im", [0.0] * len(re)), dtype=float)
        if re.shape != im.shape:
            raise DomainError("re and im must have the same length")
        return cls(re + 1j * im, offset=int(data.get("offset", 0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> GridFunction:
        return cls.from_dict(json.loads(text))


def shift(f: GridFunction, k: int) -> GridFunction:
    """Translate ``f`` by ``k``: ``shift(f, k)(x) = f(x - k)``."""
    return GridFunction(f.values, f.offset + int(k))


def lp_norm(f: GridFunction, p: float) -> float:
    """Return the l^p quasi-norm of ``f`` for ``0 < p <= inf``.

    Args:
        f: Function to measure
        p: Exponent, ``math.inf`` for the sup norm

    Returns:
        ``(sum |f|^p)^(1/p)``, or ``max |f|`` when ``p`` is infinite

    """
    if not (p > 0):
        raise DomainError(f"lp_norm needs p > 0, got {p}")
    if f.is_zero:
        return 0.0
    mags = np.abs(f.values)
    peak = float(mags.max())
    if math.isinf(p):
        return peak
    # rescale by the peak so large p cannot overflow
    return peak * float(np.sum((mags / peak) ** p)) ** (1.0 / p)


def inner_product(f: GridFunction, g: GridFunction) -> complex:
    """Return ``sum_x f(x) conj(g(x))``."""
    lo, hi = max(f.start, g.start), min(f.stop, g.stop)
    if f.is_zero or g.is_zero or lo >= hi:
        return 0j
    return complex(np.vdot(g.window(lo, hi), f.window(lo, hi)))


def pairing(f: GridFunction, g: GridFunction) -> complex:
    """Return the bilinear pairing ``sum_x f(x) g(x)`` (no conjugate)."""
    return inner_product(f, g.conj())


def hl_maximal(f: GridFunction, radius_cap: int) -> GridFunction:
    """Uncentered Hardy-Littlewood maximal function with interval lengths capped.

    At each x the value is the largest mean of ``|f|`` over an integer interval
    containing x of length at most ``radius_cap``. Outside
    ``[f.start - radius_cap + 1, f.stop + radius_cap - 1)`` every such interval
    misses the support, so the result vanishes there.
    """
    if radius_cap < 1:
        raise DomainError(f"radius_cap must be >= 1, got {radius_cap}")
    if f.is_zero:
        return GridFunction()
    cap = int(radius_cap)
    lo, hi = f.start - cap + 1, f.stop + cap - 1
    # one extra cap of zeros on each side keeps every window in range
    base = lo - cap
    mags = np.abs(f.window(base, hi + cap))
    csum = np.concatenate(([0.0], np.cumsum(mags)))
    n = mags.size
    xs = np.arange(lo - base, hi - base)
    best = np.zeros(xs.size)
    for length in range(1, cap + 1):
        # means[j] is the mean over [j, j + length)
        means = (csum[length:] - csum[: n - length + 1]) / length
        window_max = sliding_window_view(means, length).max(axis=1)
        best = np.maximum(best, window_max[xs - length + 1])
    return GridFunction(best, offset=lo)
