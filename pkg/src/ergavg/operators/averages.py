"""Bilinear averages along (floor(sqrt n), n), the linear smoothing average and duals.

Every operator is evaluated exactly. ``floor(sqrt n)`` is constant on the runs
``[s*s, (s+1)*(s+1) - 1]``, so each sum over n splits into O(sqrt N) runs and
the inner sum over a run is a box sum read off a prefix-sum table.
"""

from __future__ import annotations

import math
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from ergavg.core.errors import DomainError
from ergavg.core.gridfn import GridFunction, lp_norm

Block = Tuple[int, int, int]


def _check_scale(N: int) -> None:
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")


def sqrt_blocks(n_lo: int, n_hi: int) -> Iterator[Block]:
    """Yield ``(s, a, b)`` with ``floor(sqrt n) == s`` for all n in ``[a, b]``."""
    if n_hi < n_lo:
        return
    for s in range(math.isqrt(n_lo), math.isqrt(n_hi) + 1):
        yield s, max(s * s, n_lo), min((s + 1) * (s + 1) - 1, n_hi)


def upper_half_range(N: int) -> Tuple[int, int]:
    """Indices n in [1, N] with n > N/2."""
    return N // 2 + 1, N


class _BoxSum:
    """Interval sums of a dense sample block via prefix sums."""

    def __init__(self, samples: np.ndarray, start: int):
        self.start = start
        self.size = samples.size
        self.csum = np.concatenate(([0j], np.cumsum(samples)))

    def between(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Sum over y in ``[lo, hi]`` (inclusive) for each pair of bounds."""
        upper = np.clip(hi + 1 - self.start, 0, self.size)
        lower = np.clip(lo - self.start, 0, self.size)
        return np.where(upper > lower, self.csum[upper] - self.csum[lower], 0j)


def _window(*bounds: Tuple[int, int]) -> Tuple[int, int]:
    """Intersect inclusive ranges, returned half-open."""
    lo = max(b[0] for b in bounds)
    hi = min(b[1] for b in bounds)
    return lo, hi + 1


def _forward(
    f: GridFunction, g: GridFunction, n_lo: int, n_hi: int, N: int
) -> GridFunction:
    """``(1/N) sum_{n in [n_lo, n_hi]} f(x - floor(sqrt n)) g(x - n)``."""
    if f.is_zero or g.is_zero or n_hi < n_lo:
        return GridFunction()
    s_lo, s_hi = math.isqrt(n_lo), math.isqrt(n_hi)
    lo, hi = _window(
        (f.start + s_lo, f.stop - 1 + s_hi), (g.start + n_lo, g.stop - 1 + n_hi)
    )
    if lo >= hi:
        return GridFunction()
    xs = np.arange(lo, hi, dtype=np.int64)
    box = _BoxSum(g.values, g.start)
    out = np.zeros(xs.size, dtype=np.complex128)
    for s, a, b in sqrt_blocks(n_lo, n_hi):
        out += f.at(xs - s) * box.between(xs - b, xs - a)
    return GridFunction(out / N, lo)


def bilinear_average(f: GridFunction, g: GridFunction, N: int) -> GridFunction:
    """Return ``A_N(f, g)(x) = (1/N) sum_{n <= N} f(x - floor(sqrt n)) g(x - n)``."""
    _check_scale(N)
    return _forward(f, g, 1, N, N)


def upper_half_average(f: GridFunction, g: GridFunction, N: int) -> GridFunction:
    """Return the upper-half average, the sum restricted to ``n > N/2``."""
    _check_scale(N)
    n_lo, n_hi = upper_half_range(N)
    return _forward(f, g, n_lo, n_hi, N)


def linear_smoothing_average(g: GridFunction, N: int) -> GridFunction:
    """Return ``B_N g(x) = (1/N) sum_{n <= N} g(x + floor(sqrt n) - n)``."""
    _check_scale(N)
    if g.is_zero:
        return GridFunction()
    # n - floor(sqrt n) is non-decreasing, from 0 at n = 1
    lo, hi = g.start, g.stop + N - math.isqrt(N)
    xs = np.arange(lo, hi, dtype=np.int64)
    box = _BoxSum(g.values, g.start)
    out = np.zeros(xs.size, dtype=np.complex128)
    for s, a, b in sqrt_blocks(1, N):
        out += box.between(xs + s - b, xs + s - a)
    return GridFunction(out / N, lo)


def dual_star(h: GridFunction, g: GridFunction, N: int) -> GridFunction:
    """Dual in the first slot of ``sum_x h(x) A~_N(f, g)(x)``.

    ``A~*_N(h, g)(x) = (1/N) sum_{N/2 < n <= N} h(x + s_n) g(x + s_n - n)`` with
    ``s_n = floor(sqrt n)``, so that ``sum h A~_N(f, g) == sum f A~*_N(h, g)``.
    """
    _check_scale(N)
    if h.is_zero or g.is_zero:
        return GridFunction()
    n_lo, n_hi = upper_half_range(N)
    s_lo, s_hi = math.isqrt(n_lo), math.isqrt(n_hi)
    lo, hi = _window(
        (h.start - s_hi, h.stop - 1 - s_lo),
        (g.start + n_lo - s_lo, g.stop - 1 + n_hi - s_hi),
    )
    if lo >= hi:
        return GridFunction()
    xs = np.arange(lo, hi, dtype=np.int64)
    box = _BoxSum(g.values, g.start)
    out = np.zeros(xs.size, dtype=np.complex128)
    for s, a, b in sqrt_blocks(n_lo, n_hi):
        out += h.at(xs + s) * box.between(xs + s - b, xs + s - a)
    return GridFunction(out / N, lo)


def dual_star_star(h: GridFunction, f: GridFunction, N: int) -> GridFunction:
    """Dual in the last slot of ``sum_x h(x) A~_N(f, g)(x)``.

    ``A~**_N(h, f)(x) = (1/N) sum_{N/2 < n <= N} h(x + n) f(x - floor(sqrt n) + n)``
    so that ``sum h A~_N(f, g) == sum g A~**_N(h, f)``.
    """
    _check_scale(N)
    if h.is_zero or f.is_zero:
        return GridFunction()
    n_lo, n_hi = upper_half_range(N)
    s_lo, s_hi = math.isqrt(n_lo), math.isqrt(n_hi)
    lo, hi = _window(
        (h.start - n_hi, h.stop - 1 - n_lo),
        (f.start - (n_hi - s_hi), f.stop - 1 - (n_lo - s_lo)),
    )
    if lo >= hi:
        return GridFunction()
    xs = np.arange(lo, hi, dtype=np.int64)
    out = np.zeros(xs.size, dtype=np.complex128)
    ys = np.arange(h.start, h.stop, dtype=np.int64)
    for s, a, b in sqrt_blocks(n_lo, n_hi):
        # p_s(y) = h(y) f(y - s), summed over y in [x + a, x + b]
        box = _BoxSum(h.values * f.at(ys - s), h.start)
        out += box.between(xs + a, xs + b)
    return GridFunction(out / N, lo)


def average_family(
    f: GridFunction,
    g: GridFunction,
    scales: Sequence[int],
    upper_half: bool = True,
) -> Tuple[int, np.ndarray]:
    """Evaluate A~_N (or A_N) for several N on one common window.

    Returns:
        ``(lo, table)`` where ``table[i, j]`` is the average at scale
        ``scales[i]`` and point ``lo + j``

    """
    op = upper_half_average if upper_half else bilinear_average
    results: List[GridFunction] = [op(f, g, int(N)) for N in scales]
    live = [r for r in results if not r.is_zero]
    if not live:
        return 0, np.zeros((len(scales), 0), dtype=np.complex128)
    lo = min(r.start for r in live)
    hi = max(r.stop for r in live)
    return lo, np.vstack([r.window(lo, hi) for r in results])


def maximal_average(f: GridFunction, g: GridFunction, n_max: int) -> GridFunction:
    """Return ``sup_{N <= n_max} |A_N(f, g)|`` over every N, not a subset.

    The partial sums ``sum_{n <= N}`` are accumulated one n at a time on a
    window covering all N.
    """
    _check_scale(n_max)
    if f.is_zero or g.is_zero:
        return GridFunction()
    lo, hi = _window(
        (f.start, f.stop - 1 + math.isqrt(n_max)), (g.start + 1, g.stop - 1 + n_max)
    )
    if lo >= hi:
        return GridFunction()
    width = hi - lo
    fw = f.window(lo - math.isqrt(n_max), hi)
    gw = g.window(lo - n_max, hi)
    f_base, g_base = lo - math.isqrt(n_max), lo - n_max
    running = np.zeros(width, dtype=np.complex128)
    best = np.zeros(width)
    for n in range(1, n_max + 1):
        s = math.isqrt(n)
        fo, go = lo - s - f_base, lo - n - g_base
        running += fw[fo : fo + width] * gw[go : go + width]
        np.maximum(best, np.abs(running) / n, out=best)
    return GridFunction(best, lo)


def holder_constant(
    f: GridFunction, g: GridFunction, N: int, p1: float, p2: float
) -> float:
    """Return ``||A~_N(f, g)||_p / (||f||_p1 ||g||_p2)`` with ``1/p = 1/p1 + 1/p2``."""
    if p1 <= 0 or p2 <= 0:
        raise DomainError("Hoelder exponents must be positive")
    p = 1.0 / (1.0 / p1 + 1.0 / p2)
    denominator = lp_norm(f, p1) * lp_norm(g, p2)
    if denominator == 0:
        raise DomainError("Hoelder ratio undefined for a zero input")
    return lp_norm(upper_half_average(f, g, N), p) / denominator
