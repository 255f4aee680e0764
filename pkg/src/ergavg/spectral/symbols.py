"""Dirichlet kernels, exponential-sum symbols and the principal-arc scan."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Any, List, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, Field, field_validator

from ergavg.core.errors import ConvergenceError, DomainError
from ergavg.core.sequences import floor_sqrt_array
from ergavg.operators.averages import sqrt_blocks, upper_half_range
from ergavg.spectral.quadrature import gauss_legendre_panels
from ergavg.spectral.transform import e, reduce_torus, torus_distance

logger = structlog.get_logger(__name__)

CONTINUOUS_TOLERANCE = 1e-10
MAX_PANELS = 1 << 22


def dirichlet_kernel(k: int, xi: Any) -> Any:
    """Return ``D_k(xi) = sum_{j<k} e(xi j)`` in closed form.

    ``D_k(xi) = e((k-1) xi / 2) sin(k pi xi) / sin(pi xi)``, and ``k`` at
    integer ``xi``.
    """
    if k < 1:
        raise DomainError(f"Dirichlet kernel needs k >= 1, got {k}")
    scalar = np.ndim(xi) == 0
    r = np.atleast_1d(reduce_torus(xi))
    out = np.full(r.shape, complex(k), dtype=np.complex128)
    live = r != 0
    rl = r[live]
    out[live] = e((k - 1) * rl / 2) * np.sin(k * np.pi * rl) / np.sin(np.pi * rl)
    return complex(out[0]) if scalar else out


def dirichlet_direct(k: int, xi: float) -> complex:
    """``D_k(xi)`` by direct summation."""
    return complex(np.sum(e(xi * np.arange(k))))


def _run_sums(lengths: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """``D_len(xi)`` for an array of run lengths against an array of frequencies."""
    r = reduce_torus(xi)[..., None]
    lengths = np.asarray(lengths)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.sin(lengths * np.pi * r) / np.sin(np.pi * r)
        closed = e((lengths - 1) * r / 2) * ratio
    return np.where(r == 0, lengths.astype(np.complex128), closed)


class SymbolQuery(BaseModel):
    """Arguments of the discrete symbol; frequencies are reduced to the torus."""

    xi1: float
    xi2: float
    N: int = Field(ge=1)
    upper_half: bool = True

    @field_validator("xi1", "xi2")
    @classmethod
    def _reduce(cls, value: float) -> float:
        return float(reduce_torus(value))


def _index_range(N: int, upper_half: bool) -> Tuple[int, int]:
    return upper_half_range(N) if upper_half else (1, N)


def discrete_symbol(q: SymbolQuery) -> complex:
    """``(1/N) sum_{N/2 < n <= N} e(-xi1 floor(sqrt n) - xi2 n)``, summed directly."""
    n_lo, n_hi = _index_range(q.N, q.upper_half)
    n = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    s = floor_sqrt_array(n)
    return complex(np.sum(e(-q.xi1 * s - q.xi2 * n)) / q.N)


def discrete_symbol_grid(
    xi1: np.ndarray, xi2: np.ndarray, N: int, upper_half: bool = True
) -> np.ndarray:
    """Discrete symbol on the product grid ``xi1 x xi2`` via runs of constant sqrt.

    On a run ``[a, b]`` with ``floor(sqrt n) = s`` the inner sum is
    ``e(-xi2 a) D_{b-a+1}(-xi2)``, so the grid is one matrix product.
    """
    n_lo, n_hi = _index_range(N, upper_half)
    blocks = np.array(list(sqrt_blocks(n_lo, n_hi)), dtype=np.int64)
    s, a, b = blocks[:, 0], blocks[:, 1], blocks[:, 2]
    xi1 = np.atleast_1d(np.asarray(xi1, dtype=np.float64))
    xi2 = np.atleast_1d(np.asarray(xi2, dtype=np.float64))
    outer = e(-np.outer(xi1, s))
    inner = (e(-np.outer(xi2, a)) * _run_sums(b - a + 1, -xi2)).T
    return outer @ inner / N


def continuous_symbol(
    xi1: float,
    xi2: float,
    N: int,
    tol: float = CONTINUOUS_TOLERANCE,
    max_panels: int = MAX_PANELS,
) -> complex:
    """``(1/N) int_{N/2}^{N} e(-xi1 sqrt t - xi2 t) dt`` by adaptive panel quadrature.

    With ``t = u*u`` the phase is polynomial in u on ``[sqrt(N/2), sqrt N]``.
    The panel count starts at ``64 * ceil(1 + |xi1| sqrt N + |xi2| N)`` and
    doubles until two successive estimates agree to ``tol``.

    Raises:
        ConvergenceError: if the panel budget is exhausted

    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    lo, hi = math.sqrt(N / 2.0), math.sqrt(N)

    def estimate(panels: int) -> complex:
        u, w = gauss_legendre_panels(lo, hi, panels)
        return complex(np.dot(w, 2.0 * u * e(-xi1 * u - xi2 * u * u))) / N

    panels = 64 * math.ceil(1 + abs(xi1) * hi + abs(xi2) * N)
    previous = estimate(panels)
    while 2 * panels <= max_panels:
        panels *= 2
        current = estimate(panels)
        if abs(current - previous) <= tol:
            return current
        previous = current
    raise ConvergenceError(
        f"continuous symbol did not converge at ({xi1}, {xi2}, N={N}) "
        f"within {max_panels} panels"
    )


def continuous_symbol_closed_form(xi2: float, N: int) -> complex:
    """The ``xi1 = 0`` case in closed form."""
    if xi2 == 0:
        return 0.5 + 0j
    return complex((e(-xi2 * N) - e(-xi2 * N / 2)) / (-2j * np.pi * xi2 * N))


def exponential_partial_sums(
    zeta: Any, xi: Any, scales: Sequence[int]
) -> np.ndarray:
    """``(1/N) sum_{n <= N} e(zeta floor(sqrt n) + xi n)`` for every N in ``scales``.

    Whole runs of constant ``floor(sqrt n)`` are accumulated once with
    Dirichlet kernels; each N adds the partial run ``[s*s, N]``.

    Returns:
        Array of shape ``(len(zeta), len(scales))``

    """
    zeta = np.atleast_1d(np.asarray(zeta, dtype=np.float64))
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    scales = np.asarray(scales, dtype=np.int64)
    if zeta.shape != xi.shape:
        raise DomainError("zeta and xi must have the same shape")
    if scales.size == 0 or int(scales.min()) < 1:
        raise DomainError("scales must be positive")
    top = math.isqrt(int(scales.max()))
    s = np.arange(1, top + 1, dtype=np.int64)
    starts, lengths = s * s, 2 * s + 1
    whole = e(np.outer(zeta, s) + np.outer(xi, starts)) * _run_sums(lengths, xi)
    # before[:, j] sums the runs with s < j + 1
    before = np.concatenate(
        (np.zeros((zeta.size, 1), dtype=np.complex128), np.cumsum(whole, axis=1)),
        axis=1,
    )
    s_n = floor_sqrt_array(scales)
    partial = e(np.outer(zeta, s_n) + np.outer(xi, s_n * s_n)) * _run_sums(
        scales - s_n * s_n + 1, xi
    )
    return (before[:, s_n - 1] + partial) / scales


class ArcWitness(BaseModel):
    """A frequency pair where the discrete symbol is large."""

    zeta: float
    xi: float
    abs_m: float
    xi_times_n: float


def principal_arc_witness(
    N: int,
    delta: float,
    grid_step: float,
    upper_half: bool = True,
    row_chunk: int = 256,
) -> List[ArcWitness]:
    """Scan the ``(zeta, xi)`` torus grid for ``|m(zeta, xi)| >= delta``.

    The xi step is ``grid_step``; zeta multiplies ``floor(sqrt n) <= sqrt N``,
    so its step is ``grid_step * floor(sqrt N)``. Rows of zeta are processed in
    chunks and concatenated in order.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if not 0 < delta <= 1:
        raise DomainError(f"delta must lie in (0, 1], got {delta}")
    if not 0 < grid_step <= 1.0 / (4 * N):
        raise DomainError(f"grid step must be in (0, 1/(4N)], got {grid_step}")
    xi_grid = reduce_torus(np.arange(-0.5, 0.5, grid_step))
    zeta_grid = reduce_torus(np.arange(-0.5, 0.5, grid_step * math.isqrt(N)))
    found: List[ArcWitness] = []
    for lo in range(0, zeta_grid.size, row_chunk):
        zetas = zeta_grid[lo : lo + row_chunk]
        mags = np.abs(discrete_symbol_grid(zetas, xi_grid, N, upper_half))
        for i, j in zip(*np.nonzero(mags >= delta)):
            found.append(
                ArcWitness(
                    zeta=float(zetas[i]),
                    xi=float(xi_grid[j]),
                    abs_m=float(mags[i, j]),
                    xi_times_n=float(torus_distance(xi_grid[j]) * N),
                )
            )
    logger.debug("principal_arc_scan", N=N, delta=delta, witnesses=len(found))
    return found


def write_witness_csv(witnesses: Sequence[ArcWitness], path: Path) -> None:
    """Write witnesses as CSV with columns zeta, xi, absm, xiTimesN."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["zeta", "xi", "absm", "xiTimesN"])
        for w in witnesses:
            row = (w.zeta, w.xi, w.abs_m, w.xi_times_n)
            writer.writerow([repr(v) for v in row])


def principal_arc_frequencies(
    N: int, l1: int, l2: int, points: int = 9
) -> Tuple[np.ndarray, np.ndarray]:
    """Frequencies ``|xi1| <= 2^l1 / sqrt N`` and ``|xi2| <= 2^l2 / N``."""
    r1 = 2.0**l1 / math.sqrt(N)
    r2 = 2.0**l2 / N
    return np.linspace(-r1, r1, points), np.linspace(-r2, r2, points)


def symbol_difference(N: int, l1: int, l2: int, points: int = 9) -> float:
    """``sup |m_Z - m_R|`` over the principal-arc frequency grid."""
    xs1, xs2 = principal_arc_frequencies(N, l1, l2, points)
    discrete = discrete_symbol_grid(xs1, xs2, N)
    worst = 0.0
    for i, a in enumerate(xs1):
        for j, b in enumerate(xs2):
            worst = max(worst, abs(discrete[i, j] - continuous_symbol(a, b, N)))
    return worst
