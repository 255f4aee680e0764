"""The model paraproduct and the shifted square function."""

from __future__ import annotations

import math
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.signal import fftconvolve

from ergavg.core.errors import AliasingError, CutoffScaleError, DomainError
from ergavg.core.gridfn import GridFunction
from ergavg.core.sequences import LacunarySet
from ergavg.spectral.cutoffs import (
    CutoffKind,
    CutoffSpec,
    cutoff_kernel,
    kernel_radius,
)
from ergavg.spectral.quadrature import (
    gauss_legendre_breakpoints,
    gauss_legendre_panels,
    midpoint_nodes,
)
from ergavg.spectral.transform import (
    apply_symbol,
    centered_window,
    e,
    next_pow2,
)

Symbol = Callable[[np.ndarray], np.ndarray]


def paraproduct_cutoffs(
    N: int, l1: int, l2: int, C1: int
) -> Tuple[CutoffSpec, CutoffSpec]:
    """Cutoffs at ``2^l1 / sqrt N`` and ``2^l2 / N``.

    Level ``-C1`` gives a lowpass cutoff, any other level a band cutoff.
    """
    if C1 < 1:
        raise DomainError(f"C1 must be a positive integer, got {C1}")
    if l1 < -C1 or l2 < -C1:
        raise DomainError(f"arc indices must be >= -C1 = {-C1}, got ({l1}, {l2})")
    specs = []
    for level, scale in ((l1, 2.0**l1 / math.sqrt(N)), (l2, 2.0**l2 / N)):
        kind = CutoffKind.LOWPASS if level == -C1 else CutoffKind.BAND
        spec = CutoffSpec(scale=scale, kind=kind)
        if scale > 0.5:
            raise CutoffScaleError(f"cutoff scale {scale} at level {level} exceeds 1/2")
        specs.append(spec)
    return specs[0], specs[1]


def _kernel_convolution(
    f: GridFunction, spec: CutoffSpec, centre: float, radius: float
) -> Tuple[int, np.ndarray]:
    """``sum_y k(y - centre) f(x - y)`` on the window where it can be nonzero."""
    y_lo = math.floor(centre - radius)
    y_hi = math.ceil(centre + radius)
    taps = cutoff_kernel(spec, np.arange(y_lo, y_hi + 1) - centre)
    return f.start + y_lo, fftconvolve(f.values, taps)


def model_paraproduct(
    f: GridFunction,
    g: GridFunction,
    N: int,
    l1: int,
    l2: int,
    C1: int,
    panels: int,
) -> GridFunction:
    """Midpoint-rule evaluation of the model paraproduct.

    ``int_{1/2}^{1} (k1(. - sqrt(N t)) * f)(x) (k2(. - N t) * g)(x) dt`` where
    k1 and k2 are the real-line kernels of the cutoffs from
    :func:`paraproduct_cutoffs`.
    """
    if N < 1 or panels < 1:
        raise DomainError("N and panels must be positive")
    phi, psi = paraproduct_cutoffs(N, l1, l2, C1)
    if f.is_zero or g.is_zero:
        return GridFunction()
    r1, r2 = kernel_radius(phi), kernel_radius(psi)
    lo = max(
        f.start + math.floor(math.sqrt(N / 2) - r1), g.start + math.floor(N / 2 - r2)
    )
    hi = min(f.stop + math.ceil(math.sqrt(N) + r1), g.stop + math.ceil(N + r2))
    if lo >= hi:
        return GridFunction()
    out = np.zeros(hi - lo, dtype=np.complex128)
    ts, ws = midpoint_nodes(0.5, 1.0, panels)
    for t, w in zip(ts, ws):
        a_lo, a = _kernel_convolution(f, phi, math.sqrt(N * t), r1)
        b_lo, b = _kernel_convolution(g, psi, N * t, r2)
        out += w * _slice(a, a_lo, lo, hi) * _slice(b, b_lo, lo, hi)
    return GridFunction(out, lo)


def _slice(samples: np.ndarray, start: int, lo: int, hi: int) -> np.ndarray:
    """Dense samples beginning at ``start``, restricted to ``[lo, hi)``."""
    out = np.zeros(hi - lo, dtype=np.complex128)
    a, b = max(lo, start), min(hi, start + samples.size)
    if a < b:
        out[a - lo : b - lo] = samples[a - start : b - start]
    return out


def _frequency_kernel(
    spec: CutoffSpec, offsets: np.ndarray, panels_per_piece: int
) -> np.ndarray:
    """``2 int_0^S cutoff(xi) cos(2 pi xi y) dxi`` by direct quadrature."""
    S = spec.dyadic
    nodes, weights = gauss_legendre_breakpoints(
        [0.0, S / 4, S / 2, S], panels_per_piece
    )
    weighted = 2.0 * weights * spec(nodes)
    return np.cos(2.0 * np.pi * offsets[..., None] * nodes) @ weighted


def paraproduct_kernel_oracle(
    f: GridFunction,
    g: GridFunction,
    N: int,
    l1: int,
    l2: int,
    C1: int,
    xs: Sequence[int],
    t_panels: int = 64,
    xi_panels: int = 16,
) -> np.ndarray:
    """``sum_{y1, y2} K(y1, y2) f(x - y1) g(x - y2)`` at the points ``xs``.

    ``K(y1, y2)`` is the double frequency integral of the continuous symbol
    against both cutoffs. The symbol is itself an integral over
    ``t in [1/2, 1]``, so K is assembled as
    ``sum_t w_t F1(y1, t) F2(y2, t)`` with F1 and F2 computed by
    Gauss-Legendre quadrature in frequency, independent of the kernel table.
    """
    phi, psi = paraproduct_cutoffs(N, l1, l2, C1)
    xs = np.asarray(xs, dtype=np.int64)
    if f.is_zero or g.is_zero:
        return np.zeros(xs.size, dtype=np.complex128)
    fy = np.arange(f.start, f.stop)
    gy = np.arange(g.start, g.stop)
    y1 = (xs[:, None] - fy[None, :]).ravel()
    y2 = (xs[:, None] - gy[None, :]).ravel()
    ts, wt = gauss_legendre_panels(0.5, 1.0, t_panels)
    out = np.zeros(xs.size, dtype=np.complex128)
    for lo in range(0, ts.size, 32):
        t, w = ts[lo : lo + 32], wt[lo : lo + 32]
        F1 = _frequency_kernel(phi, y1[:, None] - np.sqrt(N * t)[None, :], xi_panels)
        F2 = _frequency_kernel(psi, y2[:, None] - (N * t)[None, :], xi_panels)
        # contract f and g first, then the t-integral
        u1 = np.einsum("xyt,y->xt", F1.reshape(xs.size, fy.size, t.size), f.values)
        u2 = np.einsum("xyt,y->xt", F2.reshape(xs.size, gy.size, t.size), g.values)
        out += np.einsum("xt,xt,t->x", u1, u2, w)
    return out


EtaSymbol = Union[CutoffSpec, Symbol]


def _validate_eta(
    eta: EtaSymbol, support_radius: Optional[float]
) -> Tuple[Symbol, float]:
    if isinstance(eta, CutoffSpec):
        if eta.kind is not CutoffKind.BAND:
            raise DomainError("shifted square function needs a band cutoff")
        radius = eta.dyadic
        symbol: Symbol = eta
    else:
        if support_radius is None:
            raise DomainError("a callable symbol needs an explicit support radius")
        radius = float(support_radius)
        symbol = eta
    if not 0 < radius < 0.5:
        raise DomainError(f"symbol support radius must lie in (0, 1/2), got {radius}")
    if abs(complex(np.asarray(symbol(np.zeros(1)))[0])) > 1e-14:
        raise DomainError("symbol must vanish at the origin")
    probe = np.linspace(radius, 0.5, 257)[1:]
    outside = np.concatenate((probe, -probe))
    if np.max(np.abs(symbol(outside))) > 1e-14:
        raise DomainError(f"symbol is not supported in [-{radius}, {radius}]")
    return symbol, radius


def shifted_square_function(
    f: GridFunction,
    scales: LacunarySet,
    eta: EtaSymbol,
    A: float,
    d: float,
    lambda_by_scale: Optional[Dict[int, float]] = None,
    support_radius: Optional[float] = None,
    M: Optional[int] = None,
) -> GridFunction:
    """``(sum_N |K_N(. - lambda_N A N^d) * f|^2)^(1/2)`` over a lacunary set.

    Each term is the Fourier multiplier ``e(-lambda_N A N^d xi) eta(A N^d xi)``.
    The grid is large enough that no shifted kernel wraps around.
    """
    if A <= 0 or d <= 0:
        raise DomainError("A and d must be positive")
    symbol, radius = _validate_eta(eta, support_radius)
    shifts = lambda_by_scale or {}
    dilations = {N: A * float(N) ** d for N in scales.scales}
    if min(dilations.values()) * 0.5 < radius:
        raise DomainError("dilated symbols must stay inside the torus")
    if f.is_zero:
        return GridFunction()
    reach = max(abs(shifts.get(N, 0.0)) * D for N, D in dilations.items())
    widest = max(dilations.values())
    needed = next_pow2(
        8 * f.length + 2 * math.ceil(reach) + 32 * math.ceil(widest)
    )
    if M is None:
        M = needed
    elif M < needed:
        raise AliasingError(f"grid size {M} is below the required {needed}")
    lo = centered_window(f, M)
    total = np.zeros(M)
    for N, D in dilations.items():
        lam = shifts.get(N, 0.0)

        def multiplier(xi: np.ndarray, D: float = D, lam: float = lam) -> np.ndarray:
            return e(-lam * D * xi) * symbol(D * xi)

        total += np.abs(apply_symbol(f, multiplier, M, lo).window(lo, lo + M)) ** 2
    return GridFunction(np.sqrt(total), lo)
