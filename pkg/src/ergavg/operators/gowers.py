"""Differencing operators, Gowers U^s norms and the U^2 witness."""

from __future__ import annotations

import itertools
import math
from typing import Sequence, Tuple

import numpy as np
import structlog

from ergavg.core.errors import (
    AliasingError,
    CostGuardError,
    DomainError,
    RefinementError,
)
from ergavg.core.gridfn import GridFunction, shift
from ergavg.spectral.transform import reduce_torus, torus_transform

logger = structlog.get_logger(__name__)

MAX_ORDER = 5
GUARDED_ORDER = 4
GUARDED_LENGTH = 32
REFINEMENT_RATIO = 0.99


def difference(f: GridFunction, h: int) -> GridFunction:
    """``Delta_h f(x) = f(x) conj(f(x + h))``."""
    return f * shift(f, -int(h)).conj()


def differencing(f: GridFunction, hs: Sequence[int]) -> GridFunction:
    """Iterated differencing ``Delta_{h_1, ..., h_s} f``."""
    out = f
    for h in hs:
        out = difference(out, h)
    return out


def _u2_power(f: GridFunction) -> float:
    """``sum_h |sum_x f(x) conj(f(x + h))|^2`` from the autocorrelation."""
    if f.is_zero:
        return 0.0
    auto = np.correlate(f.values, f.values, mode="full")
    return float(np.sum(np.abs(auto) ** 2))


def _power(f: GridFunction, s: int) -> float:
    if f.is_zero:
        return 0.0
    if s == 1:
        return abs(complex(np.sum(f.values))) ** 2
    if s == 2:
        return _u2_power(f)
    # Delta_{-h} f is a shifted conjugate of Delta_h f, so both share a norm
    terms = np.array([_power(difference(f, h), s - 1) for h in range(f.length)])
    terms[1:] *= 2.0
    return float(np.sum(terms))


def gowers_norm(f: GridFunction, s: int) -> float:
    """Return the unnormalised Gowers norm ``||f||_{U^s}``.

    ``U^1`` is ``|sum f|``; ``U^2`` comes from the autocorrelation; higher
    orders use ``||f||_{U^s}^{2^s} = sum_h ||Delta_h f||_{U^{s-1}}^{2^{s-1}}``.

    Raises:
        CostGuardError: for ``s >= 4`` on supports longer than 32

    """
    if not 1 <= s <= MAX_ORDER:
        raise DomainError(f"Gowers order must lie in [1, {MAX_ORDER}], got {s}")
    if s >= GUARDED_ORDER and f.length > GUARDED_LENGTH:
        raise CostGuardError(
            f"U^{s} needs support length <= {GUARDED_LENGTH}, got {f.length}"
        )
    if s == 1:
        return abs(complex(np.sum(f.values)))
    return max(_power(f, s), 0.0) ** (1.0 / 2**s)


def gowers_norm_direct(f: GridFunction, s: int) -> float:
    """``||f||_{U^s}`` from the full sum over x and every shift vector."""
    if not 1 <= s <= MAX_ORDER:
        raise DomainError(f"Gowers order must lie in [1, {MAX_ORDER}], got {s}")
    if f.is_zero:
        return 0.0
    span = range(-(f.length - 1), f.length)
    total = 0j
    for hs in itertools.product(span, repeat=s):
        total += complex(np.sum(differencing(f, hs).values))
    return max(total.real, 0.0) ** (1.0 / 2**s)


def u2_fourier_l4(f: GridFunction, M: int) -> float:
    """``(int |f^|^4)^(1/4)`` by the M-point rule, exact once ``M >= 2L - 1``."""
    if M < 2 * f.length - 1:
        raise AliasingError(f"grid size {M} is below 2L - 1 = {2 * f.length - 1}")
    spectrum = torus_transform(f, M).values
    return float(np.mean(np.abs(spectrum) ** 4)) ** 0.25


def u2_witness(f: GridFunction, M: int) -> Tuple[float, float]:
    """Frequency where ``|sum_x f(x) e(x xi)|`` peaks on the M-grid, and the bound.

    Returns:
        ``(xi, bound)`` with ``bound = |supp f| * |sum_x f(x) e(x xi)|^2``;
        then ``||f||_{U^2}^4 <= 1.02 * bound``

    Raises:
        AliasingError: if ``M < 8 * support length``
        RefinementError: if the grid maximum is below 99% of the maximum on
            the doubled grid

    """
    if M < 8 * max(f.length, 1):
        raise AliasingError(f"grid size {M} is below 8 x support length {f.length}")
    if f.length and float(np.max(np.abs(f.values))) > 1.0 + 1e-12:
        peak = float(np.max(np.abs(f.values)))
        logger.warning("u2_witness_unbounded_input", peak=peak)
    if f.is_zero:
        return 0.0, 0.0
    mags = np.abs(torus_transform(f, M).values)
    j = int(np.argmax(mags))
    refined = float(np.max(np.abs(torus_transform(f, 2 * M).values)))
    if mags[j] < REFINEMENT_RATIO * refined:
        raise RefinementError(
            f"grid maximum {mags[j]:.6g} is below {REFINEMENT_RATIO} of {refined:.6g}"
        )
    # the transform uses e(-x xi); the witness pairs with e(+x xi)
    xi = float(reduce_torus(-j / M))
    return xi, f.support_size * float(mags[j]) ** 2


def gowers_norms(f: GridFunction, orders: Sequence[int] = (1, 2, 3)) -> dict:
    """Norms for several orders, keyed by order."""
    return {s: gowers_norm(f, s) for s in orders}


def inverse_gap(f: GridFunction, M: int) -> float:
    """``bound / ||f||_{U^2}^4`` from :func:`u2_witness`; at least ``1/1.02``."""
    _, bound = u2_witness(f, M)
    power = gowers_norm(f, 2) ** 4
    return math.inf if power == 0 else bound / power
