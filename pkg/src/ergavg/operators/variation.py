"""r-variation norms, the V^inf norm and delta-jump counting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ergavg.core.errors import DomainError

LOG_SPACE_THRESHOLD = 30.0


@dataclass(frozen=True)
class IndexedSequence:
    """Complex samples ``a_N`` indexed by strictly increasing times N."""

    times: np.ndarray
    samples: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.int64).ravel()
        samples = np.asarray(self.samples, dtype=np.complex128).ravel()
        if times.shape != samples.shape:
            raise DomainError(
                f"times and samples differ in length: {times.size} != {samples.size}"
            )
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise DomainError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_samples(cls, samples: Sequence[complex]) -> IndexedSequence:
        """Index samples by 0, 1, 2, ..."""
        return cls(np.arange(len(samples)), np.asarray(samples))

    def __len__(self) -> int:
        return int(self.times.size)


class VariationResult(BaseModel):
    """Value of a variation norm or jump count with its witnessing chain."""

    value: float = Field(ge=0)
    sup_term: float = Field(default=0.0, ge=0)
    osc_term: float = Field(default=0.0, ge=0)
    witness_chain: List[int] = Field(default_factory=list)
    count: Optional[int] = None


def _check_exponent(r: float) -> None:
    if not r > 0:
        raise DomainError(f"variation exponent must be > 0, got {r}")


def _backtrack(prev: np.ndarray, end: int) -> List[int]:
    chain = [end]
    while prev[chain[-1]] >= 0:
        chain.append(int(prev[chain[-1]]))
    return chain[::-1]


def chain_sum(samples: np.ndarray, chain: Sequence[int], r: float) -> float:
    """Return ``(sum |a_{j+1} - a_j|^r)^(1/r)`` along ``chain`` (max for r = inf)."""
    diffs = np.abs(np.diff(np.asarray(samples)[list(chain)]))
    if diffs.size == 0:
        return 0.0
    if math.isinf(r):
        return float(diffs.max())
    peak = float(diffs.max())
    if peak == 0:
        return 0.0
    return peak * float(np.sum((diffs / peak) ** r)) ** (1.0 / r)


def variation_norm(seq: IndexedSequence, r: float) -> VariationResult:
    """Return ``V^r = sup |a_N| + osc^r`` with the maximizing chain.

    For finite r the oscillation term maximizes
    ``(sum |a_{N_{j+1}} - a_{N_j}|^r)^(1/r)`` over increasing chains using
    ``best[j] = max_{i<j} best[i] + |a_j - a_i|^r``. For ``r > 30`` the
    recursion runs on logarithms. For ``r = inf`` the oscillation term is
    the diameter of the sample set.

    Args:
        seq: Sequence to measure
        r: Variation exponent in ``(0, inf]``

    Returns:
        The norm split into its sup and oscillation parts

    """
    _check_exponent(r)
    if len(seq) == 0:
        raise DomainError("variation of an empty sequence is undefined")
    a = seq.samples
    n = a.size
    sup_term = float(np.abs(a).max())
    if n == 1:
        return VariationResult(value=sup_term, sup_term=sup_term, witness_chain=[0])

    dist = np.abs(a[:, None] - a[None, :])
    if math.isinf(r):
        i, j = np.unravel_index(int(np.argmax(np.triu(dist, 1))), dist.shape)
        chain = sorted({int(i), int(j)})
        osc = float(dist[i, j])
        return VariationResult(
            value=sup_term + osc, sup_term=sup_term, osc_term=osc, witness_chain=chain
        )

    prev = np.full(n, -1, dtype=np.int64)
    if r > LOG_SPACE_THRESHOLD:
        best = np.full(n, -np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_terms = r * np.log(dist)
            for j in range(1, n):
                cand = np.logaddexp(best[:j], log_terms[:j, j])
                prev[j] = int(np.argmax(cand))
                best[j] = cand[prev[j]]
        end = int(np.argmax(best))
        osc = math.exp(best[end] / r) if np.isfinite(best[end]) else 0.0
    else:
        terms = dist**r
        best = np.zeros(n)
        for j in range(1, n):
            cand = best[:j] + terms[:j, j]
            prev[j] = int(np.argmax(cand))
            best[j] = cand[prev[j]]
        end = int(np.argmax(best))
        osc = float(best[end]) ** (1.0 / r)
    chain = _backtrack(prev, end) if osc > 0 else [0]
    return VariationResult(
        value=sup_term + osc, sup_term=sup_term, osc_term=osc, witness_chain=chain
    )


def jump_count(seq: IndexedSequence, delta: float) -> VariationResult:
    """Return the longest chain whose consecutive changes are all ``>= delta``.

    Solved exactly by ``L[j] = max {L[i] + 1 : i < j, |a_j - a_i| >= delta}``.
    The count is reported in both ``count`` and ``value``.
    """
    if not delta > 0:
        raise DomainError(f"jump size must be > 0, got {delta}")
    a = seq.samples
    n = a.size
    if n == 0:
        return VariationResult(value=0.0, count=0)
    reach = np.abs(a[:, None] - a[None, :]) >= delta
    longest = np.zeros(n, dtype=np.int64)
    prev = np.full(n, -1, dtype=np.int64)
    for j in range(1, n):
        ok = np.flatnonzero(reach[:j, j])
        if ok.size:
            i = int(ok[np.argmax(longest[ok])])
            longest[j] = longest[i] + 1
            prev[j] = i
    end = int(np.argmax(longest))
    count = int(longest[end])
    chain = _backtrack(prev, end) if count else [0]
    return VariationResult(value=float(count), count=count, witness_chain=chain)


def greedy_jump_count(seq: IndexedSequence, delta: float) -> int:
    """Anchor-scan jump count; a lower bound for :func:`jump_count`."""
    if not delta > 0:
        raise DomainError(f"jump size must be > 0, got {delta}")
    if len(seq) == 0:
        return 0
    anchor = seq.samples[0]
    count = 0
    for value in seq.samples[1:]:
        if abs(value - anchor) >= delta:
            count += 1
            anchor = value
    return count


def jump_inequality_slack(seq: IndexedSequence, delta: float, r: float) -> float:
    """Return ``V^r - delta * N_delta^(1/r)``, which is never negative."""
    count = jump_count(seq, delta).count or 0
    lower = delta * count ** (1.0 / r) if not math.isinf(r) else delta * (count > 0)
    return variation_norm(seq, r).value - lower


def variation_norms_batch(samples: np.ndarray, r: float) -> np.ndarray:
    """V^r of every row of ``samples`` (rows are points, columns are times)."""
    _check_exponent(r)
    a = np.atleast_2d(np.asarray(samples, dtype=np.complex128))
    rows, n = a.shape
    if n == 0:
        raise DomainError("variation of an empty sequence is undefined")
    sup_term = np.abs(a).max(axis=1)
    if n == 1:
        return sup_term
    if math.isinf(r):
        dist = np.abs(a[:, :, None] - a[:, None, :])
        return sup_term + dist.reshape(rows, -1).max(axis=1)
    # differences are at most 2 sup; scaling keeps large r finite
    scale = np.where(sup_term > 0, 2.0 * sup_term, 1.0)[:, None]
    u = a / scale
    best = np.zeros((rows, n))
    for j in range(1, n):
        terms = np.abs(u[:, j : j + 1] - u[:, :j]) ** r
        best[:, j] = np.max(best[:, :j] + terms, axis=1)
    return sup_term + scale[:, 0] * best.max(axis=1) ** (1.0 / r)


def sup_norms_batch(samples: np.ndarray) -> np.ndarray:
    """Row-wise ``sup_N |a_N|``."""
    return np.abs(np.atleast_2d(samples)).max(axis=1)


def brute_force_variation(seq: IndexedSequence, r: float) -> float:
    """V^r by depth-first enumeration of every increasing chain."""
    _check_exponent(r)
    a = seq.samples
    n = a.size
    if n == 0:
        raise DomainError("variation of an empty sequence is undefined")
    dist = np.abs(a[:, None] - a[None, :]).tolist()
    infinite = math.isinf(r)
    best = 0.0

    def extend(last: int, acc: float) -> None:
        nonlocal best
        best = max(best, acc)
        for nxt in range(last + 1, n):
            step = dist[last][nxt]
            extend(nxt, max(acc, step) if infinite else acc + step**r)

    for first in range(n):
        extend(first, 0.0)
    osc = best if infinite else best ** (1.0 / r)
    return float(np.abs(a).max()) + osc


def brute_force_jump_count(seq: IndexedSequence, delta: float) -> int:
    """N_delta by depth-first enumeration of admissible chains."""
    if not delta > 0:
        raise DomainError(f"jump size must be > 0, got {delta}")
    a = seq.samples
    n = a.size
    dist = np.abs(a[:, None] - a[None, :]).tolist()
    best = 0

    def extend(last: int, jumps: int) -> None:
        nonlocal best
        best = max(best, jumps)
        for nxt in range(last + 1, n):
            if dist[last][nxt] >= delta:
                extend(nxt, jumps + 1)

    for first in range(n):
        extend(first, 0)
    return best


def exhaustive_sign_sequences(length: int) -> List[Tuple[int, ...]]:
    """All sequences of the given length over the alphabet {-1, +1}."""
    if length < 0:
        raise DomainError("length must be nonnegative")
    return [
        tuple(1 if (mask >> k) & 1 else -1 for k in range(length))
        for mask in range(1 << length)
    ]
