"""Integer sequences: floor square roots, lacunary scale sets, difference counts."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ergavg.core.errors import DomainError


def floor_sqrt(n: int) -> int:
    """Return the k with ``k*k <= n < (k+1)*(k+1)`` in exact integer arithmetic."""
    if n < 0:
        raise DomainError(f"floor_sqrt needs n >= 0, got {n}")
    return math.isqrt(int(n))


def floor_sqrt_array(ns: np.ndarray) -> np.ndarray:
    """Vectorized :func:`floor_sqrt` for int64 arrays below 2**52."""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and int(ns.min()) < 0:
        raise DomainError("floor_sqrt_array needs nonnegative entries")
    k = np.floor(np.sqrt(ns.astype(np.float64))).astype(np.int64)
    # float sqrt can be off by one near perfect squares
    k -= (k * k > ns).astype(np.int64)
    k += ((k + 1) * (k + 1) <= ns).astype(np.int64)
    return k


class LacunarySet(BaseModel):
    """Strictly increasing positive scales whose consecutive ratios exceed lambda."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    lambda_: float = Field(alias="lambda", gt=1.0)
    scales: List[int]

    @field_validator("scales")
    @classmethod
    def _positive(cls, scales: List[int]) -> List[int]:
        if not scales:
            raise ValueError("a lacunary set needs at least one scale")
        if scales[0] < 1:
            raise ValueError("scales must be positive")
        return scales

    @model_validator(mode="after")
    def _lacunary(self) -> LacunarySet:
        lam = Fraction(self.lambda_)
        for a, b in zip(self.scales, self.scales[1:]):
            if not Fraction(b) > lam * a:
                raise ValueError(f"ratio {b}/{a} is not > {self.lambda_}")
        return self

    def __len__(self) -> int:
        return len(self.scales)

    def capped(self, cap: int) -> LacunarySet:
        """Scales not exceeding ``cap``."""
        kept = [n for n in self.scales if n <= cap]
        return LacunarySet(lambda_=self.lambda_, scales=kept or self.scales[:1])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.scales, dtype=np.int64)


def lacunary_set(lam: float, n_min: int, n_max: int) -> LacunarySet:
    """Greedy maximal lambda-lacunary subset of ``[n_min, n_max]``.

    Starts at ``n_min`` and repeatedly appends the smallest integer strictly
    greater than ``lam`` times the last scale.

    Args:
        lam: Ratio bound, must exceed 1
        n_min: First scale
        n_max: Largest admissible scale

    Returns:
        The greedy lacunary set

    """
    if not lam > 1:
        raise DomainError(f"lacunary ratio must be > 1, got {lam}")
    if not 1 <= n_min <= n_max:
        raise DomainError(f"need 1 <= n_min <= n_max, got {n_min}, {n_max}")
    exact = Fraction(lam)
    scales = [int(n_min)]
    while True:
        nxt = math.floor(exact * scales[-1]) + 1
        if nxt > n_max:
            break
        scales.append(nxt)
    return LacunarySet(lambda_=lam, scales=scales)


def dyadic_set(k_min: int, k_max: int) -> LacunarySet:
    """Powers of two ``2**k_min .. 2**k_max`` as a set with ratio bound 1.5."""
    return LacunarySet(lambda_=1.5, scales=[2**k for k in range(k_min, k_max + 1)])


def difference_multiplicity(k: int, N: int) -> int:
    """Count ``n`` in ``[1, N]`` with ``floor(sqrt(n)) - n == k``.

    Writing ``n = s + m`` with ``m = -k`` and ``s = floor(sqrt(n))`` forces
    ``s(s-1) <= m <= s(s+1)``, so only s near ``isqrt(m)`` can contribute.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    m = -int(k)
    if m < 0:
        return 0
    root = math.isqrt(m)
    count = 0
    for s in range(max(root - 1, 0), root + 2):
        n = s + m
        if 1 <= n <= N and math.isqrt(n) == s:
            count += 1
    return count


def max_multiplicity_profile(n_max: int) -> np.ndarray:
    """Return ``P`` with ``P[N-1] = max_k difference_multiplicity(k, N)``.

    ``n -> floor(sqrt(n)) - n`` is non-increasing, so each fibre is a run of
    consecutive n and the multiplicity of the newest value is its run length.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    ns = np.arange(1, n_max + 1, dtype=np.int64)
    d = floor_sqrt_array(ns) - ns
    run = np.ones(n_max, dtype=np.int64)
    for i in np.flatnonzero(d[1:] == d[:-1]) + 1:
        run[i] = run[i - 1] + 1
    return np.maximum.accumulate(run)
