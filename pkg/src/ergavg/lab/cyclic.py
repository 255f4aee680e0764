"""Rotation systems on Z/QZ for the equidistribution and sharpness runs."""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ergavg.core.errors import DomainError
from ergavg.operators.averages import sqrt_blocks


def fibonacci_pair(k: int) -> Tuple[int, int]:
    """``(F_k, F_{k-1})`` with ``F_1 = F_2 = 1``."""
    if k < 3:
        raise DomainError(f"need k >= 3, got {k}")
    prev, cur = 1, 1
    for _ in range(k - 2):
        prev, cur = cur, prev + cur
    return cur, prev


class CyclicSystem(BaseModel):
    """The rotation ``x -> x + a`` on ``Z/QZ`` with ``gcd(a, Q) = 1``."""

    model_config = ConfigDict(frozen=True)

    Q: int = Field(gt=0)
    a: int

    @model_validator(mode="after")
    def _coprime(self) -> CyclicSystem:
        if math.gcd(self.a % self.Q, self.Q) != 1:
            raise ValueError(f"rotation {self.a} is not coprime to {self.Q}")
        return self

    @classmethod
    def fibonacci(cls, k: int) -> CyclicSystem:
        """Modulus ``F_k`` rotated by ``F_{k-1}``."""
        Q, a = fibonacci_pair(k)
        return cls(Q=Q, a=a)

    def interval(self, length: int, start: int = 0) -> np.ndarray:
        """Indicator of ``{start, ..., start + length - 1}`` mod Q."""
        if not 0 <= length <= self.Q:
            raise DomainError(
                f"interval length must lie in [0, {self.Q}], got {length}"
            )
        out = np.zeros(self.Q)
        out[(start + np.arange(length)) % self.Q] = 1.0
        return out

    def _check(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f)
        if f.shape != (self.Q,):
            raise DomainError(f"expected an array of shape ({self.Q},), got {f.shape}")
        return f

    def average(self, f: np.ndarray, g: np.ndarray, N: int) -> np.ndarray:
        """``(1/N) sum_{n <= N} f(x - a floor(sqrt n)) g(x - a n)`` for every x.

        On each run of constant ``s = floor(sqrt n)`` the residues ``a n mod Q``
        are histogrammed, and the inner sum is a circular convolution of that
        histogram with g.
        """
        if N < 1:
            raise DomainError(f"N must be >= 1, got {N}")
        f, g = self._check(f), self._check(g)
        Q, a = self.Q, self.a
        g_hat = np.fft.fft(g)
        total = np.zeros(Q, dtype=np.complex128)
        for s, lo, hi in sqrt_blocks(1, N):
            residues = (a * np.arange(lo, hi + 1, dtype=np.int64)) % Q
            counts = np.bincount(residues, minlength=Q)
            inner = np.fft.ifft(np.fft.fft(counts) * g_hat)
            total += np.roll(f, (a * s) % Q) * inner
        total /= N
        if np.isrealobj(f) and np.isrealobj(g):
            return total.real
        return total

    def mean_average(self, f: np.ndarray, g: np.ndarray, N: int) -> float:
        """Space mean of :meth:`average`."""
        return float(np.mean(np.real(self.average(f, g, N))))
