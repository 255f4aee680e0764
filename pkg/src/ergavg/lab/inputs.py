"""Seeded 1-bounded random inputs."""

from __future__ import annotations

import numpy as np

from ergavg.core.errors import DomainError
from ergavg.core.gridfn import GridFunction


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for one trial, seeded with ``seed XOR index``."""
    return np.random.default_rng(int(seed) ^ int(index))


def rademacher(rng: np.random.Generator, length: int, start: int = 0) -> GridFunction:
    """Independent signs on ``[start, start + length)``."""
    if length < 1:
        raise DomainError(f"length must be positive, got {length}")
    return GridFunction(rng.choice((-1.0, 1.0), size=length), offset=start)


def unit_modulus(rng: np.random.Generator, length: int, start: int = 0) -> GridFunction:
    """Independent uniform phases on ``[start, start + length)``."""
    if length < 1:
        raise DomainError(f"length must be positive, got {length}")
    return GridFunction(np.exp(2j * np.pi * rng.random(length)), offset=start)


def random_walk_phase(
    rng: np.random.Generator, length: int, step: float, start: int = 0
) -> GridFunction:
    """``e(phi(x))`` where phi is a random walk with steps of ``+-step`` cycles.

    Small steps give signals whose transform is concentrated near frequency 0.
    """
    if length < 1:
        raise DomainError(f"length must be positive, got {length}")
    phase = np.cumsum(rng.choice((-step, step), size=length))
    return GridFunction(np.exp(2j * np.pi * phase), offset=start)


def torus_pairs(rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` uniform points of ``[-1/2, 1/2)^2`` as rows ``(zeta, xi)``."""
    return rng.random((count, 2)) - 0.5


def torus_grid(side: int) -> np.ndarray:
    """The ``side x side`` grid ``(j/side - 1/2, k/side - 1/2)`` as rows."""
    ticks = np.arange(side) / side - 0.5
    zeta, xi = np.meshgrid(ticks, ticks, indexing="ij")
    return np.column_stack((zeta.ravel(), xi.ravel()))


def hann_taper(f: GridFunction) -> GridFunction:
    """Multiply by ``sin^2`` over the stored interval, keeping the input 1-bounded."""
    if f.is_zero:
        return f
    j = np.arange(f.length)
    return GridFunction(f.values * np.sin(np.pi * (j + 0.5) / f.length) ** 2, f.start)
