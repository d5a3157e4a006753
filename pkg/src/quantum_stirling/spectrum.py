"""Single-particle levels of a d-dimensional infinite box, with or without
impenetrable mid-box barriers.

Energies are dimensionless multiples of the box temperature scale ``alpha``
(k_B absorbed), so a level with quantum numbers ``n`` sits at
``alpha/8 * sum(n_i**2)``.  Inserting a barrier in every direction lifts each
odd quantum number onto the next even one, which is why the barrier spectrum
is the even sublattice with a ``2**d`` multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

SUPPORTED_DIMENSIONS = (1, 2, 3)


@dataclass(frozen=True)
class BoxConfig:
    d: int = 1
    alpha: float = 1.0
    barrier: bool = False

    def __post_init__(self):
        if self.d not in SUPPORTED_DIMENSIONS:
            raise ValueError(f"d must be one of {SUPPORTED_DIMENSIONS}, got {self.d}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def with_barrier(self, barrier: bool) -> "BoxConfig":
        return BoxConfig(self.d, self.alpha, barrier)

    @property
    def ground_energy(self) -> float:
        # alpha*d/8 without barriers, alpha*d/2 with them
        return self.alpha * self.d * (4 if self.barrier else 1) / 8.0


@dataclass(frozen=True)
class Level:
    energy: float
    degeneracy: int


class LevelArrays(NamedTuple):
    """Array form of a spectrum, as consumed by the thermodynamic kernels."""

    energies: np.ndarray
    degeneracies: np.ndarray


def _shifted(n: int, barrier: bool) -> int:
    if barrier and n % 2 == 1:
        return n + 1
    return n


def level_energy(config: BoxConfig, n: Sequence[int]) -> float:
    """Energy of the state labelled by the quantum numbers ``n`` (each >= 1)."""
    n = tuple(int(k) for k in n)
    if len(n) != config.d:
        raise ValueError(f"expected {config.d} quantum numbers, got {len(n)}")
    if any(k < 1 for k in n):
        raise ValueError(f"quantum numbers must be >= 1, got {n}")
    key = sum(_shifted(k, config.barrier) ** 2 for k in n)
    return config.alpha * key / 8.0


def _lattice_keys(config: BoxConfig, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Distinct integer keys sum(m_i**2) and their state counts."""
    if config.barrier:
        # {1..cutoff} folds onto the even points {2, 4, .., 2*ceil(cutoff/2)}
        m = 2 * np.arange(1, (cutoff + 1) // 2 + 1, dtype=np.int64)
        weight = 2 ** config.d
    else:
        m = np.arange(1, cutoff + 1, dtype=np.int64)
        weight = 1
    squares = m * m
    keys = squares
    for _ in range(config.d - 1):
        keys = np.add.outer(keys, squares).ravel()
    counts = np.bincount(keys)
    distinct = np.flatnonzero(counts)
    return distinct, counts[distinct] * weight


def level_arrays(config: BoxConfig, cutoff: int) -> LevelArrays:
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    keys, counts = _lattice_keys(config, int(cutoff))
    return LevelArrays(config.alpha * keys / 8.0, counts)


def enumerate_levels(config: BoxConfig, cutoff: int) -> list[Level]:
    """Distinct levels from the lattice ``{1..cutoff}^d``, sorted by energy.

    Degeneracies are aggregated on the integer key ``sum(m_i**2)``, never by
    comparing floating energies.
    """
    energies, degeneracies = level_arrays(config, cutoff)
    return [Level(float(e), int(g)) for e, g in zip(energies, degeneracies)]


def lattice_cutoff(config: BoxConfig, mu: float, T: float, tail_tol: float = 1e-16) -> int:
    """Per-dimension quantum-number cutoff for truncating the level sums.

    The first omitted state has Boltzmann weight exp(-(E - mu)/T) below
    ``tail_tol``; two extra shells are kept as a safety margin.
    """
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    if not 0 < tail_tol < 1:
        raise ValueError(f"tail_tol must lie in (0, 1), got {tail_tol}")
    reach = max(mu, 0.0) + T * math.log(1.0 / tail_tol)
    return math.ceil(math.sqrt(8.0 / config.alpha * reach)) + 2
