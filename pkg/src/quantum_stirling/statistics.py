"""Grand-canonical thermodynamics of ideal Fermi, Bose and Maxwell-Boltzmann
gases on a materialized spectrum.

All kernels take ``levels`` either as a list of :class:`Level` or as
:class:`LevelArrays`; energies, chemical potentials and temperatures share the
same (alpha) units.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .spectrum import BoxConfig, Level, LevelArrays, lattice_cutoff, level_arrays


class DomainError(ValueError):
    """Input outside the physical domain (e.g. Bose mu at or above the ground level)."""


class Species(str, enum.Enum):
    FERMI = "fermi"
    BOSE = "bose"
    MB = "mb"


class MuPolicy(str, enum.Enum):
    PAPER = "paper"
    EXACT = "exact"


@dataclass(frozen=True)
class GasSpec:
    species: Species
    N: int
    mu_policy: MuPolicy = MuPolicy.PAPER

    def __post_init__(self):
        object.__setattr__(self, "species", Species(self.species))
        object.__setattr__(self, "mu_policy", MuPolicy(self.mu_policy))
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")


@dataclass(frozen=True)
class ThermoPoint:
    T: float
    mu: float
    lnZ: float
    U: float


Levels = Union[Sequence[Level], LevelArrays]

# Fermi energy prefactor alpha * N**(2/d) / (2 C_d**(2/d)) with C_d the unit-ball volume
_UNIT_BALL = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}


def as_arrays(levels: Levels) -> LevelArrays:
    if isinstance(levels, LevelArrays):
        return levels
    energies = np.array([lv.energy for lv in levels], dtype=float)
    degeneracies = np.array([lv.degeneracy for lv in levels], dtype=float)
    return LevelArrays(energies, degeneracies)


# -- numerically stable pieces ------------------------------------------------

def softplus(x):
    """ln(1 + e^x) without overflow for large |x|."""
    x = np.asarray(x, dtype=float)
    pos = x > 0
    out = np.empty_like(x)
    out[pos] = x[pos] + np.log1p(np.exp(-x[pos]))
    out[~pos] = np.log1p(np.exp(x[~pos]))
    return out


def log1mexp(y):
    """ln(1 - e^-y) for y > 0, accurate both near 0 and for large y."""
    y = np.asarray(y, dtype=float)
    small = y <= math.log(2.0)
    out = np.empty_like(y)
    out[small] = np.log(-np.expm1(-y[small]))
    out[~small] = np.log1p(-np.exp(-y[~small]))
    return out


def _logsumexp(a, weights):
    top = np.max(a)
    return top + math.log(float(np.sum(weights * np.exp(a - top))))


def occupation(x, species: Species):
    """Mean occupation of one mode with reduced energy x = (E - mu)/T."""
    x = np.asarray(x, dtype=float)
    if species is Species.FERMI:
        return 0.5 * (1.0 - np.tanh(0.5 * x))
    if species is Species.BOSE:
        decay = np.exp(-x)
        return decay / -np.expm1(-x)
    return np.exp(-x)


def _check(levels: Levels, mu: float, T: float, species: Species) -> LevelArrays:
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    arr = as_arrays(levels)
    if Species(species) is Species.BOSE and mu >= arr.energies.min():
        raise DomainError(
            f"Bose chemical potential {mu!r} must lie below the ground level {arr.energies.min()!r}"
        )
    return arr


# -- thermodynamic kernels ----------------------------------------------------

def log_grand_partition(levels: Levels, mu: float, T: float, species: Species) -> float:
    """ln Z of the ideal gas at fixed (mu, T).

    For MB this is the single-particle ln sum_n g_n exp(-E_n/T); the fugacity
    is left out because only ratios of it enter the cycle.
    """
    species = Species(species)
    energies, g = _check(levels, mu, T, species)
    if species is Species.FERMI:
        return float(np.sum(g * softplus(-(energies - mu) / T)))
    if species is Species.BOSE:
        return float(-np.sum(g * log1mexp((energies - mu) / T)))
    return _logsumexp(-energies / T, g)


def mean_particle_number(levels: Levels, mu: float, T: float, species: Species) -> float:
    species = Species(species)
    energies, g = _check(levels, mu, T, species)
    if species is Species.MB:
        return math.exp(mu / T + _logsumexp(-energies / T, g))
    return float(np.sum(g * occupation((energies - mu) / T, species)))


def internal_energy(levels: Levels, mu: float, T: float, species: Species, N: float | None = None) -> float:
    """T^2 d(ln Z)/dT at fixed mu, i.e. sum_n g_n (E_n - mu) f(E_n).

    For MB the mean energy per particle times ``N`` is returned; ``N``
    defaults to the particle number implied by ``mu``.
    """
    species = Species(species)
    energies, g = _check(levels, mu, T, species)
    if species is Species.MB:
        a = -energies / T
        w = g * np.exp(a - a.max())
        per_particle = float(np.sum(w * energies) / np.sum(w))
        if N is None:
            N = mean_particle_number(levels, mu, T, species)
        return N * per_particle
    return float(np.sum(g * (energies - mu) * occupation((energies - mu) / T, species)))


def thermo_point(levels: Levels, mu: float, T: float, species: Species) -> ThermoPoint:
    return ThermoPoint(
        T=T,
        mu=mu,
        lnZ=log_grand_partition(levels, mu, T, species),
        U=internal_energy(levels, mu, T, species),
    )


# -- chemical potentials ------------------------------------------------------

def fermi_energy(d: int, N: int, alpha: float = 1.0) -> float:
    if d not in _UNIT_BALL:
        raise ValueError(f"unsupported dimension {d}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if d == 1:
        return alpha * N**2 / 8.0
    if d == 2:
        return alpha * N / (2.0 * math.pi)
    return (6.0 / math.pi) ** (2.0 / 3.0) * alpha * N ** (2.0 / 3.0) / 8.0


def bose_chemical_potential(config: BoxConfig, N: int, T: float) -> float:
    """Low-temperature closed form E_1 - T ln(1 + g_1/N), g_1 = 2^d with barriers."""
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    g1 = 2**config.d if config.barrier else 1
    return config.ground_energy - T * math.log1p(g1 / N)


def solve_mu_exact(
    levels: Levels,
    N: float,
    T: float,
    species: Species,
    rtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Bisection for the mu at which ``mean_particle_number`` equals ``N``."""
    species = Species(species)
    arr = as_arrays(levels)
    e_min, e_max = float(arr.energies.min()), float(arr.energies.max())
    if species is Species.MB:
        return T * math.log(N) - log_grand_partition(arr, 0.0, T, species) * T
    if species is Species.FERMI:
        lo, hi = e_min - 50 * T, e_max + 50 * T
    else:
        lo, hi = e_min - 50 * T - N, e_min - 1e-14 * max(1.0, abs(e_min))

    def excess(mu):
        return mean_particle_number(arr, mu, T, species) - N

    if not excess(lo) < 0 < excess(hi):
        raise DomainError(f"cannot bracket mu for N={N} on this spectrum at T={T}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        diff = excess(mid)
        if abs(diff) <= rtol * N or mid in (lo, hi):
            return mid
        if diff < 0:
            lo = mid
        else:
            hi = mid
    raise RuntimeError(f"mu bisection did not converge in {max_iter} iterations")


def spectrum_for(config: BoxConfig, mu: float, T: float, tail_tol: float = 1e-16) -> LevelArrays:
    return level_arrays(config, lattice_cutoff(config, mu, T, tail_tol))


def single_particle_partition(config: BoxConfig, T: float, tail_tol: float = 1e-16) -> tuple[float, float]:
    """(ln Z_1, mean energy per particle) of one classical particle.

    The box factorizes over directions, so both follow from the 1-D spectrum
    (the 2^d barrier multiplicity is 2 per direction); this keeps the
    high-temperature lattices one-dimensional.
    """
    line = BoxConfig(1, config.alpha, config.barrier)
    levels = spectrum_for(line, 0.0, T, tail_tol)
    ln_z1 = log_grand_partition(levels, 0.0, T, Species.MB)
    e1 = internal_energy(levels, 0.0, T, Species.MB, N=1.0)
    return config.d * ln_z1, config.d * e1


def chemical_potential(spec: GasSpec, config: BoxConfig, T: float, tail_tol: float = 1e-16) -> float:
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    species = spec.species
    if species is Species.MB:
        return T * math.log(spec.N) - T * single_particle_partition(config, T, tail_tol)[0]
    if species is Species.FERMI:
        approx = fermi_energy(config.d, spec.N, config.alpha)
    else:
        approx = bose_chemical_potential(config, spec.N, T)
    if spec.mu_policy is MuPolicy.PAPER:
        return approx
    # the exact mu can sit above the closed form; widen the lattice until stable
    cutoff = lattice_cutoff(config, approx, T, tail_tol)
    while True:
        mu = solve_mu_exact(level_arrays(config, cutoff), spec.N, T, species)
        needed = lattice_cutoff(config, mu, T, tail_tol)
        if needed <= cutoff:
            return mu
        cutoff = needed
