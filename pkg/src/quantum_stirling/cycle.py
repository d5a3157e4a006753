"""Quantum Stirling cycle observables built from the grand-canonical kernels.

Sign convention: ``W > 0`` is work done ON the gas, ``Qh``/``Qc`` > 0 is heat
flowing INTO the gas from the hot/cold bath.  The cycle is
A (no barrier, Th) -> B (barrier, Th) -> C (barrier, Tc) -> D (no barrier, Tc).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .spectrum import BoxConfig, LevelArrays, lattice_cutoff, level_arrays
from .statistics import (
    DomainError,
    GasSpec,
    Species,
    chemical_potential,
    internal_energy,
    log_grand_partition,
    single_particle_partition,
)

DEFAULT_TAIL_TOL = 1e-16
DEFAULT_MODE_TOL = 1e-12


class Mode(str, enum.Enum):
    ENGINE = "Engine"
    REFRIGERATOR = "Refrigerator"
    ACCELERATOR = "Accelerator"
    HEATER = "Heater"
    INDETERMINATE = "Indeterminate"


class ZetaForm(str, enum.Enum):
    """How the barrier/no-barrier partition ratio is assembled.

    ``FULL`` is ln Z(barrier, mu') - ln Z(no barrier, mu) over the whole
    spectra.  ``PAIRED`` is the textbook one-dimensional product, where each
    even free-box level cancels against one copy of the doubly degenerate
    barrier level and only the odd free-box levels and the remaining barrier
    copies survive.  The two agree whenever mu == mu' (fermions) and for
    d >= 2, where the product runs over every lattice point.
    """

    PAIRED = "paired"
    FULL = "full"


@dataclass(frozen=True)
class Isotherm:
    """Everything the cycle needs from one bath temperature."""

    T: float
    mu_free: float
    mu_barrier: float
    ln_zeta: float
    U_barrier: float
    U_free: float

    @property
    def omega(self) -> float:
        return self.T * self.ln_zeta


@dataclass(frozen=True)
class CycleResult:
    Th: float
    Tc: float
    W: float
    Qh: float
    Qc: float
    mode: Mode
    eta: Optional[float] = None
    eta_scaled: Optional[float] = None

    @property
    def first_law_residual(self) -> float:
        return abs(self.W + self.Qh + self.Qc)


def _paired_spectra(config: BoxConfig, cutoff: int) -> tuple[LevelArrays, LevelArrays]:
    """Odd free-box levels and single copies of the barrier levels (d = 1)."""
    n = np.arange(1, (cutoff + 1) // 2 + 1, dtype=float)
    ones = np.ones_like(n)
    odd = LevelArrays(config.alpha * (2 * n - 1) ** 2 / 8.0, ones)
    even = LevelArrays(config.alpha * (2 * n) ** 2 / 8.0, ones)
    return odd, even


def isotherm(
    spec: GasSpec,
    d: int,
    alpha: float,
    T: float,
    tail_tol: float = DEFAULT_TAIL_TOL,
    zeta_form: ZetaForm = ZetaForm.PAIRED,
) -> Isotherm:
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    zeta_form = ZetaForm(zeta_form)
    free = BoxConfig(d, alpha, barrier=False)
    walled = BoxConfig(d, alpha, barrier=True)
    species = spec.species
    mu = chemical_potential(spec, free, T, tail_tol)
    mu_b = chemical_potential(spec, walled, T, tail_tol)

    if species is Species.MB:
        # fugacity cancels in the ratio; U is N times the mean single-particle energy
        ln_z1, e1 = single_particle_partition(free, T, tail_tol)
        ln_z1_b, e1_b = single_particle_partition(walled, T, tail_tol)
        ln_zeta = ln_z1_b - ln_z1
        U_b, U = spec.N * e1_b, spec.N * e1
    else:
        cutoff = lattice_cutoff(free, max(mu, mu_b), T, tail_tol)
        levels = level_arrays(free, cutoff)
        levels_b = level_arrays(walled, cutoff)
        if zeta_form is ZetaForm.PAIRED and d == 1:
            odd, even = _paired_spectra(free, cutoff)
            ln_zeta = log_grand_partition(even, mu_b, T, species) - log_grand_partition(odd, mu, T, species)
        else:
            ln_zeta = log_grand_partition(levels_b, mu_b, T, species) - log_grand_partition(levels, mu, T, species)
        U_b = internal_energy(levels_b, mu_b, T, species)
        U = internal_energy(levels, mu, T, species)
    return Isotherm(T=T, mu_free=mu, mu_barrier=mu_b, ln_zeta=ln_zeta, U_barrier=U_b, U_free=U)


def log_relative_partition(spec: GasSpec, d: int, alpha: float, T: float, **kwargs) -> float:
    return isotherm(spec, d, alpha, T, **kwargs).ln_zeta


def relative_partition(spec: GasSpec, d: int, alpha: float, T: float, **kwargs) -> float:
    """Z(barrier)/Z(no barrier) at temperature T; may underflow to 0 for fermions."""
    return math.exp(log_relative_partition(spec, d, alpha, T, **kwargs))


def omega(spec: GasSpec, d: int, alpha: float, T: float, **kwargs) -> float:
    return T * log_relative_partition(spec, d, alpha, T, **kwargs)


def omega_slope(spec: GasSpec, d: int, alpha: float, T: float, h: Optional[float] = None, **kwargs) -> float:
    """Central difference of omega(T); positive slope means work can be extracted at low T."""
    if h is None:
        h = 1e-4 * T
    if not T - h > 0:
        raise DomainError(f"step h={h} reaches non-positive temperature from T={T}")
    up = omega(spec, d, alpha, T + h, **kwargs)
    down = omega(spec, d, alpha, T - h, **kwargs)
    return (up - down) / (2 * h)


def classify_mode(W: float, Qh: float, Qc: float, tol: float = DEFAULT_MODE_TOL) -> Mode:
    scale = max(1.0, abs(W), abs(Qh), abs(Qc))
    if min(abs(W), abs(Qh), abs(Qc)) < tol * scale:
        return Mode.INDETERMINATE
    if W < 0:
        if Qh > 0 and Qc < 0:
            return Mode.ENGINE
    elif Qh < 0 and Qc > 0:
        return Mode.REFRIGERATOR
    elif Qh > 0 and Qc < 0:
        return Mode.ACCELERATOR
    elif Qh < 0 and Qc < 0:
        return Mode.HEATER
    # sign triples outside the four admissible modes
    return Mode.INDETERMINATE


def engine_efficiency(W: float, Qh: float) -> float:
    if not Qh > 0:
        raise DomainError("engine efficiency needs heat absorbed from the hot bath (Qh > 0)")
    return -W / Qh


def cop(W: float, Qc: float) -> float:
    if not W > 0:
        raise DomainError("coefficient of performance needs work done on the gas (W > 0)")
    return Qc / W


def carnot_limits(Th: float, Tc: float) -> tuple[float, float]:
    """(engine efficiency bound, refrigerator COP bound)."""
    if not Th > Tc:
        raise DomainError(f"Carnot limits need Th > Tc, got Th={Th}, Tc={Tc}")
    return 1.0 - Tc / Th, Tc / (Th - Tc)


def combine(hot: Isotherm, cold: Isotherm, tol: float = DEFAULT_MODE_TOL) -> CycleResult:
    """Assemble the cycle from the hot-bath and cold-bath isotherms."""
    Th, Tc = hot.T, cold.T
    W = -(hot.omega - cold.omega)
    Qh = hot.omega + hot.U_barrier - cold.U_free
    Qc = -cold.omega - hot.U_barrier + cold.U_free
    mode = classify_mode(W, Qh, Qc, tol)
    eta = eta_scaled = None
    if mode is Mode.ENGINE:
        eta = engine_efficiency(W, Qh)
        eta_scaled = eta / carnot_limits(Th, Tc)[0]
    elif mode is Mode.REFRIGERATOR:
        eta = cop(W, Qc)
        eta_scaled = eta / carnot_limits(Th, Tc)[1]
    return CycleResult(Th=Th, Tc=Tc, W=W, Qh=Qh, Qc=Qc, mode=mode, eta=eta, eta_scaled=eta_scaled)


def run_cycle(
    spec: GasSpec,
    d: int,
    alpha: float,
    Th: float,
    Tc: float,
    tail_tol: float = DEFAULT_TAIL_TOL,
    zeta_form: ZetaForm = ZetaForm.PAIRED,
    tol: float = DEFAULT_MODE_TOL,
) -> CycleResult:
    if not Tc > 0:
        raise DomainError(f"Tc must be positive, got {Tc}")
    if Th < Tc:
        raise DomainError(f"th must be >= tc (got Th={Th}, Tc={Tc})")
    hot = isotherm(spec, d, alpha, Th, tail_tol, zeta_form)
    cold = hot if Th == Tc else isotherm(spec, d, alpha, Tc, tail_tol, zeta_form)
    return combine(hot, cold, tol)
