"""Quantum Stirling cycles with ideal Fermi, Bose and Maxwell-Boltzmann gases in a box."""

from .cycle import (
    CycleResult,
    Isotherm,
    Mode,
    ZetaForm,
    carnot_limits,
    classify_mode,
    cop,
    engine_efficiency,
    isotherm,
    log_relative_partition,
    omega,
    omega_slope,
    relative_partition,
    run_cycle,
)
from .spectrum import BoxConfig, Level, LevelArrays, enumerate_levels, lattice_cutoff, level_arrays, level_energy
from .statistics import (
    DomainError,
    GasSpec,
    MuPolicy,
    Species,
    ThermoPoint,
    bose_chemical_potential,
    chemical_potential,
    fermi_energy,
    internal_energy,
    log_grand_partition,
    mean_particle_number,
    solve_mu_exact,
)
from .sweep import SweepRow, SweepSpec, run_sweep

__version__ = "0.1.0"
