"""Brute-force checks that stay independent of the closed-form kernels.

The enumeration routines here never call into :mod:`statistics` for their
sums; they only share the list of mode energies with it.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .spectrum import BoxConfig, LevelArrays, enumerate_levels, level_arrays, level_energy
from .statistics import (
    DomainError,
    Species,
    bose_chemical_potential,
    fermi_energy,
    internal_energy,
    log_grand_partition,
)

MAX_FERMI_MODES = 14
BOSE_TAIL = 1e-12
MIN_BOSE_CAP = 8


@dataclass(frozen=True)
class TruncatedModeSet:
    modes: tuple[float, ...]
    bose_cap: Optional[int] = None  # None: per-mode caps from the tail bound

    @classmethod
    def from_levels(cls, levels: LevelArrays, max_modes: int = MAX_FERMI_MODES, bose_cap: Optional[int] = None):
        """Expand degeneracies and keep whole levels up to ``max_modes`` modes."""
        modes: list[float] = []
        for e, g in zip(levels.energies, levels.degeneracies):
            if modes and len(modes) + int(g) > max_modes:
                break
            modes.extend([float(e)] * int(g))
        return cls(tuple(modes[:max_modes]), bose_cap)

    def as_levels(self) -> LevelArrays:
        energies = np.array(self.modes, dtype=float)
        return LevelArrays(energies, np.ones_like(energies))


def _lse(values: Sequence[float]) -> float:
    top = max(values)
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


def bose_cap(x: float) -> int:
    """Occupation cutoff whose omitted geometric tail is below 1e-12 for reduced energy x > 0."""
    r = math.exp(-x)
    cap = math.ceil(math.log(BOSE_TAIL * (1.0 - r)) / math.log(r))
    return max(cap, MIN_BOSE_CAP)


def bose_tail_bound(modes: TruncatedModeSet, mu: float, T: float) -> float:
    """Upper bound on |ln Z_product - ln Z_truncated| from the omitted occupations."""
    total = 0.0
    for e in modes.modes:
        x = (e - mu) / T
        cap = modes.bose_cap if modes.bose_cap is not None else bose_cap(x)
        r = math.exp(-x)
        # ln(1/(1-r)) - ln((1-r^(cap+1))/(1-r)) = -ln(1 - r^(cap+1))
        total += -math.log1p(-(r ** (cap + 1)))
    return total


def brute_force_log_grand_partition(
    modes: TruncatedModeSet, mu: float, T: float, species: Species, full_enumeration: bool = False
) -> float:
    """ln of the grand sum over explicit occupation configurations.

    Fermi: every vector in {0,1}^K.  Bose: per-mode finite geometric sums
    over 0..cap combined by the product rule, or with ``full_enumeration`` the
    unfactorized cross product (at most three modes).
    """
    species = Species(species)
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    x = [(e - mu) / T for e in modes.modes]
    if species is Species.FERMI:
        if len(x) > MAX_FERMI_MODES:
            raise ValueError(f"at most {MAX_FERMI_MODES} modes can be enumerated, got {len(x)}")
        occ = (np.arange(2 ** len(x))[:, None] >> np.arange(len(x))) & 1
        exponents = -(occ @ np.array(x, dtype=float))
        return _lse(exponents.tolist())
    if species is not Species.BOSE:
        raise ValueError("enumeration oracle covers Fermi and Bose gases only")
    if min(x) <= 0:
        raise DomainError("Bose chemical potential must lie below every mode energy")
    caps = [modes.bose_cap if modes.bose_cap is not None else bose_cap(xi) for xi in x]
    if full_enumeration:
        if len(x) > 3:
            raise ValueError("full Bose enumeration is limited to three modes")
        terms = [
            -sum(j * xi for j, xi in zip(occ, x))
            for occ in itertools.product(*(range(c + 1) for c in caps))
        ]
        return _lse(terms)
    return math.fsum(_lse([-j * xi for j in range(c + 1)]) for xi, c in zip(x, caps))


def finite_difference_internal_energy(levels, mu: float, T: float, species: Species, h: Optional[float] = None) -> float:
    """T^2 d(ln Z)/dT at fixed mu by central differences.

    For MB this is the mean energy per particle.
    """
    if h is None:
        h = 1e-5 * T
    if not T - h > 0:
        raise ValueError(f"step h={h} reaches non-positive temperature from T={T}")
    up = log_grand_partition(levels, mu, T + h, species)
    down = log_grand_partition(levels, mu, T - h, species)
    return T * T * (up - down) / (2 * h)


# -- fixtures -----------------------------------------------------------------

def enumeration_fixtures() -> list[tuple[str, Species, TruncatedModeSet, float, float]]:
    """(name, species, modes, mu, T) covering both species, d = 1..3, both box configurations."""
    fixtures = []
    for species in (Species.FERMI, Species.BOSE):
        for d in (1, 2, 3):
            for barrier in (False, True):
                config = BoxConfig(d, 1.0, barrier)
                modes = TruncatedModeSet.from_levels(level_arrays(config, 8))
                e0, e_mid = modes.modes[0], modes.modes[len(modes.modes) // 2]
                for T in (0.05, 0.3, 1.5):
                    if species is Species.FERMI:
                        mu = e_mid
                    else:
                        mu = e0 - T * math.log1p(1.0 / 20)
                    name = f"{species.value}-d{d}-{'barrier' if barrier else 'free'}-T{T}"
                    fixtures.append((name, species, modes, mu, T))
    return fixtures


def random_energy_fixtures(seed: int = 2023, draws: int = 20):
    """(name, species, levels, mu, T) with random mu and T on real box spectra."""
    rng = np.random.default_rng(seed)
    fixtures = []
    for species in (Species.FERMI, Species.BOSE, Species.MB):
        for d in (1, 2, 3):
            for k in range(draws):
                barrier = bool(k % 2)
                config = BoxConfig(d, 1.0, barrier)
                T = float(rng.uniform(0.05, 2.0))
                if species is Species.FERMI:
                    mu = float(rng.uniform(0.0, 6.0))
                elif species is Species.BOSE:
                    mu = config.ground_energy - T * float(rng.uniform(1e-3, 3.0))
                else:
                    mu = 0.0
                cutoff = max(int(math.ceil(math.sqrt(8 * (max(mu, 0) + 40 * T)))) + 2, 3)
                fixtures.append((f"{species.value}-d{d}-{k}", species, level_arrays(config, cutoff), mu, T))
    return fixtures


def barrier_degeneracy_mismatch(
    d: int, cutoff: int, energy_fn: Callable[[BoxConfig, Sequence[int]], float] = level_energy
) -> int:
    """Number of energies whose multiplicity differs from 2^d copies of the even sublattice.

    The barrier spectrum is built state by state with ``energy_fn`` over
    {1..cutoff}^d (cutoff even) and compared with the multiset
    {alpha/8 sum (2k_i)^2 : 1 <= k_i <= cutoff/2} repeated 2^d times.
    """
    if cutoff % 2:
        cutoff += 1
    config = BoxConfig(d, 1.0, True)
    observed: dict[int, int] = {}
    for n in itertools.product(range(1, cutoff + 1), repeat=d):
        key = round(8 * energy_fn(config, n))
        observed[key] = observed.get(key, 0) + 1
    expected: dict[int, int] = {}
    for k in itertools.product(range(1, cutoff // 2 + 1), repeat=d):
        key = sum((2 * ki) ** 2 for ki in k)
        expected[key] = expected.get(key, 0) + 2**d
    keys = set(observed) | set(expected)
    return sum(observed.get(key, 0) != expected.get(key, 0) for key in keys)


# -- verification report ------------------------------------------------------

@dataclass
class Check:
    check_name: str
    max_abs_err: float
    tolerance: float
    passed: bool
    note: str = ""


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, err: float, tol: float, note: str = "", passed: Optional[bool] = None):
        if passed is None:
            passed = bool(err < tol)
        self.checks.append(Check(name, float(err), float(tol), passed, note))

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"{status}  {c.check_name:<40s} max_abs_err={c.max_abs_err:.3e}  tol={c.tolerance:.1e}"
            if c.note:
                line += f"  ({c.note})"
            lines.append(line)
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        rows = [
            {"check_name": c.check_name, "max_abs_err": c.max_abs_err, "tolerance": c.tolerance, "pass": c.passed}
            for c in self.checks
        ]
        return json.dumps({"pass": self.passed, "checks": rows}, indent=2)


def verify_suite(
    report_path=None, energy_fn: Callable[[BoxConfig, Sequence[int]], float] = level_energy
) -> VerificationReport:
    """Run every oracle comparison; optionally write ``report_path`` (text) and its ``.json`` sibling."""
    report = VerificationReport()

    errs = {Species.FERMI: 0.0, Species.BOSE: 0.0}
    tail = 0.0
    for _, species, modes, mu, T in enumeration_fixtures():
        closed = log_grand_partition(modes.as_levels(), mu, T, species)
        brute = brute_force_log_grand_partition(modes, mu, T, species)
        errs[species] = max(errs[species], abs(closed - brute))
        if species is Species.BOSE:
            tail = max(tail, bose_tail_bound(modes, mu, T))
    report.add("fermi_product_vs_enumeration", errs[Species.FERMI], 1e-9)
    report.add("bose_product_vs_geometric_sums", errs[Species.BOSE], 1e-9)
    report.add("bose_geometric_tail_bound", tail, 1e-10)

    cross = 0.0
    for d in (1, 2, 3):
        config = BoxConfig(d, 1.0, True)
        levels = level_arrays(config, 4)
        modes = TruncatedModeSet((float(levels.energies[0]),) * min(3, int(levels.degeneracies[0])))
        mu = bose_chemical_potential(config, 20, 0.3)
        closed = log_grand_partition(modes.as_levels(), mu, 0.3, Species.BOSE)
        cross = max(cross, abs(closed - brute_force_log_grand_partition(modes, mu, 0.3, Species.BOSE, True)))
    report.add("bose_cross_product_enumeration", cross, 1e-9)

    fd = 0.0
    for _, species, levels, mu, T in random_energy_fixtures():
        analytic = internal_energy(levels, mu, T, species, N=1.0 if species is Species.MB else None)
        numeric = finite_difference_internal_energy(levels, mu, T, species)
        fd = max(fd, abs(analytic - numeric) / max(abs(analytic), 1e-300))
    report.add("internal_energy_finite_difference_rel", fd, 1e-6)

    mismatch = max(barrier_degeneracy_mismatch(d, 6, energy_fn) for d in (1, 2, 3))
    report.add("barrier_degeneracy_multiset", mismatch, 0.5, note="mismatched energies")

    lowest = enumerate_levels(BoxConfig(2, 1.0, True), 4)[0]
    report.add(
        "barrier_ground_level_d2",
        abs(lowest.energy - 1.0) + abs(lowest.degeneracy - 4),
        1e-12,
    )

    config = BoxConfig(1, 1.0, False)
    try:
        log_grand_partition(level_arrays(config, 4), config.ground_energy, 0.5, Species.BOSE)
        raised = False
    except DomainError:
        raised = True
    report.add("bose_mu_at_ground_rejected", 0.0, 0.0, note="expected DomainError", passed=raised)

    ef = abs(fermi_energy(1, 20) - 50.0)
    report.add("fermi_energy_d1_N20", ef, 1e-12)

    if report_path is not None:
        path = Path(report_path)
        if path.suffix == ".json":
            path = path.with_suffix(".txt")
        path.write_text(report.to_text(), encoding="utf-8")
        path.with_suffix(".json").write_text(report.to_json() + "\n", encoding="utf-8")
    return report
