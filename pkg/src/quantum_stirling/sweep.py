"""Grid evaluation over bath temperatures and the CSV/JSON emitters.

Every grid point only needs two isotherms (one per bath), so the isotherms are
evaluated once per distinct temperature, optionally in a process pool, and the
rows are assembled afterwards in a fixed order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from functools import partial
from typing import Iterable, Optional, Sequence

import numpy as np

from .cycle import (
    DEFAULT_MODE_TOL,
    DEFAULT_TAIL_TOL,
    CycleResult,
    Isotherm,
    Mode,
    ZetaForm,
    combine,
    isotherm,
    omega_slope,
)
from .statistics import GasSpec, MuPolicy, Species

SWEEP_HEADER = ("species", "d", "N", "Th", "Tc", "W", "Qh", "Qc", "mode", "eta", "eta_scaled")
ZETA_HEADER = ("T", "zeta", "ln_zeta", "omega", "domega_dT")
NSWEEP_HEADER = ("N", "Th", "eta_scaled")


@dataclass(frozen=True)
class SweepSpec:
    species: Species = Species.FERMI
    d: int = 1
    N: int = 20
    alpha: float = 1.0
    th_min: float = 0.01
    th_max: float = 1.0
    th_steps: int = 100
    tc_min: float = 0.01
    tc_max: float = 1.0
    tc_steps: int = 100
    mu_policy: MuPolicy = MuPolicy.PAPER
    tail_tol: float = DEFAULT_TAIL_TOL
    zeta_form: ZetaForm = ZetaForm.PAIRED
    fmt: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "species", Species(self.species))
        object.__setattr__(self, "mu_policy", MuPolicy(self.mu_policy))
        object.__setattr__(self, "zeta_form", ZetaForm(self.zeta_form))
        for name in ("th", "tc"):
            lo, hi, steps = (getattr(self, f"{name}_{k}") for k in ("min", "max", "steps"))
            if steps < 2:
                raise ValueError(f"{name}_steps must be >= 2, got {steps}")
            if not 0 < lo < hi:
                raise ValueError(f"need 0 < {name}_min < {name}_max, got {lo}, {hi}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.fmt!r}")

    @property
    def gas(self) -> GasSpec:
        return GasSpec(self.species, self.N, self.mu_policy)

    def th_grid(self) -> np.ndarray:
        return np.linspace(self.th_min, self.th_max, self.th_steps)

    def tc_grid(self) -> np.ndarray:
        return np.linspace(self.tc_min, self.tc_max, self.tc_steps)


@dataclass(frozen=True)
class SweepRow:
    species: str
    d: int
    N: int
    Th: float
    Tc: float
    W: float
    Qh: float
    Qc: float
    mode: str
    eta: Optional[float]
    eta_scaled: Optional[float]

    @classmethod
    def from_result(cls, gas: GasSpec, d: int, result: CycleResult) -> "SweepRow":
        return cls(
            gas.species.value, d, gas.N, result.Th, result.Tc,
            result.W, result.Qh, result.Qc, result.mode.value, result.eta, result.eta_scaled,
        )


def isotherms(
    gas: GasSpec,
    d: int,
    alpha: float,
    temperatures: Sequence[float],
    tail_tol: float = DEFAULT_TAIL_TOL,
    zeta_form: ZetaForm = ZetaForm.PAIRED,
    workers: int = 1,
) -> dict[float, Isotherm]:
    """Isotherm for each distinct temperature; order of evaluation does not affect results."""
    temps = sorted(set(float(t) for t in temperatures))
    evaluate = partial(isotherm, gas, d, alpha, tail_tol=tail_tol, zeta_form=zeta_form)
    if workers > 1 and len(temps) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(evaluate, temps, chunksize=max(1, len(temps) // (4 * workers))))
    else:
        values = [evaluate(t) for t in temps]
    return dict(zip(temps, values))


def run_sweep(spec: SweepSpec, workers: int = 1, tol: float = DEFAULT_MODE_TOL) -> list[SweepRow]:
    """One row per grid point with Tc <= Th, Th-major then Tc, both ascending."""
    th, tc = spec.th_grid(), spec.tc_grid()
    gas = spec.gas
    cache = isotherms(gas, spec.d, spec.alpha, np.concatenate([th, tc]), spec.tail_tol, spec.zeta_form, workers)
    rows = []
    for t_hot in th:
        hot = cache[float(t_hot)]
        for t_cold in tc:
            if t_cold > t_hot:
                continue
            rows.append(SweepRow.from_result(gas, spec.d, combine(hot, cache[float(t_cold)], tol)))
    return rows


def zeta_table(
    gas: GasSpec,
    d: int,
    alpha: float = 1.0,
    t_min: float = 0.01,
    t_max: float = 1.0,
    points: int = 100,
    spacing: str = "log",
    tail_tol: float = DEFAULT_TAIL_TOL,
    zeta_form: ZetaForm = ZetaForm.PAIRED,
) -> list[tuple[float, float, float, float, float]]:
    """(T, zeta, ln zeta, omega, d omega/dT) on a log or linear temperature grid."""
    if spacing == "log":
        grid = np.geomspace(t_min, t_max, points)
    elif spacing == "linear":
        grid = np.linspace(t_min, t_max, points)
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    rows = []
    for T in grid:
        T = float(T)
        iso = isotherm(gas, d, alpha, T, tail_tol, zeta_form)
        slope = omega_slope(gas, d, alpha, T, tail_tol=tail_tol, zeta_form=zeta_form)
        rows.append((T, math.exp(iso.ln_zeta), iso.ln_zeta, iso.omega, slope))
    return rows


def nsweep_table(
    species: Species,
    d: int,
    ratio: float,
    th_values: Iterable[float],
    n_values: Iterable[int],
    alpha: float = 1.0,
    mu_policy: MuPolicy = MuPolicy.PAPER,
    tail_tol: float = DEFAULT_TAIL_TOL,
    zeta_form: ZetaForm = ZetaForm.PAIRED,
) -> list[tuple[int, float, float]]:
    """Carnot-scaled engine efficiency at Tc = ratio*Th; non-engine points map to 0."""
    if not 0 < ratio < 1:
        raise ValueError(f"ratio must lie in (0, 1), got {ratio}")
    th_values = [float(t) for t in th_values]
    rows = []
    for N in n_values:
        gas = GasSpec(species, int(N), mu_policy)
        for Th in th_values:
            hot = isotherm(gas, d, alpha, Th, tail_tol, zeta_form)
            cold = isotherm(gas, d, alpha, ratio * Th, tail_tol, zeta_form)
            result = combine(hot, cold)
            scaled = result.eta_scaled if result.mode is Mode.ENGINE else 0.0
            rows.append((int(N), Th, scaled))
    return rows


# -- emitters -----------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) or isinstance(value, np.floating):
        return format(float(value), ".17g")
    return str(value)


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def rows_to_json(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    records = [dict(zip(header, row)) for row in rows]
    return json.dumps(records, indent=1) + "\n"


def sweep_rows_as_tuples(rows: Iterable[SweepRow]) -> list[tuple]:
    names = [f.name for f in fields(SweepRow)]
    return [tuple(getattr(r, n) for n in names) for r in rows]


def render(header: Sequence[str], rows: Iterable[Sequence], fmt: str = "csv") -> str:
    if fmt == "csv":
        return rows_to_csv(header, rows)
    if fmt == "json":
        return rows_to_json(header, rows)
    raise ValueError(f"unknown output format {fmt!r}")
