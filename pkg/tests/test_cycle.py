import math

import mpmath
import pytest

from quantum_stirling.cycle import (
    Mode,
    ZetaForm,
    carnot_limits,
    classify_mode,
    combine,
    cop,
    engine_efficiency,
    isotherm,
    log_relative_partition,
    omega,
    omega_slope,
    relative_partition,
    run_cycle,
)
from quantum_stirling.statistics import DomainError, GasSpec, MuPolicy, Species

FERMI20 = GasSpec(Species.FERMI, 20)
BOSE20 = GasSpec(Species.BOSE, 20)
FERMI40 = GasSpec(Species.FERMI, 40)
BOSE40 = GasSpec(Species.BOSE, 40)
MB20 = GasSpec(Species.MB, 20)


def classical_zeta(d, T):
    """Theta-function value of the MB ratio, exact up to O(exp(-2 pi^2 T))."""
    s = math.sqrt(2 * math.pi * T)
    return ((s - 1.0) / (s - 0.5)) ** d


def paired_ln_zeta_mp(mu, mu_b, T, species, terms=200):
    """High-precision one-dimensional paired product, summed term by term."""
    mpmath.mp.dps = 50
    T = mpmath.mpf(T)
    total = mpmath.mpf(0)
    sign = 1 if species is Species.FERMI else -1
    for n in range(1, terms):
        even = mpmath.exp(-(mpmath.mpf((2 * n) ** 2) / 8 - mu_b) / T)
        odd = mpmath.exp(-(mpmath.mpf((2 * n - 1) ** 2) / 8 - mu) / T)
        total += sign * (mpmath.log(1 + sign * even) - mpmath.log(1 + sign * odd))
    return total


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("T", [50.0, 100.0, 400.0])
def test_mb_zeta_matches_theta_asymptotics(d, T):
    assert relative_partition(MB20, d, 1.0, T) == pytest.approx(classical_zeta(d, T), rel=1e-10)


def test_mb_zeta_tends_to_one():
    deviations = [abs(relative_partition(MB20, 3, 1.0, T) - 1) for T in (10.0, 100.0, 1000.0, 1e4)]
    assert deviations == sorted(deviations, reverse=True)
    assert deviations[-1] < 0.01


def test_fermi_zeta_tiny_in_one_dimension():
    ln_zeta = log_relative_partition(FERMI20, 1, 1.0, 1.0)
    assert -26.0 <= ln_zeta <= -20.0  # zeta ~ 1e-10 order


@pytest.mark.parametrize("d", [1, 2, 3])
def test_fermi_zeta_vanishes_at_low_temperature(d):
    assert log_relative_partition(FERMI20, d, 1.0, 0.01) < math.log(1e-30)
    assert relative_partition(FERMI20, d, 1.0, 0.01) < 1e-30


def test_fermi_paired_product_high_precision():
    for T in (0.25, 0.5, 1.0):
        expected = paired_ln_zeta_mp(50, 50, T, Species.FERMI)
        assert log_relative_partition(FERMI20, 1, 1.0, T) == pytest.approx(float(expected), rel=1e-12)


def test_bose_paired_product_high_precision():
    for T in (0.05, 0.5):
        iso = isotherm(BOSE20, 1, 1.0, T)
        expected = paired_ln_zeta_mp(iso.mu_free, iso.mu_barrier, T, Species.BOSE)
        assert iso.ln_zeta == pytest.approx(float(expected), rel=1e-12)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_forms_agree_for_fermions(d):
    for T in (0.05, 0.3, 1.0):
        paired = log_relative_partition(FERMI20, d, 1.0, T, zeta_form=ZetaForm.PAIRED)
        full = log_relative_partition(FERMI20, d, 1.0, T, zeta_form=ZetaForm.FULL)
        assert paired == pytest.approx(full, rel=1e-12)


@pytest.mark.parametrize("d", [2, 3])
def test_forms_agree_for_bosons_above_one_dimension(d):
    for T in (0.05, 0.3):
        paired = log_relative_partition(BOSE20, d, 1.0, T, zeta_form="paired")
        full = log_relative_partition(BOSE20, d, 1.0, T, zeta_form="full")
        assert paired == full


def test_forms_differ_for_bosons_in_one_dimension():
    paired = log_relative_partition(BOSE20, 1, 1.0, 0.05, zeta_form="paired")
    full = log_relative_partition(BOSE20, 1, 1.0, 0.05, zeta_form="full")
    assert paired < 0 < full


@pytest.mark.parametrize("N", [20, 40])
def test_bose_zeta_ground_state_limit(N):
    # only the ground levels matter: x = ln(1 + 1/N), x' = ln(1 + 2^d/N)
    T = 0.005
    for d in (1, 2, 3):
        g = 2**d
        if d == 1:
            expected = math.log((N + 2) / (2 * (N + 1)))
        else:
            expected = -math.log(N + 1) + g * math.log((N + g) / g)
        assert log_relative_partition(GasSpec(Species.BOSE, N), d, 1.0, T) == pytest.approx(expected, rel=1e-9)


def test_bose_zeta_at_origin_grows_with_dimension():
    values = [relative_partition(BOSE20, d, 1.0, 0.01) for d in (1, 2, 3)]
    assert values[0] < values[1] < values[2]


def test_omega_signs():
    assert omega(MB20, 2, 1.0, 100.0) == pytest.approx(100.0 * math.log(classical_zeta(2, 100.0)), rel=1e-10)
    assert omega(FERMI20, 1, 1.0, 0.5) < 0
    assert omega(BOSE20, 1, 1.0, 0.05, zeta_form="full") > 0
    assert omega(BOSE20, 2, 1.0, 0.05) > 0


def test_omega_is_t_times_log_zeta():
    iso = isotherm(FERMI20, 2, 1.0, 0.4)
    assert omega(FERMI20, 2, 1.0, 0.4) == iso.T * iso.ln_zeta == iso.omega


def test_omega_slope_signs():
    assert omega_slope(FERMI40, 1, 1.0, 0.05) > 0
    assert omega_slope(BOSE40, 1, 1.0, 0.05) < 0
    assert omega_slope(BOSE40, 2, 1.0, 0.05) > 0
    assert omega_slope(BOSE40, 3, 1.0, 0.05) > 0


def test_omega_slope_step_guard():
    with pytest.raises(DomainError):
        omega_slope(FERMI20, 1, 1.0, 0.05, h=0.05)


@pytest.mark.parametrize("spec", [FERMI20, BOSE20, MB20])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_equal_temperatures_give_no_work(spec, d):
    result = run_cycle(spec, d, 1.0, 0.3, 0.3)
    assert result.W == 0.0
    assert result.Qh == pytest.approx(-result.Qc, abs=1e-12)
    assert result.mode is Mode.INDETERMINATE


def test_fermi_one_dimension_engine_near_carnot():
    result = run_cycle(FERMI20, 1, 1.0, 0.5, 0.25)
    assert result.mode is Mode.ENGINE
    assert result.eta_scaled >= 0.99
    # independent omega values from the high-precision paired product
    w_h = 0.5 * float(paired_ln_zeta_mp(50, 50, 0.5, Species.FERMI))
    w_c = 0.25 * float(paired_ln_zeta_mp(50, 50, 0.25, Species.FERMI))
    assert result.W == pytest.approx(-(w_h - w_c), rel=1e-10)


def test_bose_one_dimension_takes_work():
    result = run_cycle(BOSE20, 1, 1.0, 0.8, 0.1)
    assert result.W > 0
    assert result.mode is not Mode.ENGINE


@pytest.mark.parametrize("d", [2, 3])
def test_bose_low_temperature_engine_efficiency(d):
    """Ground-state-only closed form for the engine efficiency at Th -> 0."""
    N, Th, Tc = 20, 0.01, 0.005
    g = 2**d
    L0 = -math.log(N + 1) + g * math.log((N + g) / g)
    Qh = Th * L0 + N * Th * math.log1p(g / N) - N * Tc * math.log1p(1 / N)
    expected = (Th - Tc) * L0 / Qh
    result = run_cycle(BOSE20, d, 1.0, Th, Tc)
    assert result.mode is Mode.ENGINE
    assert result.eta == pytest.approx(expected, rel=1e-8)
    assert result.eta_scaled < 1


def test_run_cycle_preconditions():
    with pytest.raises(DomainError):
        run_cycle(FERMI20, 1, 1.0, 0.2, 0.3)
    with pytest.raises(DomainError):
        run_cycle(FERMI20, 1, 1.0, 0.2, 0.0)
    with pytest.raises(DomainError):
        run_cycle(GasSpec(Species.BOSE, 20), 1, 1.0, -1.0, -2.0)


def test_first_law_and_formulas():
    hot = isotherm(BOSE20, 2, 1.0, 0.6)
    cold = isotherm(BOSE20, 2, 1.0, 0.2)
    result = combine(hot, cold)
    assert result.W == -(hot.T * hot.ln_zeta - cold.T * cold.ln_zeta)
    assert result.Qh == pytest.approx(hot.T * hot.ln_zeta + hot.U_barrier - cold.U_free)
    assert result.first_law_residual <= 1e-12 * max(1, abs(result.W), abs(result.Qh))


@pytest.mark.parametrize("species", [Species.FERMI, Species.BOSE])
def test_exact_mu_policy_runs(species):
    # separate mu per configuration; only bookkeeping is checked here
    hot = isotherm(GasSpec(species, 20, MuPolicy.EXACT), 2, 1.0, 0.3)
    cold = isotherm(GasSpec(species, 20, MuPolicy.EXACT), 2, 1.0, 0.15)
    result = combine(hot, cold)
    assert result.first_law_residual <= 1e-9 * max(1, abs(result.W), abs(result.Qh))
    if species is Species.BOSE:
        assert hot.mu_free < 0.25 and hot.mu_barrier < 1.0


@pytest.mark.parametrize(
    "W, Qh, Qc, mode",
    [
        (-1, 2, -1, Mode.ENGINE),
        (1, -3, 2, Mode.REFRIGERATOR),
        (1, 1, -2, Mode.ACCELERATOR),
        (3, -1, -2, Mode.HEATER),
        (1e-15, 1, -1, Mode.INDETERMINATE),
        (-1, -1, 2, Mode.INDETERMINATE),
    ],
)
def test_classify_mode(W, Qh, Qc, mode):
    assert classify_mode(W, Qh, Qc) is mode
    for c in (1e-6, 3.0, 1e8):
        assert classify_mode(c * W, c * Qh, c * Qc) is mode


def test_efficiencies():
    assert carnot_limits(0.5, 0.25) == (0.5, 1.0)
    assert engine_efficiency(-1, 2) == 0.5
    assert cop(2, 1) == 0.5
    with pytest.raises(DomainError):
        engine_efficiency(-1, -2)
    with pytest.raises(DomainError):
        cop(-1, 1)
    with pytest.raises(DomainError):
        carnot_limits(0.2, 0.2)


def test_efficiency_absent_outside_its_mode():
    result = run_cycle(BOSE20, 1, 1.0, 0.8, 0.1)
    assert result.mode is Mode.ACCELERATOR
    assert result.eta is None and result.eta_scaled is None
