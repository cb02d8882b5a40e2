import numpy as np
import pytest

from critherm import exceptions
from critherm.design import (
    BaselineKind,
    FdnReading,
    NoiseModel,
    baseline_peak,
    baseline_qfi,
    equal_gap_coefficient,
    fdn_analytic,
    fisher_coefficient,
    maximize_equal_gaps,
    noise_ratio_numeric,
    noise_report,
    optimal_gap,
    optimal_level_distribution,
    smear_distribution,
    smeared_cfi,
)
from critherm.thermo import fisher_from_distribution, qfi_temperature
from tests.util import check_exception_raised, synthetic_spectrum


def test_optimal_gap_known_values():
    one = optimal_gap(1)
    assert abs(one.x_star - 2.3994) < 1e-3
    assert abs(one.chi_max - 0.439) < 1e-3
    two = optimal_gap(2)
    assert abs(two.x_star - 2.655) < 2e-3
    assert abs(two.chi_max - 0.762) < 1e-3
    assert one.residual < 1e-9
    assert abs(two.f_max(0.5) - two.chi_max / 0.25) < 1e-12
    check_exception_raised(lambda: optimal_gap(0.5), ValueError)


@pytest.mark.parametrize("m", [1, 2, 5])
def test_optimal_gap_matches_numeric_maximum(m):
    design = optimal_gap(m)
    x, chi = maximize_equal_gaps(m)
    assert abs(x - design.x_star) < 1e-6
    assert abs(chi - design.chi_max) < 1e-6


def test_optimal_gap_grows_with_degeneracy():
    designs = [optimal_gap(m) for m in [1, 2, 5, 20, 100]]
    assert all(a.x_star < b.x_star for a, b in zip(designs, designs[1:]))
    assert all(a.chi_max < b.chi_max for a, b in zip(designs, designs[1:]))


def test_optimal_design_is_the_qfi_of_its_spectrum():
    m, T = 3, 0.7
    design = optimal_gap(m)
    spectrum = synthetic_spectrum([0.0] + [design.delta_max(T)] * m)
    assert abs(qfi_temperature(spectrum, T) - design.f_max(T)) < 1e-12


def test_fisher_coefficient_equal_gaps():
    assert abs(fisher_coefficient([2.5, 2.5, 2.5]) - equal_gap_coefficient(2.5, 3)) < 1e-15
    # spreading the excited levels can only lose information at the optimum
    x = optimal_gap(2).x_star
    assert fisher_coefficient([x - 0.3, x + 0.3]) < fisher_coefficient([x, x])


def test_fisher_coefficient_is_energy_fisher():
    gaps = np.array([0.5, 1.7, 3.0])
    assert abs(fisher_coefficient(gaps) - qfi_temperature(synthetic_spectrum(np.concatenate([[0.0], gaps])), 1.0)) < 1e-12


def test_generic_baseline_peak():
    T_star, f_inf = baseline_peak(BaselineKind.GENERIC, 1.0)
    assert abs(T_star - 1.0 / 3.83) < 0.002
    assert abs(f_inf - 4.88) < 0.01


def test_baseline_is_ladder_qfi():
    g, T = 0.8, 0.3
    ladder = synthetic_spectrum(g * np.arange(400))
    assert abs(baseline_qfi(BaselineKind.GENERIC, g, T) / qfi_temperature(ladder, T) - 1.0) < 1e-10


def test_baseline_variants():
    T = np.geomspace(0.05, 3.0, 9)
    assert np.allclose(baseline_qfi(BaselineKind.SPIN1, -1.869, T), baseline_qfi(BaselineKind.GENERIC, 2 * 1.869, T))
    assert np.allclose(baseline_qfi(BaselineKind.XXZ, 0.5, T), baseline_qfi(BaselineKind.GENERIC, 0.5, T))
    # overflow-safe far below the peak
    assert baseline_qfi(BaselineKind.GENERIC, 1.0, 1e-4) == 0.0
    check_exception_raised(lambda: baseline_qfi("generic", 0.0, 1.0), exceptions.InvalidModelException)
    check_exception_raised(lambda: baseline_qfi("generic", 1.0, -1.0), exceptions.InvalidTemperatureException)


def test_smearing_preserves_normalisation():
    energies, p, _ = optimal_level_distribution(4)
    smeared = smear_distribution(energies, p, 0.7)
    assert abs(smeared.sum() - 1.0) < 1e-15
    assert np.array_equal(smear_distribution(energies, p, 0.0), p)
    check_exception_raised(lambda: smear_distribution(energies, p, -0.1), ValueError)
    check_exception_raised(lambda: NoiseModel(sigma=-1.0, outcome_grid=energies), ValueError)


def test_optimal_level_distribution():
    energies, p, dp = optimal_level_distribution(4, T=2.0)
    assert np.allclose(energies, [0.0, 2.0 * np.log(4)])
    assert np.allclose(p, [0.5, 0.5])
    assert abs(dp.sum()) < 1e-15
    # noiseless F T^2 equals (log m)^2 / 4
    assert abs(fisher_from_distribution(p, dp).f_c * 4.0 - np.log(4) ** 2 / 4) < 1e-12


def test_noise_ratio_limits_and_monotonicity():
    sigmas = np.geomspace(0.01, 2.0, 30)
    ratios = np.array([noise_ratio_numeric(4, s) for s in sigmas])
    assert abs(ratios[0] - 1.0) < 1e-9
    assert np.all(np.diff(ratios) <= 1e-15)
    assert np.all(ratios > 0)
    k = np.exp(-np.log(4) ** 2 / (2 * 0.5**2))
    assert abs(noise_ratio_numeric(4, 0.5) - ((1 - k) / (1 + k)) ** 2) < 1e-12


def test_smeared_cfi_zero_width_is_noiseless():
    energies, p, dp = optimal_level_distribution(2)
    assert abs(smeared_cfi(energies, p, dp, 0.0).f_c - fisher_from_distribution(p, dp).f_c) < 1e-15


def test_fdn_readings():
    clean = np.log(4) ** 2 / 4
    reciprocal = fdn_analytic(4, 1.0, 0.5, FdnReading.RECIPROCAL)
    assert reciprocal.log_y < 0
    assert abs(reciprocal.coefficient / clean - 0.995) < 0.002
    printed = fdn_analytic(4, 1.0, 0.5)
    assert printed.log_y > 0
    assert printed.coefficient / clean < 1e-3
    assert abs(fdn_analytic(4, 2.0, 1.0, "reciprocal").value - fdn_analytic(4, 2.0, 1.0, "reciprocal").coefficient / 4.0) < 1e-15
    # large T / sigma stays finite in log space
    assert np.isfinite(fdn_analytic(10, 1.0, 0.01).coefficient)
    check_exception_raised(lambda: fdn_analytic(1, 1.0, 0.5), ValueError)


def test_noise_report():
    report = noise_report([2, 4, 10], [0.05, 0.1, 0.3, 0.5])
    assert list(report.columns) == ["m", "sigma_over_T", "numeric_ratio", "printed_ratio", "reciprocal_ratio", "reciprocal_abs_dev"]
    assert len(report) == 12
    small = report[(report["sigma_over_T"] <= 0.3) & (report["m"] >= 4)]
    assert np.all(np.abs(small["reciprocal_ratio"] / small["numeric_ratio"] - 1.0) < 0.05)
    at_half = report[(report["m"] == 4) & (report["sigma_over_T"] == 0.5)].iloc[0]
    assert abs(at_half["numeric_ratio"] - 0.918) < 0.001
