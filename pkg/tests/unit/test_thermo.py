import numpy as np
import pytest

from critherm import exceptions
from critherm.models import ModelSpec, ObservableMatrix, build_model, build_observable
from critherm.spectral import eig_hermitian, group_degenerate
from critherm.thermo import (
    cfi_observable,
    epf_sensitivity,
    evaluate_point,
    fisher_from_distribution,
    gibbs,
    outcome_distribution,
    project_observable,
    qfi_temperature,
    snr,
    two_level_qfi,
)
from tests.util import check_exception_raised, fd_energy_fisher, fd_mean, synthetic_spectrum


def test_gibbs_weights():
    ensemble = gibbs(synthetic_spectrum([1.0, 2.0, 2.0]), 0.5)
    assert abs(ensemble.weights.sum() - 1.0) < 1e-15
    assert abs(ensemble.weights[1] / ensemble.weights[0] - np.exp(-2.0)) < 1e-15
    assert not ensemble.ground_state_limit


def test_gibbs_underflow_is_ground_state():
    spectrum = synthetic_spectrum([0.0, 1.0, 3.0])
    ensemble = gibbs(spectrum, 1e-5)
    assert ensemble.ground_state_limit
    assert ensemble.weights[0] == 1.0
    assert qfi_temperature(spectrum, 1e-5) == 0.0


def test_temperature_validation():
    spectrum = synthetic_spectrum([0.0, 1.0])
    for T in [0.0, -1.0, np.inf, np.nan]:
        check_exception_raised(lambda: gibbs(spectrum, T), exceptions.InvalidTemperatureException)


def test_two_level_closed_form():
    spectrum = synthetic_spectrum([0.0, 0.7])
    for T in [0.05, 0.17, 1.0, 5.0]:
        assert abs(qfi_temperature(spectrum, T) / two_level_qfi(0.7, T) - 1.0) < 1e-12


def test_degenerate_two_level_closed_form():
    spectrum = synthetic_spectrum([0.0, 0.0, 1.3, 1.3, 1.3])
    assert abs(qfi_temperature(spectrum, 0.4) / two_level_qfi(1.3, 0.4, g0=2, g1=3) - 1.0) < 1e-12


@pytest.mark.parametrize("spec,lam", [(ModelSpec.spin1(40), -1.9), (ModelSpec.xxz(4), 0.3)])
def test_qfi_matches_finite_difference(spec, lam):
    spectrum = eig_hermitian(build_model(spec).at(lam))
    T = 2.0 * spectrum.gap
    assert abs(qfi_temperature(spectrum, T) / fd_energy_fisher(spectrum, T) - 1.0) < 1e-6


def test_snr():
    assert snr(4.0, 0.5) == 1.0
    assert snr(0.0, 0.5) == 0.0


def test_energy_measurement_is_optimal():
    spec = ModelSpec.spin1(20)
    spectrum = eig_hermitian(build_model(spec).at(-1.5))
    energy = build_observable(spec, "Energy", lam=-1.5)
    for T in [0.1, 0.3, 1.0]:
        f_c = cfi_observable(spectrum, energy, T, floor=0.0).f_c
        assert abs(f_c / qfi_temperature(spectrum, T) - 1.0) < 1e-10


def test_projection_reuses_across_temperatures():
    spec = ModelSpec.spin1(30)
    spectrum = eig_hermitian(build_model(spec).at(-1.8))
    obs = build_observable(spec, "N0")
    projected = project_observable(spectrum, obs)
    assert projected.n_outcomes == 16
    assert np.allclose(projected.weights.sum(axis=0), 1.0)
    for T in [0.05, 0.5]:
        assert cfi_observable(spectrum, projected, T).f_c == cfi_observable(spectrum, obs, T).f_c


def test_projection_groups_degenerate_outcomes():
    spec = ModelSpec.xxz(4)
    spectrum = eig_hermitian(build_model(spec).at(0.2))
    projected = project_observable(spectrum, build_observable(spec, "Sz2"))
    # Sz in {-2..2} gives Sz^2 in {0, 1, 4}
    assert np.allclose(projected.outcomes, [0.0, 1.0, 4.0])


def test_projection_dimension_mismatch():
    spectrum = synthetic_spectrum([0.0, 1.0, 2.0])
    check_exception_raised(
        lambda: project_observable(spectrum, ObservableMatrix.custom(np.eye(2))), exceptions.IncompatibleObservableException, "dimension"
    )


def test_fisher_from_distribution_floor():
    info = fisher_from_distribution(np.array([0.5, 0.5 - 1e-20, 1e-20]), np.array([1.0, -1.0, 0.0]), floor=1e-14)
    assert info.n_excluded == 1
    assert info.excluded_mass == 1e-20
    assert abs(info.f_c - 4.0) < 1e-12


def test_epf_matches_finite_difference():
    spec = ModelSpec.spin1(30)
    spectrum = eig_hermitian(build_model(spec).at(-1.8))
    obs = build_observable(spec, "Jperp2")
    T = 1.5 * spectrum.gap
    projected = project_observable(spectrum, obs)
    var = float(gibbs(spectrum, T).weights @ projected.diag_sq - (gibbs(spectrum, T).weights @ projected.diag) ** 2)
    expected = var / fd_mean(spectrum, obs.matrix, T) ** 2
    assert abs(epf_sensitivity(spectrum, obs, T) / expected - 1.0) < 1e-6


def test_epf_insensitive_readout():
    # the identity has no variance
    spectrum = synthetic_spectrum([0.0, 1.0, 2.0])
    assert epf_sensitivity(spectrum, ObservableMatrix.custom(np.eye(3)), 0.5) is None
    # a readout whose mean does not depend on T
    flat = ObservableMatrix.custom(np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]))
    assert epf_sensitivity(spectrum, flat, 0.5) is None


@pytest.mark.parametrize("c", [1.0, 3.0, 7.0, 1e3])
def test_epf_scaled_identity_is_insensitive(c):
    spectrum = synthetic_spectrum([0.0, 1.0, 2.0])
    obs = ObservableMatrix.custom(c * np.eye(3))
    assert epf_sensitivity(spectrum, obs, 0.5) is None
    point = evaluate_point(spectrum, 0.0, 0.5, [project_observable(spectrum, obs)])
    assert point.per_observable[obs.name].epf_var is None
    assert point.per_observable[obs.name].epf_fisher <= point.per_observable[obs.name].f_c + 1e-12


def test_epf_offset_readout_keeps_sensitivity():
    spectrum = synthetic_spectrum([0.0, 1.0, 2.0])
    base = np.diag([0.0, 1.0, 2.0])
    plain = epf_sensitivity(spectrum, ObservableMatrix.custom(base), 0.5)
    shifted = epf_sensitivity(spectrum, ObservableMatrix.custom(base + 50.0 * np.eye(3)), 0.5)
    assert plain is not None and shifted is not None
    assert abs(shifted / plain - 1.0) < 1e-8


def test_coarse_graining_never_increases_cfi():
    spec = ModelSpec.spin1(30)
    spectrum = eig_hermitian(build_model(spec).at(-1.8))
    projected = project_observable(spectrum, build_observable(spec, "N0"))
    for T in [0.05, 0.3, 1.5]:
        p, dp = outcome_distribution(projected, spectrum, gibbs(spectrum, T))
        fine = fisher_from_distribution(p, dp, floor=0.0).f_c
        for i in range(len(p) - 1):
            merged_p = np.concatenate([p[:i], [p[i] + p[i + 1]], p[i + 2 :]])
            merged_dp = np.concatenate([dp[:i], [dp[i] + dp[i + 1]], dp[i + 2 :]])
            assert fisher_from_distribution(merged_p, merged_dp, floor=0.0).f_c <= fine * (1 + 1e-12) + 1e-15


def test_low_temperature_approaches_two_level():
    # second gap at least twice the first
    spectrum = synthetic_spectrum([0.0, 1.0, 2.5, 3.1, 4.0])

    def deviation(ratio):
        T = ratio * spectrum.gap
        f_q = qfi_temperature(spectrum, T)
        return abs(f_q - two_level_qfi(spectrum.gap, T)) / f_q

    assert deviation(0.05) < deviation(0.1)
    assert deviation(0.05) < 1e-6


@pytest.mark.parametrize("spec,lam,labels", [(ModelSpec.spin1(40), -1.8, ["Jperp2", "N0"]), (ModelSpec.xxz(4), 0.5, ["Sx2", "Sz2"])])
def test_sensitivity_hierarchy(spec, lam, labels):
    spectrum = eig_hermitian(build_model(spec).at(lam))
    projected = [project_observable(spectrum, build_observable(spec, label)) for label in labels]
    for T in np.geomspace(0.05, 3.0, 25) * spectrum.gap:
        point = evaluate_point(spectrum, lam, T, projected, floor=0.0)
        for label in labels:
            sens = point.per_observable[label]
            assert sens.f_c <= point.f_q * (1 + 1e-9) + 1e-12
            assert sens.epf_fisher <= sens.f_c * (1 + 1e-8) + 1e-12


def test_sz2_reaches_qfi_at_low_temperature():
    spec = ModelSpec.xxz(4)
    spectrum = eig_hermitian(build_model(spec).at(0.0))
    assert group_degenerate(spectrum).multiplicities[:2] == (1, 2)
    T = 0.1 * spectrum.gap
    f_q = qfi_temperature(spectrum, T)
    assert cfi_observable(spectrum, build_observable(spec, "Sz2"), T).f_c / f_q >= 0.95
    ratio_x = cfi_observable(spectrum, build_observable(spec, "Sx2"), T).f_c / f_q
    assert 0.4 < ratio_x < 0.6


def test_evaluate_point_row():
    spec = ModelSpec.spin1(20)
    spectrum = eig_hermitian(build_model(spec).at(-1.8))
    projected = [project_observable(spectrum, build_observable(spec, "N0"))]
    row = evaluate_point(spectrum, -1.8, 0.2, projected).as_dict()
    assert set(row) == {"lambda", "T", "f_q", "snr", "f_c_N0", "epf_var_N0"}
    assert row["lambda"] == -1.8
