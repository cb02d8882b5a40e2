"""Desk-scale reproduction checks. Run with `pytest tests/integration -m slow`."""
import numpy as np
import pytest

from critherm.design import BaselineKind, baseline_peak
from critherm.harness.figures import reproduce_figure
from critherm.harness.scaling_sweep import measure_point, measure_scaling_curves, collapse_curves
from critherm.harness.sweep import run_sweep
from critherm.harness.sweep_config import parse_sweep_config
from critherm.models import ModelKind, ModelSpec, build_model, build_observable
from critherm.models.spin1 import build_spin1_full_oracle, build_spin1_sector, zero_magnetization_block
from critherm.scaling import Quantity, gtilde
from critherm.spectral import eig_hermitian, group_degenerate, locate_critical_point
from critherm.thermo import cfi_observable, qfi_temperature, two_level_qfi

pytestmark = pytest.mark.slow

SPIN1_GRID = np.linspace(-2.4, -1.5, 181)


def _hierarchy_holds(table, observables):
    f_q = table.column("f_q")
    atol = 1e-8 * np.nanmax(f_q)
    for label in observables:
        f_c = table.column(f"f_c_{label}")
        epf_info = 1.0 / table.column(f"epf_var_{label}")
        assert np.all(f_c <= f_q * (1 + 1e-9) + atol)
        assert np.all(epf_info <= f_c * (1 + 1e-9) + atol)


@pytest.mark.parametrize("N", [2, 4, 6, 8])
def test_sector_spectra_match_oracle(N):
    sector = build_spin1_sector(N)
    block = zero_magnetization_block(build_spin1_full_oracle(N))
    for q in (-3.0, 0.0, 3.0):
        assert np.allclose(np.linalg.eigvalsh(sector.at(q)), np.linalg.eigvalsh(block.at(q)), atol=1e-10)


@pytest.mark.parametrize(
    "spec,lambdas,temps",
    [
        (ModelSpec.spin1(100), np.linspace(-2.5, -1.5, 5), np.linspace(0.2, 2.0, 5)),
        (ModelSpec.xxz(6), np.linspace(-0.5, 0.5, 5), np.linspace(0.3, 2.0, 5)),
    ],
)
def test_energy_readout_saturates_qfi(spec, lambdas, temps):
    model = build_model(spec)
    for lam in lambdas:
        spectrum = eig_hermitian(model.at(lam))
        energy = build_observable(spec, "Energy", lam=lam)
        for T in temps:
            f_c = cfi_observable(spectrum, energy, T, floor=0.0).f_c
            assert abs(f_c / qfi_temperature(spectrum, T) - 1.0) < 1e-10


def test_spin1_surface_peak():
    raw = {
        "model": {"kind": "Spin1SMA", "N": 200},
        "sweep": {
            "lambda": [-1.869],
            "temperature": {"mode": "ratio_min", "values": {"start": 0.1, "stop": 0.5, "num": 81}},
            "critical_grid": {"start": -2.2, "stop": -1.5, "num": 141},
        },
    }
    table = run_sweep(parse_sweep_config(raw))
    assert abs(table.metadata["lambda_c"] + 1.869) < 0.005
    peak = table.column("T_over_delta_min")[np.argmax(table.column("f_q"))]
    assert abs(peak - 0.26) < 0.03


def test_spin1_collapses():
    curves = measure_scaling_curves(ModelKind.SPIN1_SMA, [100, 200, 400], 0.17, points=21, critical_grid=SPIN1_GRID, threads=4)
    collapses = collapse_curves(curves, ModelKind.SPIN1_SMA)
    for quantity in (Quantity.GAP, Quantity.QFI, Quantity.SNR):
        assert collapses[quantity].residual < 0.05, quantity

    # collapsed SNR at the critical point against the two-level closed form
    snr_200 = next(c for c in curves[Quantity.SNR] if c.size == 200)
    assert abs(snr_200.values[10] / (0.17 * np.sqrt(gtilde(0.17))) - 1.0) < 0.15


def test_spin1_qfi_size_scaling():
    f_q = {}
    for N in (100, 200, 400):
        model = build_model(ModelSpec.spin1(N))
        lambda_c = locate_critical_point(model, SPIN1_GRID, threads=4).lambda_c
        point = measure_point(model, lambda_c, 0.0, 0.24)
        f_q[N] = point.qfi / point.gap**2
    for small, large in ((100, 200), (200, 400)):
        expected = (large / small) ** (2.0 / 3.0)
        assert abs(f_q[large] / f_q[small] / expected - 1.0) < 0.1


def test_xxz_gap_scales_inversely_with_size():
    curves = measure_scaling_curves(ModelKind.XXZ_CHAIN, [4, 6, 8], 0.17, points=21, quantities=[Quantity.GAP])[Quantity.GAP]
    scaled = np.array([c.size * c.values[10] for c in curves])
    assert np.all(np.abs(scaled / scaled.mean() - 1.0) < 0.1)


def test_xxz_collapses():
    curves = measure_scaling_curves(ModelKind.XXZ_CHAIN, [4, 6, 8], 0.17, points=21)
    collapses = collapse_curves(curves, ModelKind.XXZ_CHAIN)
    for quantity in (Quantity.GAP, Quantity.QFI, Quantity.SNR):
        assert collapses[quantity].residual < 0.05, quantity


@pytest.mark.parametrize("M", [4, 6, 8, 10])
def test_xxz_critical_qfi_matches_degenerate_two_level_form(M):
    model = build_model(ModelSpec.xxz(M))
    spectrum = eig_hermitian(model.at(0.0))
    grouping = group_degenerate(spectrum, tol=1e-8)
    assert grouping.multiplicities[:2] == (1, 2)
    point = measure_point(model, 0.0, 0.0, 0.17)
    expected = point.gap**2 * two_level_qfi(point.gap, 0.17 * point.gap, 1, 2)
    assert abs(point.qfi / expected - 1.0) < 0.15


def test_xxz_qfi_grows_as_size_squared():
    f_q = {}
    for M in (4, 6, 8):
        point = measure_point(build_model(ModelSpec.xxz(M)), 0.0, 0.0, 0.17)
        f_q[M] = point.qfi / point.gap**2
    for small, large in ((4, 6), (6, 8), (4, 8)):
        assert abs(f_q[large] / f_q[small] / (large / small) ** 2 - 1.0) < 0.1


def test_fig3_hierarchy_and_enhancement():
    tables = reproduce_figure("fig3", threads=2)
    sensitivity = tables["fig3_sensitivity"]
    _hierarchy_holds(sensitivity, ("Jperp2", "N0"))
    data = sensitivity.data
    for q in (-1.869, -1.8):
        peak = data.loc[np.isclose(data["lambda"], q), "f_q"].max()
        _, f_inf = baseline_peak(BaselineKind.SPIN1, q)
        assert peak > f_inf
    assert len(tables["fig3_baseline"]) == 2 * 160


def test_fig4_observables_at_criticality():
    sensitivity = reproduce_figure("fig4")["fig4_sensitivity"]
    _hierarchy_holds(sensitivity, ("Sx2", "Sz2"))
    data = sensitivity.data[np.isclose(sensitivity.data["lambda"], 0.0)]
    f_q = data["f_q"].to_numpy()
    usable = f_q > 1e-6 * f_q.max()
    ratio_z = data["f_c_Sz2"].to_numpy()[usable] / f_q[usable]
    assert ratio_z.max() >= 0.95

    # the first excited manifold puts half its weight on Sx2 outcomes shared with the ground state
    gap = data["delta_1"].iloc[0]
    cold = usable & (data["T"].to_numpy() <= 0.1 * gap) & (data["T"].to_numpy() >= 0.05 * gap)
    ratio_x = data["f_c_Sx2"].to_numpy()[cold] / f_q[cold]
    assert len(ratio_x) > 0
    assert np.all((ratio_x > 0.4) & (ratio_x < 0.6))


def test_fig5_noise():
    report = reproduce_figure("fig5")["fig5_noise"].data
    m4 = report[report["m"] == 4].sort_values("sigma_over_T")
    numeric = m4["numeric_ratio"].to_numpy()
    assert np.all(np.diff(numeric) <= 1e-12)
    assert numeric[0] > 0.99
    assert np.all(report["printed_ratio"].notna())
