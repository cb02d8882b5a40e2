import threading
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from critherm.config_paths import critherm_config
from critherm.harness.sweep_config import SweepConfig, TemperatureMode
from critherm.harness.table import ResultTable, fisher_units
from critherm.models import ObservableLabel, build_model, build_observable
from critherm.models.base import ObservableMatrix, ParamHamiltonian, frozen_array
from critherm.spectral import CriticalPoint, Spectrum, eig_hermitian, gap_curve, locate_critical_point
from critherm.thermo import ProjectedObservable, evaluate_point, project_observable
from critherm.utils import logger
from critherm.utils.fn import do_parallel
from critherm.utils.timer import Timer


class DiagonalizationCounter:
    """Counts full diagonalizations done by a sweep; shared across worker threads."""

    def __init__(self):
        self._lock = threading.Lock()
        self.count = 0

    def increment(self):
        with self._lock:
            self.count += 1


def sweep_columns(observables, levels: int) -> List[str]:
    cols = ["lambda", "T", "T_over_delta_min", "T_over_delta_g", "f_q", "snr"]
    for label in observables:
        cols += [f"f_c_{label}", f"epf_var_{label}"]
    cols += [f"delta_{n}" for n in range(1, levels + 1)]
    return cols + ["flag"]


class SweepRunner:
    """Evaluates F_Q, SNR and the per-observable sensitivities over a (lambda, T) grid, diagonalizing once per lambda."""

    def __init__(self, config: SweepConfig, threads: Optional[int] = None, size_cap: Optional[int] = None):
        self.config = config
        self.threads = threads or critherm_config.get_flag("threads")
        self.size_cap = size_cap
        self.model: ParamHamiltonian = build_model(config.model, size_cap=size_cap)
        self.counter = DiagonalizationCounter()
        self.critical_point: Optional[CriticalPoint] = None
        self._fixed_observables: Dict[str, ObservableMatrix] = {
            label: build_observable(config.model, label, size_cap=size_cap)
            for label in config.observables
            if label != ObservableLabel.ENERGY.value
        }
        # lambda-independent observables are diagonalized once per sweep
        self._observable_spectra: Dict[str, Spectrum] = {label: eig_hermitian(obs.matrix) for label, obs in self._fixed_observables.items()}

    def _project_all(self, spectrum: Spectrum, lam: float) -> List[ProjectedObservable]:
        out = []
        for label in self.config.observables:
            if label == ObservableLabel.ENERGY.value:
                energy = ObservableMatrix(matrix=frozen_array(self.model.at(lam)), label=ObservableLabel.ENERGY)
                out.append(project_observable(spectrum, energy))
            else:
                out.append(project_observable(spectrum, self._fixed_observables[label], obs_spectrum=self._observable_spectra[label]))
        return out

    def resolve_delta_min(self) -> Optional[float]:
        if self.config.temperature.mode != TemperatureMode.RATIO_MIN:
            return None
        grid = self.config.critical_grid if self.config.critical_grid is not None else self.config.lambda_grid
        self.critical_point = locate_critical_point(self.model, sorted(grid), threads=self.threads)
        return self.critical_point.delta_min

    def _empty_row(self, lam: float, T: float, flag: str) -> Dict[str, Any]:
        row = {col: np.nan for col in sweep_columns(self.config.observables, self.config.levels)}
        row.update({"lambda": lam, "T": T, "flag": flag})
        return row

    def run_lambda(self, lam: float, delta_min: Optional[float]) -> List[Dict[str, Any]]:
        temps = self.config.temperature
        try:
            spectrum = eig_hermitian(self.model.at(lam))
            self.counter.increment()
            projected = self._project_all(spectrum, lam)
        except Exception as e:
            logger.fs.warning(f"[sweep] lambda = {lam}: {type(e).__name__}: {e}")
            return [self._empty_row(lam, np.nan, f"{type(e).__name__}: {e}") for _ in temps.values]

        gap = spectrum.gap
        low_gaps = spectrum.low_gaps(self.config.levels)
        rows = []
        for value in temps.values:
            if temps.mode == TemperatureMode.ABSOLUTE:
                T = value
            elif temps.mode == TemperatureMode.RATIO_MIN:
                T = value * delta_min
            else:
                T = value * gap
            try:
                point = evaluate_point(spectrum, lam, T, projected)
            except Exception as e:
                logger.fs.warning(f"[sweep] lambda = {lam}, T = {T}: {type(e).__name__}: {e}")
                rows.append(self._empty_row(lam, T, f"{type(e).__name__}: {e}"))
                continue
            row = point.as_dict()
            for label in self.config.observables:
                # an insensitive mean-value readout has unbounded variance
                if row[f"epf_var_{label}"] is None:
                    row[f"epf_var_{label}"] = np.inf
            row["T_over_delta_min"] = T / delta_min if delta_min else np.nan
            row["T_over_delta_g"] = T / gap if gap > 0 else np.nan
            for n, d in enumerate(low_gaps, start=1):
                row[f"delta_{n}"] = d
            row["flag"] = ""
            rows.append(row)
        return rows

    def run(self) -> ResultTable:
        with Timer(f"sweep over {len(self.config.lambda_grid)} lambda points") as t:
            delta_min = self.resolve_delta_min()
            per_lambda = do_parallel(
                lambda lam: self.run_lambda(lam, delta_min),
                self.config.lambda_grid,
                n=self.threads,
                desc="Sweeping",
                return_args=False,
                spinner=self.threads > 1,
            )
        columns = sweep_columns(self.config.observables, self.config.levels)
        data = pd.DataFrame([row for rows in per_lambda for row in rows], columns=columns)
        if delta_min is None and len(data) and np.any(np.isfinite(data["delta_1"])):
            # without a located minimum, Delta_min is the smallest gap seen on the grid
            data["T_over_delta_min"] = data["T"] / np.nanmin(data["delta_1"].to_numpy())
        spec = self.config.model
        metadata = {
            "name": "sweep",
            "model": spec.as_dict(),
            "control": spec.control_symbol,
            "units": fisher_units(spec.energy_unit),
            "temperature_mode": self.config.temperature.mode.value,
            "config_hash": self.config.config_hash(),
            "n_diagonalizations": self.counter.count,
            "n_failed": int((data["flag"] != "").sum()),
        }
        if self.critical_point is not None:
            metadata["lambda_c"] = self.critical_point.lambda_c
            metadata["delta_min"] = self.critical_point.delta_min
        logger.fs.info(f"[sweep] {len(data)} rows, {self.counter.count} diagonalizations in {t.elapsed:.2f}s")
        return ResultTable(data=data, metadata=metadata)


def run_sweep(config: SweepConfig, threads: Optional[int] = None, size_cap: Optional[int] = None) -> ResultTable:
    return SweepRunner(config, threads=threads, size_cap=size_cap).run()


def run_spectrum(spec, lambda_grid, levels: int = 5, threads: Optional[int] = None, size_cap: Optional[int] = None) -> ResultTable:
    """Lowest gaps Delta_1 .. Delta_levels over a control grid, from eigenvalues only."""
    threads = threads or critherm_config.get_flag("threads")
    model = build_model(spec, size_cap=size_cap)
    grid = np.asarray(lambda_grid, dtype=float)
    with Timer(f"spectrum over {len(grid)} points"):
        gaps = gap_curve(model, grid, levels=levels, threads=threads)
    data = pd.DataFrame({"lambda": grid, **{f"delta_{n}": gaps[:, n - 1] for n in range(1, levels + 1)}})
    metadata = {"name": "spectrum", "model": spec.as_dict(), "control": spec.control_symbol, "units": fisher_units(spec.energy_unit)}
    return ResultTable(data=data, metadata=metadata)
