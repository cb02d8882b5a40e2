"""Datasets behind each figure panel, with grids and size lists taken from critherm/data/figures.toml."""
import functools
from enum import Enum
from importlib.resources import path
from typing import Any, Callable, Dict, Mapping, Optional

import numpy as np
import pandas as pd

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from critherm.design import BaselineKind, baseline_peak, baseline_qfi, noise_report
from critherm.exceptions import BadConfigException
from critherm.harness.scaling_sweep import collapse_curves, measure_scaling_curves, scaling_table
from critherm.harness.sweep import run_spectrum, run_sweep
from critherm.harness.sweep_config import parse_grid, parse_model_section, parse_scaling_section, parse_sweep_config
from critherm.harness.table import ResultTable
from critherm.utils import logger
from critherm.utils.timer import Timer


class FigureId(str, Enum):
    FIG1 = "fig1"
    FIG2 = "fig2"
    FIG3 = "fig3"
    FIG4 = "fig4"
    FIG5 = "fig5"


@functools.lru_cache(maxsize=None)
def load_figure_defaults() -> Dict[str, Any]:
    with path("critherm.data", "figures.toml") as p:
        with open(p, "rb") as f:
            return tomllib.load(f)


def _spectrum(section: Mapping[str, Any], threads: Optional[int], size_cap: Optional[int]) -> ResultTable:
    spec = parse_model_section(section["model"])
    grid = parse_grid(section["lambda"], "lambda")
    return run_spectrum(spec, grid, levels=int(section.get("levels", 5)), threads=threads, size_cap=size_cap)


def _scaling(section: Mapping[str, Any], threads: Optional[int], size_cap: Optional[int]) -> ResultTable:
    spec = parse_model_section(section["model"])
    scaling = parse_scaling_section(section["scaling"], spec)
    curves = measure_scaling_curves(
        spec.kind,
        scaling.sizes,
        scaling.t_ratio,
        x_window=scaling.x_window,
        points=scaling.points,
        quantities=scaling.quantities,
        exponents=scaling.exponents,
        critical_grid=scaling.critical_grid,
        zeta_z=spec.zeta_z,
        threads=threads,
        size_cap=size_cap,
    )
    return scaling_table(curves, collapse_curves(curves, spec.kind, scaling.exponents), spec.kind)


def _sweep(section: Mapping[str, Any], threads: Optional[int], size_cap: Optional[int]) -> ResultTable:
    return run_sweep(parse_sweep_config(section), threads=threads, size_cap=size_cap)


def _baseline(section: Mapping[str, Any], threads: Optional[int], size_cap: Optional[int]) -> ResultTable:
    kind = BaselineKind(section.get("kind", "generic"))
    temps = np.asarray(parse_grid(section["T"], "T", positive=True))
    frames, peaks = [], {}
    for coupling in section["couplings"]:
        t_star, f_inf = baseline_peak(kind, coupling)
        peaks[str(coupling)] = {"T_star": t_star, "f_q_inf": f_inf}
        frames.append(pd.DataFrame({"coupling": float(coupling), "T": temps, "f_q": baseline_qfi(kind, coupling, temps), "f_q_inf": f_inf}))
    return ResultTable(data=pd.concat(frames, ignore_index=True), metadata={"name": "baseline", "kind": kind.value, "peaks": peaks})


def _noise(section: Mapping[str, Any], threads: Optional[int], size_cap: Optional[int]) -> ResultTable:
    sigma = parse_grid(section["sigma_over_T"], "sigma_over_T", positive=True)
    report = noise_report([int(m) for m in section["m"]], sigma)
    return ResultTable(data=report, metadata={"name": "noise", "ground_truth": "numeric_ratio"})


_BUILDERS: Dict[str, Callable[[Mapping[str, Any], Optional[int], Optional[int]], ResultTable]] = {
    "spectrum": _spectrum,
    "surface": _sweep,
    "sensitivity": _sweep,
    "scaling": _scaling,
    "baseline": _baseline,
    "noise": _noise,
}


def reproduce_figure(
    fig_id, threads: Optional[int] = None, size_cap: Optional[int] = None, defaults: Optional[Mapping[str, Any]] = None
) -> Dict[str, ResultTable]:
    """All panel datasets of one figure, keyed "<fig>_<panel>"."""
    fig = FigureId(fig_id)
    defaults = defaults if defaults is not None else load_figure_defaults()
    if fig.value not in defaults:
        raise BadConfigException(f"no defaults for {fig.value}", key_path=fig.value)
    tables = {}
    for panel, section in defaults[fig.value].items():
        if panel not in _BUILDERS:
            raise BadConfigException(f"unknown panel type (expected one of {', '.join(sorted(_BUILDERS))})", key_path=f"{fig.value}.{panel}")
        with Timer(f"{fig.value} {panel}") as t:
            table = _BUILDERS[panel](section, threads, size_cap)
        table.metadata["name"] = f"{fig.value}_{panel}"
        table.metadata["figure"] = fig.value
        tables[table.metadata["name"]] = table
        logger.fs.info(f"[reproduce] {fig.value}_{panel}: {len(table)} rows in {t.elapsed:.2f}s")
    return tables
