from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from critherm.config_paths import critherm_config
from critherm.harness.table import ResultTable
from critherm.models import ModelKind, ModelSpec, build_model
from critherm.scaling import (
    Abscissa,
    CollapseResult,
    Quantity,
    ScalingCurve,
    ScalingExponents,
    Variant,
    default_abscissa,
    default_exponents,
    rescale_gap,
    rescale_qfi,
    rescale_snr,
)
from critherm.spectral import eig_hermitian, locate_critical_point
from critherm.thermo import qfi_temperature, snr
from critherm.utils import logger
from critherm.utils.fn import do_parallel
from critherm.utils.timer import Timer

# gap minimum search window for the spin-1 critical point near q = -2
DEFAULT_SPIN1_CRITICAL_GRID = tuple(np.linspace(-2.4, -1.5, 181))


@dataclass(frozen=True)
class ScalingPoint:
    epsilon: float
    gap: float
    qfi: float  # Delta_g^2 F_Q
    snr: float


def variant_for(kind: ModelKind) -> Variant:
    return Variant.SPIN1 if kind == ModelKind.SPIN1_SMA else Variant.XXZ


def epsilon_grid(x_window: Tuple[float, float], points: int, size: int, exponents: ScalingExponents, abscissa: Abscissa) -> np.ndarray:
    """Distances from the critical point whose scaling variable spans x_window uniformly."""
    x = np.linspace(x_window[0], x_window[1], points)
    if abscissa == Abscissa.SCALED_EPSILON:
        return x / size**exponents.inv_nu_d
    return np.sign(x) * (np.abs(x) / size) ** (1.0 / (exponents.nu * exponents.d))


def measure_point(model, lambda_c: float, eps: float, t_ratio: float) -> ScalingPoint:
    spectrum = eig_hermitian(model.at(lambda_c + eps))
    gap = spectrum.gap
    T = t_ratio * gap
    f_q = qfi_temperature(spectrum, T)
    return ScalingPoint(epsilon=float(eps), gap=gap, qfi=gap**2 * f_q, snr=snr(f_q, T))


def critical_point_for(spec: ModelSpec, critical_grid: Optional[Sequence[float]], threads: int, size_cap: Optional[int]) -> float:
    if spec.kind == ModelKind.XXZ_CHAIN:
        return 0.0
    model = build_model(spec, size_cap=size_cap)
    grid = critical_grid if critical_grid is not None else DEFAULT_SPIN1_CRITICAL_GRID
    return locate_critical_point(model, grid, threads=threads).lambda_c


def measure_scaling_curves(
    kind: ModelKind,
    sizes: Sequence[int],
    t_ratio: float,
    x_window: Tuple[float, float] = (-2.0, 2.0),
    points: int = 41,
    quantities: Sequence[Quantity] = (Quantity.GAP, Quantity.QFI, Quantity.SNR),
    exponents: Optional[ScalingExponents] = None,
    critical_grid: Optional[Sequence[float]] = None,
    zeta_z: float = 0.0,
    threads: Optional[int] = None,
    size_cap: Optional[int] = None,
) -> Dict[Quantity, List[ScalingCurve]]:
    """
    Sample Delta_g, Delta_g^2 F_Q and the SNR at T = t_ratio * Delta_g(lambda) around each size's critical point.

    The epsilon grid of each size covers the same window of the scaling variable. Spin-1 epsilon is measured from
    the size-dependent gap minimum, XXZ epsilon from h_x = 0.
    """
    kind = ModelKind(kind)
    variant = variant_for(kind)
    exponents = exponents or default_exponents(variant)
    threads = threads or critherm_config.get_flag("threads")
    quantities = [Quantity(q) for q in quantities]
    curves: Dict[Quantity, List[ScalingCurve]] = {q: [] for q in quantities}

    for size in sizes:
        spec = ModelSpec.spin1(size) if kind == ModelKind.SPIN1_SMA else ModelSpec.xxz(size, zeta_z)
        model = build_model(spec, size_cap=size_cap)
        lambda_c = critical_point_for(spec, critical_grid, threads, size_cap)
        by_abscissa: Dict[Abscissa, List[ScalingPoint]] = {}
        for quantity in quantities:
            abscissa = default_abscissa(variant, quantity)
            if abscissa not in by_abscissa:
                eps = epsilon_grid(x_window, points, size, exponents, abscissa)
                by_abscissa[abscissa] = do_parallel(lambda e: measure_point(model, lambda_c, e, t_ratio), eps, n=threads, return_args=False)
            samples = by_abscissa[abscissa]
            curves[quantity].append(
                ScalingCurve(
                    size=size,
                    epsilon=np.array([s.epsilon for s in samples]),
                    values=np.array([getattr(s, quantity.value) for s in samples]),
                    quantity=quantity,
                    t_ratio=t_ratio,
                    lambda_c=lambda_c,
                )
            )
        logger.fs.debug(f"[scaling] {kind.value} size {size}: lambda_c = {lambda_c:.6f}")
    return curves


_RESCALE = {Quantity.GAP: rescale_gap, Quantity.QFI: rescale_qfi, Quantity.SNR: rescale_snr}


def collapse_curves(
    curves: Dict[Quantity, List[ScalingCurve]], kind: ModelKind, exponents: Optional[ScalingExponents] = None
) -> Dict[Quantity, CollapseResult]:
    variant = variant_for(ModelKind(kind))
    exponents = exponents or default_exponents(variant)
    return {q: _RESCALE[q](c, exponents, variant) for q, c in curves.items()}


def scaling_table(curves: Dict[Quantity, List[ScalingCurve]], collapses: Dict[Quantity, CollapseResult], kind: ModelKind) -> ResultTable:
    frames = []
    for quantity, collapse in collapses.items():
        raw = {c.size: c for c in curves[quantity]}
        for rescaled in collapse.rescaled:
            c = raw[rescaled.size]
            frames.append(
                pd.DataFrame(
                    {
                        "quantity": quantity.value,
                        "size": rescaled.size,
                        "lambda_c": c.lambda_c,
                        "epsilon": c.epsilon,
                        "value": c.values,
                        "x": rescaled.x,
                        "y": rescaled.y,
                    }
                )
            )
    data = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=["quantity", "size", "lambda_c", "epsilon", "value", "x", "y"])
    first = next(iter(curves.values()))[0] if curves else None
    metadata = {
        "name": "scaling",
        "kind": ModelKind(kind).value,
        "t_ratio": first.t_ratio if first else None,
        "residuals": {q.value: r.residual for q, r in collapses.items()},
        "windows": {q.value: list(r.grid_range) for q, r in collapses.items()},
    }
    return ResultTable(data=data, metadata=metadata)


def run_scaling(config, threads: Optional[int] = None, size_cap: Optional[int] = None) -> Tuple[ResultTable, Dict[Quantity, CollapseResult]]:
    """Scaling curves and collapses for the [scaling] section of a sweep config."""
    scaling = config.scaling
    with Timer("scaling sweep"):
        curves = measure_scaling_curves(
            config.model.kind,
            scaling.sizes,
            scaling.t_ratio,
            x_window=scaling.x_window,
            points=scaling.points,
            quantities=scaling.quantities,
            exponents=scaling.exponents,
            critical_grid=scaling.critical_grid,
            zeta_z=config.model.zeta_z,
            threads=threads,
            size_cap=size_cap,
        )
        collapses = collapse_curves(curves, config.model.kind, scaling.exponents)
    table = scaling_table(curves, collapses, config.model.kind)
    table.metadata["config_hash"] = config.config_hash()
    return table, collapses
