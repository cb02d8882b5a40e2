from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from critherm.exceptions import InvalidTemperatureException, MixedTemperatureRatioException, NonOverlappingCurvesException
from critherm.utils import logger
from critherm.utils.optimize import golden_section_maximize

COLLAPSE_GRID_POINTS = 201


@dataclass(frozen=True)
class ScalingExponents:
    z: float
    nu: float
    d: float

    def __post_init__(self):
        if min(self.z, self.nu, self.d) <= 0:
            raise ValueError(f"Scaling exponents must be positive, got z = {self.z}, nu = {self.nu}, d = {self.d}")

    @property
    def z_over_d(self) -> float:
        return self.z / self.d

    @property
    def inv_nu_d(self) -> float:
        return 1.0 / (self.nu * self.d)


# effective pair for the all-connected condensate: Delta_g ~ N^(-1/3), x = eps N^(2/3)
SPIN1_EXPONENTS = ScalingExponents(z=1.0, nu=0.5, d=3.0)
# XX chain (zeta_z = 0): Delta_g ~ M^(-1), x = eps M^(7/4)
XXZ_EXPONENTS = ScalingExponents(z=1.0, nu=4.0 / 7.0, d=1.0)


class Quantity(str, Enum):
    GAP = "gap"
    QFI = "qfi"  # Delta_g^2 F_Q
    SNR = "snr"


class Variant(str, Enum):
    SPIN1 = "Spin1"
    XXZ = "XXZ"


class Abscissa(str, Enum):
    SCALED_EPSILON = "scaled_epsilon"  # sgn(eps) |eps| size^(1/(nu d))
    SCALED_SIZE = "scaled_size"  # sgn(eps) size |eps|^(nu d)


def default_exponents(variant: Union[Variant, str]) -> ScalingExponents:
    return SPIN1_EXPONENTS if Variant(variant) == Variant.SPIN1 else XXZ_EXPONENTS


def default_abscissa(variant: Union[Variant, str], quantity: Union[Quantity, str]) -> Abscissa:
    if Variant(variant) == Variant.XXZ and Quantity(quantity) != Quantity.GAP:
        return Abscissa.SCALED_SIZE
    return Abscissa.SCALED_EPSILON


@dataclass(frozen=True, eq=False)
class ScalingCurve:
    size: int
    epsilon: np.ndarray
    values: np.ndarray
    quantity: Quantity
    t_ratio: Optional[float] = None
    lambda_c: float = 0.0

    def __post_init__(self):
        eps = np.asarray(self.epsilon, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if eps.shape != vals.shape or eps.ndim != 1:
            raise ValueError(f"Curve for size {self.size}: epsilon {eps.shape} and values {vals.shape} must be matching 1-d arrays")
        if np.any(np.diff(eps) <= 0):
            raise ValueError(f"Curve for size {self.size}: epsilon must be strictly increasing")
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"Curve for size {self.size}: values must be finite")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True, eq=False)
class RescaledCurve:
    size: int
    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True, eq=False)
class CollapseResult:
    rescaled: Tuple[RescaledCurve, ...]
    residual: float
    grid_range: Tuple[float, float]

    def to_frame(self) -> pd.DataFrame:
        frames = [pd.DataFrame({"size": c.size, "x": c.x, "y": c.y}) for c in self.rescaled]
        return pd.concat(frames, ignore_index=True)


def scaling_variable(
    epsilon: np.ndarray, size: float, exponents: ScalingExponents, abscissa: Union[Abscissa, str] = Abscissa.SCALED_EPSILON
) -> np.ndarray:
    epsilon = np.asarray(epsilon, dtype=float)
    if Abscissa(abscissa) == Abscissa.SCALED_EPSILON:
        return epsilon * size**exponents.inv_nu_d
    return np.sign(epsilon) * size * np.abs(epsilon) ** (exponents.nu * exponents.d)


def collapse_residual(curves: Sequence[RescaledCurve], n_points: int = COLLAPSE_GRID_POINTS) -> Tuple[float, Tuple[float, float]]:
    """
    RMS over a common x grid of std(y) / mean(|y|) across curves.

    The grid spans only the window where every curve is defined; a single curve collapses trivially.
    """
    if len(curves) == 0:
        raise ValueError("No curves to collapse")
    lo = max(float(np.min(c.x)) for c in curves)
    hi = min(float(np.max(c.x)) for c in curves)
    if len(curves) == 1:
        return 0.0, (lo, hi)
    if lo >= hi:
        ranges = [(c.size, float(np.min(c.x)), float(np.max(c.x))) for c in curves]
        raise NonOverlappingCurvesException(f"Rescaled curves share no x window (max of minima {lo:.4g} >= min of maxima {hi:.4g})", ranges)
    grid = np.linspace(lo, hi, n_points)
    ys = np.array([np.interp(grid, c.x, c.y) for c in curves])
    mean_abs = np.mean(np.abs(ys), axis=0)
    spread = np.std(ys, axis=0)
    rel = np.divide(spread, mean_abs, out=np.zeros_like(spread), where=mean_abs > 0)
    return float(np.sqrt(np.mean(rel**2))), (lo, hi)


def _rescale(
    curves: Iterable[ScalingCurve],
    exponents: ScalingExponents,
    abscissa: Abscissa,
    vertical_power: float,
) -> CollapseResult:
    curves = list(curves)
    if len(curves) == 0:
        raise ValueError("No curves to rescale")
    rescaled = []
    for c in sorted(curves, key=lambda c: c.size):
        x = scaling_variable(c.epsilon, c.size, exponents, abscissa)
        rescaled.append(RescaledCurve(size=c.size, x=x, y=c.values * c.size**vertical_power))
    residual, window = collapse_residual(rescaled)
    logger.fs.debug(f"[scaling] {len(rescaled)} curves, sizes {[c.size for c in rescaled]}: residual {residual:.3e} on {window}")
    return CollapseResult(rescaled=tuple(rescaled), residual=residual, grid_range=window)


def _check_same_ratio(curves: Sequence[ScalingCurve]):
    ratios = {c.t_ratio for c in curves}
    if len(ratios) > 1 or None in ratios:
        raise MixedTemperatureRatioException(f"All curves must share one T/Delta_g ratio, got {sorted(str(r) for r in ratios)}")


def rescale_gap(
    curves: Iterable[ScalingCurve], exponents: ScalingExponents, variant: Union[Variant, str], abscissa: Optional[Abscissa] = None
) -> CollapseResult:
    """Delta_g size^(z/d) against the scaling variable."""
    abscissa = Abscissa(abscissa) if abscissa else default_abscissa(variant, Quantity.GAP)
    return _rescale(curves, exponents, abscissa, vertical_power=exponents.z_over_d)


def rescale_qfi(
    curves: Iterable[ScalingCurve], exponents: ScalingExponents, variant: Union[Variant, str], abscissa: Optional[Abscissa] = None
) -> CollapseResult:
    """Curves hold Delta_g^2 F_Q at one fixed T/Delta_g, so no vertical size factor is applied."""
    curves = list(curves)
    _check_same_ratio(curves)
    abscissa = Abscissa(abscissa) if abscissa else default_abscissa(variant, Quantity.QFI)
    return _rescale(curves, exponents, abscissa, vertical_power=0.0)


def rescale_snr(
    curves: Iterable[ScalingCurve], exponents: ScalingExponents, variant: Union[Variant, str], abscissa: Optional[Abscissa] = None
) -> CollapseResult:
    """SNR curves collapse without any vertical rescaling."""
    curves = list(curves)
    _check_same_ratio(curves)
    abscissa = Abscissa(abscissa) if abscissa else default_abscissa(variant, Quantity.SNR)
    return _rescale(curves, exponents, abscissa, vertical_power=0.0)


def expected_qfi_ratio(size_a: float, size_b: float, exponents: ScalingExponents) -> float:
    """F_Q(size_b) / F_Q(size_a) at fixed scaling variable and T/Delta_g, from Delta_g ~ size^(-z/d)."""
    return (size_b / size_a) ** (2.0 * exponents.z_over_d)


def gtilde(y):
    """Two-level scaling function (1/y)^4 / (4 cosh^2(1/(2y))) with y = T / Delta_g."""
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        raise InvalidTemperatureException(f"T / Delta_g must be positive and finite, got {y}")
    x = 1.0 / y
    # x**4 alone overflows for tiny y
    out = np.exp(4.0 * np.log(x) - x) / (1.0 + np.exp(-x)) ** 2
    return float(out) if out.ndim == 0 else out


def gtilde_peak(lo: float = 0.01, hi: float = 10.0, tol: float = 1e-8) -> Tuple[float, float]:
    return golden_section_maximize(gtilde, lo, hi, tol=tol)
