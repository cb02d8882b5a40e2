"""
Closed-form thermometer analytics: the optimal level structure, the non-interacting baseline, and the loss of
information under Gaussian detection noise.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import bisect

from critherm.exceptions import InvalidModelException, InvalidTemperatureException
from critherm.thermo import ClassicalFisher, fisher_from_distribution
from critherm.utils import logger
from critherm.utils.optimize import golden_section_maximize


@dataclass(frozen=True)
class OptimalDesign:
    """One ground state and m degenerate excited states at Delta_max = x_star T maximise F_Q = chi_max / T^2."""

    m: int
    x_star: float
    chi_max: float
    residual: float

    def delta_max(self, T: float) -> float:
        return self.x_star * T

    def f_max(self, T: float) -> float:
        return self.chi_max / T**2


class BaselineKind(str, Enum):
    GENERIC = "generic"
    SPIN1 = "spin1"
    XXZ = "xxz"


class FdnReading(str, Enum):
    PRINTED = "printed"  # log y = +(T log m / sigma)^2
    RECIPROCAL = "reciprocal"  # log y = -(T log m / sigma)^2


@dataclass(frozen=True)
class NoiseModel:
    sigma: float
    outcome_grid: np.ndarray

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"Detection noise width must be non-negative, got sigma = {self.sigma}")

    def kernel(self) -> np.ndarray:
        return smearing_kernel(self.outcome_grid, self.sigma)


@dataclass(frozen=True)
class FdnResult:
    coefficient: float  # F_dn T^2
    value: float
    log_y: float


def _gap_equation(x: float, m: float) -> float:
    # log of e^x (x - 2) / (x + 2) - log m, increasing for x > 2
    return x + np.log(x - 2.0) - np.log(x + 2.0) - np.log(m)


def equal_gap_coefficient(x, m: float):
    x = np.asarray(x, dtype=float)
    return m * x**2 * np.exp(-x) / (1.0 + m * np.exp(-x)) ** 2


def optimal_gap(m: float) -> OptimalDesign:
    if m < 1:
        raise ValueError(f"Need at least one excited state, got m = {m}")
    lo, hi = 2.0 + 1e-15, 2.0 + np.log(m) + 20.0
    x_star = bisect(_gap_equation, lo, hi, args=(m,), xtol=1e-12, maxiter=500)
    residual = abs(np.exp(x_star) * (x_star - 2.0) / (x_star + 2.0) - m)
    chi = float(equal_gap_coefficient(x_star, m))
    logger.fs.debug(f"[design] optimal gap for m = {m}: x* = {x_star:.12f}, chi_max = {chi:.6f}")
    return OptimalDesign(m=m, x_star=float(x_star), chi_max=chi, residual=float(residual))


def fisher_coefficient(scaled_gaps: Sequence[float]) -> float:
    """
    T^2 F_c of the energy measurement for a non-degenerate ground level and excited levels at Delta_alpha = scaled_gaps * T.

    Equals (sum_a D_a^2 e^-D_a + sum_{a < b} (D_a - D_b)^2 e^-(D_a + D_b)) / Z^2 with Z = 1 + sum_a e^-D_a.
    """
    d = np.asarray(scaled_gaps, dtype=float)
    w = np.exp(-d)
    z = 1.0 + w.sum()
    single = np.sum(d**2 * w)
    diff = d[:, None] - d[None, :]
    pairs = 0.5 * np.sum(diff**2 * w[:, None] * w[None, :])
    return float((single + pairs) / z**2)


def maximize_equal_gaps(m: int, tol: float = 1e-10) -> Tuple[float, float]:
    """Numerical maximum of fisher_coefficient over a common gap for m excited levels. Returns (x, T^2 F)."""
    return golden_section_maximize(lambda x: fisher_coefficient(np.full(m, x)), 1e-3, 2.0 + np.log(m) + 20.0, tol=tol)


def _inv_sinh_sq(u):
    """1 / sinh(u)^2 written to avoid overflow at large |u|."""
    u = np.abs(np.asarray(u, dtype=float))
    return 4.0 * np.exp(-2.0 * u) / np.expm1(-2.0 * u) ** 2


def baseline_qfi(kind: Union[BaselineKind, str], coupling: float, T):
    """
    F_Q of the non-interacting counterpart, an equally spaced ladder.

    generic: levels g n, F = (4 / g^2) (g / 2T)^4 sinh^-2(g / 2T), maximum 4.88 / g^2 at T = g / 3.83
    spin1:   F = (1 / q^2) (q / T)^4 sinh^-2(q / T), the generic ladder with g = 2 q
    xxz:     F = (4 / h^2) (h / 2T)^4 sinh^-2(h / 2T)
    """
    kind = BaselineKind(kind)
    if coupling == 0:
        raise InvalidModelException("The baseline is only defined for a nonzero coupling")
    T_arr = np.asarray(T, dtype=float)
    if np.any(T_arr <= 0) or not np.all(np.isfinite(T_arr)):
        raise InvalidTemperatureException(f"Temperature must be positive and finite, got T = {T}")
    g = 2.0 * coupling if kind == BaselineKind.SPIN1 else coupling
    u = g / (2.0 * T_arr)
    out = (4.0 / g**2) * u**4 * _inv_sinh_sq(u)
    return float(out) if out.ndim == 0 else out


def baseline_peak(kind: Union[BaselineKind, str], coupling: float, tol: float = 1e-10) -> Tuple[float, float]:
    """(T*, F_Q^inf): the maximum of baseline_qfi over temperature."""
    scale = abs(2.0 * coupling if BaselineKind(kind) == BaselineKind.SPIN1 else coupling)
    return golden_section_maximize(lambda t: baseline_qfi(kind, coupling, t), scale / 50.0, 5.0 * scale, tol=tol * scale)


def smearing_kernel(energies: Sequence[float], sigma: float) -> np.ndarray:
    """K[a, b] = exp(-(E_a - E_b)^2 / 2 sigma^2) / N_b, with columns normalised over the outcome grid."""
    e = np.asarray(energies, dtype=float)
    if sigma == 0:
        return np.eye(len(e))
    k = np.exp(-((e[:, None] - e[None, :]) ** 2) / (2.0 * sigma**2))
    return k / k.sum(axis=0, keepdims=True)


def smear_distribution(energies: Sequence[float], probabilities: Sequence[float], sigma: float) -> np.ndarray:
    if sigma < 0:
        raise ValueError(f"Detection noise width must be non-negative, got sigma = {sigma}")
    p = np.asarray(probabilities, dtype=float)
    if sigma == 0:
        return p.copy()
    return smearing_kernel(energies, sigma) @ p


def smeared_cfi(energies: Sequence[float], p: Sequence[float], dp: Sequence[float], sigma: float, floor: Optional[float] = None) -> ClassicalFisher:
    """CFI after smearing. The kernel does not depend on T, so dP/dT is the smeared dp/dT."""
    kernel = smearing_kernel(energies, sigma)
    return fisher_from_distribution(kernel @ np.asarray(p, dtype=float), kernel @ np.asarray(dp, dtype=float), floor)


def optimal_level_distribution(m: int, T: float = 1.0):
    """Grouped outcomes (0, T log m) of the optimal spectrum with their probabilities and T-derivatives."""
    if m < 2:
        raise ValueError(f"Need m >= 2 so that log m > 0, got m = {m}")
    gaps = np.array([0.0, T * np.log(m)])
    weights = np.array([1.0, m * np.exp(-gaps[1] / T)])
    p = weights / weights.sum()
    dp = p * (gaps - p @ gaps) / T**2
    return gaps, p, dp


def noise_ratio_numeric(m: int, sigma_over_t: float) -> float:
    """F_c with detection noise relative to the noiseless F_c on the optimal spectrum."""
    energies, p, dp = optimal_level_distribution(m)
    clean = fisher_from_distribution(p, dp).f_c
    return smeared_cfi(energies, p, dp, sigma_over_t).f_c / clean


def fdn_analytic(m: float, T: float, sigma: float, reading: Union[FdnReading, str] = FdnReading.PRINTED) -> FdnResult:
    """
    Closed form F_dn = m (1 - y)^2 log^2 m / (4 (1 + y + 2 m y)(m + 2 y + m y^(log^2 m))) / T^2 on the optimal spectrum.

    The printed relation log y = (T log m / sigma)^2 is the default reading; the reciprocal reading flips the sign of log y.
    Evaluated in log space since y spans many decades.
    """
    if m < 2 or sigma <= 0 or T <= 0:
        raise ValueError(f"fdn_analytic needs m >= 2, sigma > 0 and T > 0, got m = {m}, sigma = {sigma}, T = {T}")
    reading = FdnReading(reading)
    L = np.log(m)
    t = (T * L / sigma) ** 2
    log_y = t if reading == FdnReading.PRINTED else -t
    if log_y == 0:
        return FdnResult(coefficient=0.0, value=0.0, log_y=0.0)
    if log_y < 0:
        log_one_minus_y = np.log(-np.expm1(log_y))
    else:
        log_one_minus_y = log_y + np.log(-np.expm1(-log_y))
    log_num = np.log(m) + 2.0 * log_one_minus_y + 2.0 * np.log(L) - np.log(4.0)
    log_den1 = np.logaddexp(0.0, log_y + np.log(1.0 + 2.0 * m))
    log_den2 = np.logaddexp(np.logaddexp(np.log(m), np.log(2.0) + log_y), np.log(m) + L**2 * log_y)
    coefficient = float(np.exp(log_num - log_den1 - log_den2))
    return FdnResult(coefficient=coefficient, value=coefficient / T**2, log_y=float(log_y))


def noise_report(m_list: Iterable[int], sigma_over_t: Iterable[float]) -> pd.DataFrame:
    """Numeric smeared-CFI ratio next to both readings of the closed form, all relative to their noiseless limit (log m)^2 / 4."""
    rows = []
    for m in m_list:
        clean = np.log(m) ** 2 / 4.0
        for s in sigma_over_t:
            rows.append(
                {
                    "m": int(m),
                    "sigma_over_T": float(s),
                    "numeric_ratio": noise_ratio_numeric(m, s),
                    "printed_ratio": fdn_analytic(m, 1.0, s, FdnReading.PRINTED).coefficient / clean,
                    "reciprocal_ratio": fdn_analytic(m, 1.0, s, FdnReading.RECIPROCAL).coefficient / clean,
                }
            )
    report = pd.DataFrame(rows)
    report["reciprocal_abs_dev"] = (report["reciprocal_ratio"] - report["numeric_ratio"]).abs()
    return report
