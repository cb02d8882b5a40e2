from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Union

import numpy as np

from critherm.config_paths import critherm_config
from critherm.exceptions import IncompatibleObservableException, InvalidTemperatureException
from critherm.models.base import ObservableMatrix
from critherm.spectral import Spectrum, eig_hermitian, group_degenerate
from critherm.utils import logger

# relative size of Var(A) and Cov(A, H) below which a mean-value readout is treated as blind to T
EPF_COV_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class GibbsEnsemble:
    """Canonical weights p_n = exp(-Delta_n / T) / Z with energies measured from E_0."""

    temperature: float
    weights: np.ndarray
    partition: float
    ground_state_limit: bool = False

    @property
    def dim(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class ClassicalFisher:
    f_c: float
    n_outcomes: int
    n_excluded: int = 0
    excluded_mass: float = 0.0


@dataclass(frozen=True)
class ObservableSensitivity:
    f_c: float
    epf_var: Optional[float]

    @property
    def epf_fisher(self) -> float:
        """1 / delta^2 T, zero for an insensitive readout."""
        return 0.0 if self.epf_var is None else 1.0 / self.epf_var


@dataclass(frozen=True)
class SensitivityPoint:
    lam: float
    temperature: float
    f_q: float
    snr: float
    per_observable: Dict[str, ObservableSensitivity] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Optional[float]]:
        out = {"lambda": self.lam, "T": self.temperature, "f_q": self.f_q, "snr": self.snr}
        for label, sens in self.per_observable.items():
            out[f"f_c_{label}"] = sens.f_c
            out[f"epf_var_{label}"] = sens.epf_var
        return out


@dataclass(frozen=True, eq=False)
class ProjectedObservable:
    """
    An observable prepared against one spectrum.

    weights[a, n] = sum over eigenvectors |a> of outcome a of |<a|psi_n>|^2, which makes the outcome distribution
    a matrix-vector product for any temperature. diag and diag_sq hold <psi_n|A|psi_n> and <psi_n|A^2|psi_n>.
    """

    label: str
    outcomes: np.ndarray
    weights: np.ndarray
    diag: np.ndarray
    diag_sq: np.ndarray

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)


def _check_temperature(T: float):
    if not np.isfinite(T) or T <= 0:
        raise InvalidTemperatureException(f"Temperature must be positive and finite, got T = {T}")


def gibbs(spectrum: Spectrum, T: float) -> GibbsEnsemble:
    _check_temperature(T)
    gaps = spectrum.gaps
    boltzmann = np.exp(-gaps / T)
    partition = float(boltzmann.sum())
    weights = boltzmann / partition
    ground_state_limit = bool(np.all(boltzmann[gaps > 0] == 0.0))
    if ground_state_limit:
        logger.fs.debug(f"[thermo] T = {T:.3e} is below the Boltzmann underflow of every excited level")
    weights.setflags(write=False)
    return GibbsEnsemble(temperature=float(T), weights=weights, partition=partition, ground_state_limit=ground_state_limit)


def energy_variance(spectrum: Spectrum, ensemble: GibbsEnsemble) -> float:
    gaps = spectrum.gaps
    mean = float(ensemble.weights @ gaps)
    return float(ensemble.weights @ (gaps - mean) ** 2)


def qfi_temperature(spectrum: Spectrum, T: float, ensemble: Optional[GibbsEnsemble] = None) -> float:
    """F_Q = Var(H) / T^4 for the Gibbs state."""
    ensemble = ensemble or gibbs(spectrum, T)
    return energy_variance(spectrum, ensemble) / T**4


def snr(f_q: float, T: float) -> float:
    """Single-shot signal-to-noise ratio T / sqrt(delta^2 T) at the Cramer-Rao bound."""
    return float(np.sqrt(max(f_q, 0.0)) * T)


def two_level_qfi(delta_g: float, T: float, g0: int = 1, g1: int = 1) -> float:
    """F_Q of a g0-fold ground level and a g1-fold excited level at distance delta_g."""
    x = delta_g / T
    return g0 * g1 * x**4 * np.exp(-x) / (delta_g**2 * (g0 + g1 * np.exp(-x)) ** 2)


def project_observable(
    spectrum: Spectrum, obs: ObservableMatrix, tol: Optional[float] = None, obs_spectrum: Optional[Spectrum] = None
) -> ProjectedObservable:
    """Group obs into outcomes and weight each outcome on the Hamiltonian eigenbasis.

    obs_spectrum, the eigendecomposition of obs.matrix, can be passed in when the same observable is projected many times.
    """
    if obs.dim != spectrum.dim:
        raise IncompatibleObservableException(f"Observable {obs.name} has dimension {obs.dim}, spectrum has {spectrum.dim}")
    if obs_spectrum is None:
        obs_spectrum = eig_hermitian(obs.matrix)
    grouping = group_degenerate(obs_spectrum, tol)
    starts = grouping.starts
    overlaps = np.abs(obs_spectrum.eigenvectors.conj().T @ spectrum.eigenvectors) ** 2
    weights = np.add.reduceat(overlaps, starts, axis=0)
    outcomes = np.add.reduceat(obs_spectrum.energies, starts) / np.array(grouping.multiplicities)
    a_psi = obs.matrix @ spectrum.eigenvectors
    diag = np.real(np.sum(spectrum.eigenvectors.conj() * a_psi, axis=0))
    diag_sq = np.real(np.sum(a_psi.conj() * a_psi, axis=0))
    return ProjectedObservable(label=obs.name, outcomes=outcomes, weights=weights, diag=diag, diag_sq=diag_sq)


def outcome_distribution(projected: ProjectedObservable, spectrum: Spectrum, ensemble: GibbsEnsemble):
    """(p, dp/dT) over the grouped outcomes, with dp_n/dT = p_n (Delta_n - <Delta>) / T^2."""
    w = ensemble.weights
    gaps = spectrum.gaps
    dw = w * (gaps - w @ gaps) / ensemble.temperature**2
    return projected.weights @ w, projected.weights @ dw


def fisher_from_distribution(p: np.ndarray, dp: np.ndarray, floor: Optional[float] = None) -> ClassicalFisher:
    floor = critherm_config.get_flag("probability_floor") if floor is None else floor
    p = np.asarray(p, dtype=float)
    dp = np.asarray(dp, dtype=float)
    keep = p > floor
    f_c = float(np.sum(dp[keep] ** 2 / p[keep]))
    n_excluded = int(np.count_nonzero(~keep))
    return ClassicalFisher(f_c=f_c, n_outcomes=len(p), n_excluded=n_excluded, excluded_mass=float(np.sum(p[~keep])))


def cfi_observable(
    spectrum: Spectrum,
    obs: Union[ObservableMatrix, ProjectedObservable],
    T: float,
    tol: Optional[float] = None,
    floor: Optional[float] = None,
    ensemble: Optional[GibbsEnsemble] = None,
) -> ClassicalFisher:
    """Fisher information about T of a projective measurement of obs, one outcome per (grouped) eigenvalue."""
    ensemble = ensemble or gibbs(spectrum, T)
    projected = obs if isinstance(obs, ProjectedObservable) else project_observable(spectrum, obs, tol)
    p, dp = outcome_distribution(projected, spectrum, ensemble)
    return fisher_from_distribution(p, dp, floor)


def observable_moments(projected: ProjectedObservable, spectrum: Spectrum, ensemble: GibbsEnsemble):
    """(<A>, Var(A), Cov(A, H)) in the Gibbs state."""
    w = ensemble.weights
    gaps = spectrum.gaps
    mean = float(w @ projected.diag)
    # within-eigenstate spread plus spread of the eigenstate means
    var = float(w @ np.clip(projected.diag_sq - projected.diag**2, 0.0, None) + w @ (projected.diag - mean) ** 2)
    cov = float(w @ ((gaps - w @ gaps) * projected.diag))
    return mean, var, cov


def epf_sensitivity(
    spectrum: Spectrum,
    obs: Union[ObservableMatrix, ProjectedObservable],
    T: float,
    tol: Optional[float] = None,
    ensemble: Optional[GibbsEnsemble] = None,
) -> Optional[float]:
    """
    delta^2 T = Var(A) / |d<A>/dT|^2 with d<A>/dT = Cov(A, H) / T^2.

    Returns None when the readout is insensitive: Var(A) vanishes against max(1, <A^2>), or Cov(A, H)
    vanishes against max|a| sqrt(Var(H)).
    """
    ensemble = ensemble or gibbs(spectrum, T)
    projected = obs if isinstance(obs, ProjectedObservable) else project_observable(spectrum, obs, tol)
    _, var_a, cov = observable_moments(projected, spectrum, ensemble)
    var_h = energy_variance(spectrum, ensemble)
    second_moment = float(ensemble.weights @ projected.diag_sq)
    a_scale = float(np.max(np.abs(projected.outcomes))) if projected.n_outcomes else 0.0
    if var_h <= 0.0 or var_a <= EPF_COV_RTOL * max(1.0, second_moment):
        return None
    if abs(cov) <= EPF_COV_RTOL * a_scale * np.sqrt(var_h):
        return None
    return var_a * T**4 / cov**2


def evaluate_point(
    spectrum: Spectrum, lam: float, T: float, observables: Iterable[ProjectedObservable] = (), floor: Optional[float] = None
) -> SensitivityPoint:
    ensemble = gibbs(spectrum, T)
    f_q = qfi_temperature(spectrum, T, ensemble)
    per_observable = {}
    for projected in observables:
        per_observable[projected.label] = ObservableSensitivity(
            f_c=cfi_observable(spectrum, projected, T, floor=floor, ensemble=ensemble).f_c,
            epf_var=epf_sensitivity(spectrum, projected, T, ensemble=ensemble),
        )
    return SensitivityPoint(lam=float(lam), temperature=float(T), f_q=f_q, snr=snr(f_q, T), per_observable=per_observable)
