import numpy as np

from critherm.spectral import Spectrum


def check_exception_raised(func, exception_type, exception_msg=None):
    try:
        func()
        assert False
    except exception_type as e:
        if exception_msg is not None:
            assert exception_msg in str(e)


def synthetic_spectrum(energies) -> Spectrum:
    energies = np.asarray(energies, dtype=float)
    return Spectrum(energies=energies, eigenvectors=np.eye(len(energies)))


def _boltzmann(spectrum: Spectrum, T: float) -> np.ndarray:
    w = np.exp(-spectrum.gaps / T)
    return w / w.sum()


def fd_energy_fisher(spectrum: Spectrum, T: float, h: float = 1e-5) -> float:
    """Classical Fisher information of the energy distribution by central differences in T."""
    p = _boltzmann(spectrum, T)
    dp = (_boltzmann(spectrum, T + h) - _boltzmann(spectrum, T - h)) / (2 * h)
    keep = p > 0
    return float(np.sum(dp[keep] ** 2 / p[keep]))


def fd_mean(spectrum: Spectrum, matrix: np.ndarray, T: float, h: float = 1e-5) -> float:
    """d<A>/dT by central differences."""
    diag = np.real(np.sum(spectrum.eigenvectors.conj() * (matrix @ spectrum.eigenvectors), axis=0))
    return float((_boltzmann(spectrum, T + h) @ diag - _boltzmann(spectrum, T - h) @ diag) / (2 * h))
