from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from critherm.config_paths import critherm_config
from critherm.exceptions import GridBoundaryException, SpectrumConvergenceException
from critherm.models.base import ParamHamiltonian, check_hermitian
from critherm.utils import logger
from critherm.utils.fn import do_parallel


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues with the matching orthonormal eigenvectors as columns."""

    energies: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.energies)

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])

    @property
    def gaps(self) -> np.ndarray:
        return self.energies - self.energies[0]

    @property
    def gap(self) -> float:
        """Delta_g = E_1 - E_0."""
        return float(self.energies[1] - self.energies[0]) if self.dim > 1 else float("nan")

    def low_gaps(self, levels: int = 5) -> np.ndarray:
        out = np.full(levels, np.nan)
        n = min(levels, self.dim - 1)
        out[:n] = self.gaps[1 : n + 1]
        return out

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.energies[None, :]) @ v.conj().T


@dataclass(frozen=True)
class DegeneracyGrouping:
    groups: Tuple[Tuple[int, ...], ...]
    tolerance: float

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    @property
    def starts(self) -> np.ndarray:
        """First index of every group, usable with np.add.reduceat on ascending data."""
        return np.array([g[0] for g in self.groups], dtype=int)

    def __len__(self):
        return len(self.groups)


class CriticalPoint(NamedTuple):
    lambda_c: float
    delta_min: float
    error: float


def default_degeneracy_tol(energies: np.ndarray, rtol: Optional[float] = None) -> float:
    rtol = critherm_config.get_flag("degeneracy_rtol") if rtol is None else rtol
    scale = float(np.max(np.abs(energies))) if len(energies) else 0.0
    return rtol * max(1.0, scale)


def eig_hermitian(h: np.ndarray) -> Spectrum:
    h = np.asarray(h)
    scale = float(np.max(np.abs(h))) if h.size else 0.0
    check_hermitian(h, "H", atol=1e-12 * max(1.0, scale))
    try:
        energies, vectors = scipy.linalg.eigh(h)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as e:
        raise SpectrumConvergenceException(f"Hermitian eigensolver failed: {e}", shape=h.shape, norm=scale) from e
    energies.setflags(write=False)
    vectors.setflags(write=False)
    return Spectrum(energies=energies, eigenvectors=vectors)


def group_degenerate(spectrum: Union[Spectrum, np.ndarray], tol: Optional[float] = None) -> DegeneracyGrouping:
    """Greedy ascending clustering: a group closes once the next value exceeds the group's first member by more than tol."""
    energies = spectrum.energies if isinstance(spectrum, Spectrum) else np.asarray(spectrum, dtype=float)
    if tol is None:
        tol = default_degeneracy_tol(energies)
    groups, current = [], [0] if len(energies) else []
    for i in range(1, len(energies)):
        if energies[i] - energies[current[0]] > tol:
            groups.append(tuple(current))
            current = [i]
        else:
            current.append(i)
    if current:
        groups.append(tuple(current))
    return DegeneracyGrouping(groups=tuple(groups), tolerance=float(tol))


def _parabola_vertex(x: np.ndarray, y: np.ndarray) -> Optional[Tuple[float, float]]:
    x0 = x[1]
    a, b, c = np.polyfit(x - x0, y, 2)
    if a <= 0:
        return None
    return x0 - b / (2 * a), c - b * b / (4 * a)


def refine_minimum(grid: Sequence[float], values: Sequence[float]) -> Tuple[float, float, float]:
    """
    Three-point parabolic refinement of the discrete minimum of values over a (possibly nonuniform) grid.

    Returns (x_min, y_min, error) where error is the distance to the vertex of the neighbouring shifted window,
    or half the local grid spacing when the grid has no room for a second window.
    """
    x = np.asarray(grid, dtype=float)
    y = np.asarray(values, dtype=float)
    if len(x) < 3:
        raise ValueError(f"Need at least 3 grid points to refine a minimum, got {len(x)}")
    if np.any(np.diff(x) <= 0):
        raise ValueError("Grid must be strictly increasing")
    i = int(np.nanargmin(y))
    if i == 0 or i == len(x) - 1:
        raise GridBoundaryException(f"Minimum at grid boundary (index {i}, x = {x[i]:.6g})", index=i, value=float(x[i]))

    half_spacing = max(x[i + 1] - x[i], x[i] - x[i - 1]) / 2
    vertex = _parabola_vertex(x[i - 1 : i + 2], y[i - 1 : i + 2])
    if vertex is None:
        return float(x[i]), float(y[i]), float(half_spacing)
    x_min, y_min = vertex

    if x_min >= x[i] and i + 2 < len(x):
        alt = _parabola_vertex(x[i : i + 3], y[i : i + 3])
    elif i - 2 >= 0:
        alt = _parabola_vertex(x[i - 2 : i + 1], y[i - 2 : i + 1])
    elif i + 2 < len(x):
        alt = _parabola_vertex(x[i : i + 3], y[i : i + 3])
    else:
        alt = None
    error = abs(alt[0] - x_min) if alt is not None else half_spacing
    return float(x_min), float(y_min), float(error)


def _low_gaps_at(model: ParamHamiltonian, lam: float, levels: int) -> np.ndarray:
    h = model.at(lam)
    n = min(levels, model.dim - 1)
    try:
        energies = scipy.linalg.eigh(h, eigvals_only=True, subset_by_index=[0, n])
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as e:
        raise SpectrumConvergenceException(f"Hermitian eigensolver failed at lambda = {lam}: {e}", shape=h.shape, norm=float(np.max(np.abs(h)))) from e
    out = np.full(levels, np.nan)
    out[:n] = energies[1:] - energies[0]
    return out


def gap_curve(model: ParamHamiltonian, lambda_grid: Sequence[float], levels: int = 1, threads: int = 1) -> np.ndarray:
    """(len(lambda_grid), levels) array of Delta_1 .. Delta_levels."""
    rows = do_parallel(lambda lam: _low_gaps_at(model, lam, levels), list(lambda_grid), n=threads, return_args=False)
    return np.array(rows).reshape(len(rows), levels)


def locate_critical_point(model: ParamHamiltonian, lambda_grid: Sequence[float], threads: int = 1) -> CriticalPoint:
    """Finite-size critical point: the parabola-refined minimizer of Delta_g over lambda_grid, and the minimum gap."""
    grid = np.asarray(lambda_grid, dtype=float)
    if len(grid) < 3:
        raise ValueError(f"Need at least 3 grid points to locate a gap minimum, got {len(grid)}")
    gaps = gap_curve(model, grid, levels=1, threads=threads)[:, 0]
    lambda_c, delta_min, error = refine_minimum(grid, gaps)
    logger.fs.debug(f"[spectral] gap minimum at {model.control_symbol} = {lambda_c:.6f} (+- {error:.1e}), Delta_min = {delta_min:.6g}")
    return CriticalPoint(lambda_c=lambda_c, delta_min=delta_min, error=error)
