"""
Periodic XXZ chain in a transverse field, energy unit J:

    H(h) = -4 sum_j (s^x_j s^x_j+1 + s^y_j s^y_j+1 + zeta_z s^z_j s^z_j+1) + h * 2 sum_j s^x_j

Computational basis: integer s in [0, 2^M), site j is bit (M - 1 - j), a set bit is spin up (m = +1/2).
For M = 2 both bonds (1, 2) and (2, 1) are kept, so the ring counts the single pair twice.
"""
import threading
from typing import Optional, Tuple

import numpy as np
from cachetools import LRUCache, cached

from critherm.config_paths import critherm_config
from critherm.models.base import ModelKind, ModelSpec, ParamHamiltonian, frozen_array
from critherm.utils import logger


def _states(M: int) -> np.ndarray:
    return np.arange(2**M, dtype=np.int64)


def site_bits(M: int) -> np.ndarray:
    """(2^M, M) array of 0/1 occupations, column j is site j."""
    states = _states(M)
    shifts = M - 1 - np.arange(M)
    return (states[:, None] >> shifts[None, :]) & 1


def basis_labels(M: int) -> Tuple[str, ...]:
    return tuple(format(s, f"0{M}b").replace("1", "u").replace("0", "d") for s in range(2**M))


@cached(cache=LRUCache(maxsize=32), lock=threading.Lock())
def _xxz_matrices(M: int, zeta_z: float) -> Tuple[np.ndarray, np.ndarray]:
    dim = 2**M
    states = _states(M)
    bits = site_bits(M)
    h_base = np.zeros((dim, dim))
    h_control = np.zeros((dim, dim))
    for j in range(M):
        k = (j + 1) % M
        mask = (1 << (M - 1 - j)) | (1 << (M - 1 - k))
        antiparallel = bits[:, j] != bits[:, k]
        # -4 (sx sx + sy sy) = -2 (s+ s- + s- s+): flip-flop amplitude -2
        src = states[antiparallel]
        h_base[src ^ mask, src] += -2.0
        # -4 zeta sz sz with sz = +-1/2
        h_base[states, states] += -zeta_z * np.where(antiparallel, -1.0, 1.0)
        # 2 s^x_j = sigma^x_j flips site j
        h_control[states ^ (1 << (M - 1 - j)), states] += 1.0
    logger.fs.debug(f"[xxz] built chain M = {M}, zeta_z = {zeta_z} (dim {dim})")
    return frozen_array(h_base), frozen_array(h_control)


def build_xxz(M: int, zeta_z: float = 0.0, size_cap: Optional[int] = None) -> ParamHamiltonian:
    spec = ModelSpec.xxz(M, zeta_z)
    spec.validate(size_cap if size_cap is not None else critherm_config.size_cap(ModelKind.XXZ_CHAIN.value))
    h_base, h_control = _xxz_matrices(M, float(zeta_z))
    return ParamHamiltonian(h_base=h_base, h_control=h_control, basis_labels=basis_labels(M), control_symbol="h_x", spec=spec)


def collective_spin(M: int, axis: str) -> np.ndarray:
    """S_axis = sum_j s^axis_j for axis in {x, y, z}."""
    states = _states(M)
    dim = 2**M
    if axis == "z":
        return frozen_array(np.diag(site_bits(M).sum(axis=1) - M / 2.0))
    out = np.zeros((dim, dim), dtype=complex if axis == "y" else float)
    bits = site_bits(M)
    for j in range(M):
        flipped = states ^ (1 << (M - 1 - j))
        if axis == "x":
            out[flipped, states] += 0.5
        elif axis == "y":
            # s^y |down> = -i/2 |up>, s^y |up> = i/2 |down>
            out[flipped, states] += np.where(bits[:, j] == 1, 0.5j, -0.5j)
        else:
            raise ValueError(f"Unknown spin axis: {axis}")
    return frozen_array(out)


def cyclic_shift(M: int) -> np.ndarray:
    """Permutation matrix moving the spin on site j to site j + 1 (mod M)."""
    bits = site_bits(M)
    shifted = np.roll(bits, 1, axis=1)
    weights = 1 << (M - 1 - np.arange(M))
    targets = shifted @ weights
    out = np.zeros((2**M, 2**M))
    out[targets, _states(M)] = 1.0
    return frozen_array(out)
