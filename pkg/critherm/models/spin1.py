"""
Spin-1 condensate in the single-mode approximation.

The collective Hamiltonian (energy unit c) is H(q) = -J^2 / (2N) - q N0. Collisions conserve the magnetization
N1 - N-1, and the sector built here is M = 0 (N1 = N-1 = k, N0 = N - 2k, k = 0..N/2). Within it J^2 = J+ J-
is real symmetric and tridiagonal:

    <k|J^2|k>     = 2 [(k + 1)(N - 2k) + k(N - 2k + 1)]
    <k+1|J^2|k>   = 2 (k + 1) sqrt((N - 2k)(N - 2k - 1))

These elements are checked against `build_spin1_full_oracle`, which builds every collective operator in the full
three-mode Fock space from the single-particle spin-1 matrices.
"""
import threading
from typing import Dict, List, Optional, Tuple

import numpy as np
from cachetools import LRUCache, cached

from critherm.config_paths import critherm_config
from critherm.exceptions import InvalidModelException, SizeCapExceededException
from critherm.models.base import ModelKind, ModelSpec, ParamHamiltonian, frozen_array
from critherm.utils import logger

# mode order of the three-mode Fock space: m = +1, 0, -1
MODE_PLUS, MODE_ZERO, MODE_MINUS = 0, 1, 2

Occupation = Tuple[int, int, int]


@cached(cache=LRUCache(maxsize=32), lock=threading.Lock())
def _sector_operators(N: int) -> Tuple[np.ndarray, np.ndarray]:
    k = np.arange(N // 2 + 1, dtype=float)
    n0 = N - 2.0 * k
    diag = 2.0 * ((k + 1.0) * n0 + k * (n0 + 1.0))
    off = 2.0 * (k[:-1] + 1.0) * np.sqrt(n0[:-1] * (n0[:-1] - 1.0))
    j2 = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    logger.fs.debug(f"[spin1] built M = 0 sector operators for N = {N} (dim {len(k)})")
    return frozen_array(j2), frozen_array(np.diag(n0))


def sector_labels(N: int) -> Tuple[str, ...]:
    return tuple(f"({k}, {N - 2 * k}, {k})" for k in range(N // 2 + 1))


def sector_j2(N: int) -> np.ndarray:
    """J^2 restricted to the M = 0 sector. Since Jz vanishes there, this is also J_perp^2 = J^2 - Jz^2."""
    return _sector_operators(N)[0]


def sector_n0(N: int) -> np.ndarray:
    return _sector_operators(N)[1]


def build_spin1_sector(N: int, size_cap: Optional[int] = None) -> ParamHamiltonian:
    spec = ModelSpec.spin1(N)
    spec.validate(size_cap if size_cap is not None else critherm_config.size_cap(ModelKind.SPIN1_SMA.value))
    j2, n0 = _sector_operators(N)
    return ParamHamiltonian(
        h_base=frozen_array(-j2 / (2.0 * N)),
        h_control=frozen_array(-n0),
        basis_labels=sector_labels(N),
        control_symbol="q",
        spec=spec,
        operators={"J2": j2, "Jperp2": j2, "N0": n0},
    )


def fock_basis(N: int) -> List[Occupation]:
    """All (n+1, n0, n-1) with n+1 + n0 + n-1 = N, ordered by n+1 then n-1."""
    return [(n1, N - n1 - nm1, nm1) for n1 in range(N + 1) for nm1 in range(N - n1 + 1)]


def _hop(basis: List[Occupation], index: Dict[Occupation, int], dst: int, src: int) -> np.ndarray:
    """Matrix of a_dst^dagger a_src in the Fock basis."""
    out = np.zeros((len(basis), len(basis)))
    for col, occ in enumerate(basis):
        if occ[src] == 0:
            continue
        new = list(occ)
        amp = np.sqrt(new[src])
        new[src] -= 1
        amp *= np.sqrt(new[dst] + 1)
        new[dst] += 1
        out[index[tuple(new)], col] += amp
    return out


@cached(cache=LRUCache(maxsize=16), lock=threading.Lock())
def _oracle_operators(N: int) -> Dict[str, np.ndarray]:
    basis = fock_basis(N)
    index = {occ: i for i, occ in enumerate(basis)}
    # J+ = sqrt(2) (a+1^dag a0 + a0^dag a-1) from the spin-1 raising matrix
    j_plus = np.sqrt(2.0) * (_hop(basis, index, MODE_PLUS, MODE_ZERO) + _hop(basis, index, MODE_ZERO, MODE_MINUS))
    j_minus = j_plus.T
    jz = _hop(basis, index, MODE_PLUS, MODE_PLUS) - _hop(basis, index, MODE_MINUS, MODE_MINUS)
    n0 = _hop(basis, index, MODE_ZERO, MODE_ZERO)
    j2 = j_plus @ j_minus + jz @ jz - jz
    ops = {
        "Jx": (j_plus + j_minus) / 2.0,
        "Jy": (j_plus - j_minus) / 2.0j,
        "Jz": jz,
        "N0": n0,
        "J2": j2,
        "Jperp2": j2 - jz @ jz,
    }
    logger.fs.debug(f"[spin1] built full Fock oracle for N = {N} (dim {len(basis)})")
    return {name: frozen_array(op) for name, op in ops.items()}


def build_spin1_full_oracle(N: int, size_cap: Optional[int] = None) -> ParamHamiltonian:
    cap = size_cap if size_cap is not None else critherm_config.size_cap("oracle")
    if N < 1:
        raise InvalidModelException(f"Oracle needs at least one atom, got N = {N}")
    if N > cap:
        raise SizeCapExceededException(f"Full Fock oracle is limited to N <= {cap}, got N = {N}", size=N, cap=cap)
    ops = _oracle_operators(N)
    return ParamHamiltonian(
        h_base=frozen_array(-ops["J2"] / (2.0 * N)),
        h_control=frozen_array(-ops["N0"]),
        basis_labels=tuple(f"({n1}, {n0}, {nm1})" for n1, n0, nm1 in fock_basis(N)),
        control_symbol="q",
        spec=ModelSpec.spin1(N) if N % 2 == 0 else None,
        operators=ops,
    )


def zero_magnetization_indices(N: int) -> np.ndarray:
    """Oracle basis indices of the states with n+1 = n-1, in ascending k = n+1 (the sector builder's order)."""
    basis = fock_basis(N)
    idx = [i for i, (n1, _, nm1) in enumerate(basis) if n1 == nm1]
    return np.array(sorted(idx, key=lambda i: basis[i][0]), dtype=int)


def zero_magnetization_block(oracle: ParamHamiltonian) -> ParamHamiltonian:
    N = sum(int(x) for x in oracle.basis_labels[0].strip("()").split(","))
    return oracle.restrict(zero_magnetization_indices(N))
