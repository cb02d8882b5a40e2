from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from critherm.exceptions import InvalidModelException, NonHermitianException, SizeCapExceededException

HERMITIAN_ATOL = 1e-12


class ModelKind(str, Enum):
    SPIN1_SMA = "Spin1SMA"
    XXZ_CHAIN = "XXZChain"


class Boundary(str, Enum):
    PERIODIC = "Periodic"


class ObservableLabel(str, Enum):
    JPERP2 = "Jperp2"
    N0 = "N0"
    SX2 = "Sx2"
    SZ2 = "Sz2"
    ENERGY = "Energy"
    CUSTOM = "Custom"


def check_hermitian(matrix: np.ndarray, name: str = "matrix", atol: float = HERMITIAN_ATOL) -> float:
    """Raise NonHermitianException if max|A - A^H| exceeds atol. Returns the deviation."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NonHermitianException(f"{name} is not square (shape {matrix.shape})", deviation=float("inf"))
    deviation = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
    if deviation > atol:
        raise NonHermitianException(f"{name} is not Hermitian: max|A - A^H| = {deviation:.3e} > {atol:.1e}", deviation=deviation)
    return deviation


def frozen_array(matrix: np.ndarray) -> np.ndarray:
    matrix = np.array(matrix, copy=True)
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True)
class ModelSpec:
    """Which Hamiltonian to build. Spin-1 energies are in units of c, XXZ energies in units of J."""

    kind: ModelKind
    N: Optional[int] = None
    M: Optional[int] = None
    zeta_z: float = 0.0
    boundary: Boundary = Boundary.PERIODIC

    @classmethod
    def spin1(cls, N: int) -> "ModelSpec":
        return cls(kind=ModelKind.SPIN1_SMA, N=N)

    @classmethod
    def xxz(cls, M: int, zeta_z: float = 0.0) -> "ModelSpec":
        return cls(kind=ModelKind.XXZ_CHAIN, M=M, zeta_z=zeta_z)

    @property
    def size(self) -> int:
        return self.N if self.kind == ModelKind.SPIN1_SMA else self.M

    @property
    def control_symbol(self) -> str:
        return "q" if self.kind == ModelKind.SPIN1_SMA else "h_x"

    @property
    def energy_unit(self) -> str:
        return "c" if self.kind == ModelKind.SPIN1_SMA else "J"

    def validate(self, size_cap: Optional[int] = None):
        if self.kind == ModelKind.SPIN1_SMA:
            if self.N is None or self.N < 2 or self.N % 2 != 0:
                raise InvalidModelException(f"Spin1SMA needs an even atom count N >= 2 for the M = 0 sector, got N = {self.N}")
        elif self.kind == ModelKind.XXZ_CHAIN:
            if self.M is None or self.M < 2:
                raise InvalidModelException(f"XXZChain needs at least 2 sites, got M = {self.M}")
            if self.boundary != Boundary.PERIODIC:
                raise InvalidModelException(f"Unsupported boundary {self.boundary}")
        if size_cap is not None and self.size > size_cap:
            raise SizeCapExceededException(f"{self.kind.value} size {self.size} exceeds the configured cap {size_cap}", size=self.size, cap=size_cap)

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind.value}
        if self.kind == ModelKind.SPIN1_SMA:
            out["N"] = self.N
        else:
            out.update({"M": self.M, "zeta_z": self.zeta_z, "boundary": self.boundary.value})
        return out

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ModelSpec":
        kind = ModelKind(d["kind"])
        if kind == ModelKind.SPIN1_SMA:
            return cls.spin1(int(d["N"]))
        return cls(kind=kind, M=int(d["M"]), zeta_z=float(d.get("zeta_z", 0.0)), boundary=Boundary(d.get("boundary", "Periodic")))


@dataclass(frozen=True, eq=False)
class ParamHamiltonian:
    """H(lambda) = h_base + lambda * h_control, plus auxiliary operators expressed in the same basis."""

    h_base: np.ndarray
    h_control: np.ndarray
    basis_labels: Tuple[str, ...]
    control_symbol: str
    spec: Optional[ModelSpec] = None
    operators: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        check_hermitian(self.h_base, "h_base")
        check_hermitian(self.h_control, "h_control")
        if self.h_base.shape != self.h_control.shape or len(self.basis_labels) != self.h_base.shape[0]:
            raise InvalidModelException(
                f"Inconsistent shapes: h_base {self.h_base.shape}, h_control {self.h_control.shape}, {len(self.basis_labels)} labels"
            )

    @property
    def dim(self) -> int:
        return self.h_base.shape[0]

    def at(self, lam: float) -> np.ndarray:
        return self.h_base + lam * self.h_control

    def restrict(self, indices: Sequence[int]) -> "ParamHamiltonian":
        idx = np.asarray(indices, dtype=int)
        block = lambda a: frozen_array(a[np.ix_(idx, idx)])
        return ParamHamiltonian(
            h_base=block(self.h_base),
            h_control=block(self.h_control),
            basis_labels=tuple(self.basis_labels[i] for i in idx),
            control_symbol=self.control_symbol,
            spec=self.spec,
            operators={name: block(op) for name, op in self.operators.items()},
        )


@dataclass(frozen=True, eq=False)
class ObservableMatrix:
    matrix: np.ndarray
    label: ObservableLabel

    def __post_init__(self):
        check_hermitian(self.matrix, f"observable {self.label.value}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def name(self) -> str:
        return self.label.value

    @classmethod
    def custom(cls, matrix: np.ndarray) -> "ObservableMatrix":
        return cls(matrix=frozen_array(matrix), label=ObservableLabel.CUSTOM)
