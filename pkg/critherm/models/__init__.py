from critherm.models.base import Boundary, ModelKind, ModelSpec, ObservableLabel, ObservableMatrix, ParamHamiltonian
from critherm.models.spin1 import build_spin1_full_oracle, build_spin1_sector, zero_magnetization_block
from critherm.models.xxz import build_xxz, collective_spin, cyclic_shift
from critherm.models.factory import build_model
from critherm.models.observables import build_observable, compatible_labels

__all__ = [
    "Boundary",
    "ModelKind",
    "ModelSpec",
    "ObservableLabel",
    "ObservableMatrix",
    "ParamHamiltonian",
    "build_model",
    "build_observable",
    "build_spin1_full_oracle",
    "build_spin1_sector",
    "build_xxz",
    "collective_spin",
    "compatible_labels",
    "cyclic_shift",
    "zero_magnetization_block",
]
