from typing import Optional

from critherm.models.base import ModelKind, ModelSpec, ParamHamiltonian
from critherm.models.spin1 import build_spin1_sector
from critherm.models.xxz import build_xxz


def build_model(spec: ModelSpec, size_cap: Optional[int] = None) -> ParamHamiltonian:
    if spec.kind == ModelKind.SPIN1_SMA:
        return build_spin1_sector(spec.N, size_cap=size_cap)
    return build_xxz(spec.M, spec.zeta_z, size_cap=size_cap)
