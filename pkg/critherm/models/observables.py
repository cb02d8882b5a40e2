from typing import Optional, Union

from critherm.exceptions import IncompatibleObservableException
from critherm.models import spin1, xxz
from critherm.models.base import ModelKind, ModelSpec, ObservableLabel, ObservableMatrix, frozen_array
from critherm.models.factory import build_model

_COMPATIBLE = {
    ModelKind.SPIN1_SMA: (ObservableLabel.JPERP2, ObservableLabel.N0, ObservableLabel.ENERGY),
    ModelKind.XXZ_CHAIN: (ObservableLabel.SX2, ObservableLabel.SZ2, ObservableLabel.ENERGY),
}


def compatible_labels(kind: ModelKind):
    return _COMPATIBLE[ModelKind(kind)]


def build_observable(
    spec: ModelSpec, label: Union[ObservableLabel, str], lam: Optional[float] = None, size_cap: Optional[int] = None
) -> ObservableMatrix:
    """
    Observable in the basis of the model's ParamHamiltonian.

    For the spin-1 M = 0 sector, Jperp2 is J^2: Jz annihilates every sector state, so J_perp^2 = J^2 - Jz^2 = J^2 there.
    Energy is H(lam) and needs the control value.
    """
    try:
        label = ObservableLabel(label)
    except ValueError:
        raise IncompatibleObservableException(f"Unknown observable label {label!r}")
    if label == ObservableLabel.CUSTOM:
        raise IncompatibleObservableException("Custom observables are built with ObservableMatrix.custom(matrix)")
    if label not in _COMPATIBLE[spec.kind]:
        allowed = ", ".join(l.value for l in _COMPATIBLE[spec.kind])
        raise IncompatibleObservableException(f"Observable {label.value} is not defined for {spec.kind.value} (allowed: {allowed})")

    # validates the model and the size cap
    model = build_model(spec, size_cap=size_cap)
    if label == ObservableLabel.ENERGY:
        if lam is None:
            raise IncompatibleObservableException("Energy observable needs the control value lambda")
        matrix = frozen_array(model.at(lam))
    elif label == ObservableLabel.JPERP2:
        matrix = spin1.sector_j2(spec.N)
    elif label == ObservableLabel.N0:
        matrix = spin1.sector_n0(spec.N)
    else:
        s = xxz.collective_spin(spec.M, "x" if label == ObservableLabel.SX2 else "z")
        matrix = frozen_array(s @ s)
    return ObservableMatrix(matrix=matrix, label=label)
