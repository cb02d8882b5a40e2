"""
Sweep configuration, read from a TOML file with the sections [model], [sweep], [scaling] and [output].

Grids are either explicit lists or tables {start, stop, num, spacing = "linear" | "log"}. Temperatures come in three
modes: absolute values, ratios T / Delta_min (Delta_min located once for the model), or ratios T / Delta_g(lambda)
resolved at every lambda.
"""
import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from critherm.exceptions import BadConfigException, InvalidModelException
from critherm.models.base import ModelKind, ModelSpec
from critherm.models.observables import compatible_labels
from critherm.scaling import Quantity, ScalingExponents


class TemperatureMode(str, Enum):
    ABSOLUTE = "absolute"
    RATIO_MIN = "ratio_min"  # T / Delta_min
    RATIO_GAP = "ratio_gap"  # T / Delta_g(lambda)


@dataclass(frozen=True)
class TemperatureSpec:
    mode: TemperatureMode
    values: Tuple[float, ...]

    def as_dict(self) -> Dict[str, Any]:
        return {"mode": self.mode.value, "values": list(self.values)}


@dataclass(frozen=True)
class ScalingConfig:
    sizes: Tuple[int, ...]
    t_ratio: float
    x_window: Tuple[float, float] = (-2.0, 2.0)
    points: int = 41
    quantities: Tuple[Quantity, ...] = (Quantity.GAP, Quantity.QFI, Quantity.SNR)
    critical_grid: Optional[Tuple[float, ...]] = None
    exponents: Optional[ScalingExponents] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "sizes": list(self.sizes),
            "t_ratio": self.t_ratio,
            "x_window": list(self.x_window),
            "points": self.points,
            "quantities": [q.value for q in self.quantities],
            "critical_grid": list(self.critical_grid) if self.critical_grid is not None else None,
            "exponents": {"z": self.exponents.z, "nu": self.exponents.nu, "d": self.exponents.d} if self.exponents else None,
        }


@dataclass(frozen=True)
class OutputConfig:
    path: Optional[str] = None
    format: str = "csv"

    def as_dict(self) -> Dict[str, Any]:
        return {"path": self.path, "format": self.format}


@dataclass(frozen=True)
class SweepConfig:
    model: ModelSpec
    lambda_grid: Tuple[float, ...]
    temperature: TemperatureSpec
    observables: Tuple[str, ...] = ()
    levels: int = 5
    critical_grid: Optional[Tuple[float, ...]] = None
    scaling: Optional[ScalingConfig] = None
    output: OutputConfig = field(default_factory=OutputConfig)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model.as_dict(),
            "sweep": {
                "lambda": list(self.lambda_grid),
                "temperature": self.temperature.as_dict(),
                "observables": list(self.observables),
                "levels": self.levels,
                "critical_grid": list(self.critical_grid) if self.critical_grid is not None else None,
            },
            "scaling": self.scaling.as_dict() if self.scaling else None,
            "output": self.output.as_dict(),
        }

    def config_hash(self) -> str:
        """sha256 over the canonical JSON form, so it changes whenever any field does."""
        canonical = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"), allow_nan=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


_SECTION_KEYS = {
    "model": {"kind", "N", "M", "zeta_z", "boundary"},
    "sweep": {"lambda", "temperature", "observables", "levels", "critical_grid"},
    "scaling": {"sizes", "t_ratio", "x_window", "points", "quantities", "critical_grid", "exponents"},
    "output": {"path", "format"},
}


def _check_keys(section: Mapping[str, Any], allowed, prefix: str):
    if not isinstance(section, Mapping):
        raise BadConfigException("expected a table", key_path=prefix)
    for key in section:
        if key not in allowed:
            raise BadConfigException(f"unknown key (expected one of {', '.join(sorted(allowed))})", key_path=f"{prefix}.{key}")


def parse_grid(value: Any, key_path: str, positive: bool = False) -> Tuple[float, ...]:
    if isinstance(value, Mapping):
        _check_keys(value, {"start", "stop", "num", "spacing"}, key_path)
        try:
            start, stop, num = float(value["start"]), float(value["stop"]), int(value["num"])
        except KeyError as e:
            raise BadConfigException(f"missing {e.args[0]!r}", key_path=key_path) from e
        spacing = value.get("spacing", "linear")
        if num < 1:
            raise BadConfigException("num must be at least 1", key_path=f"{key_path}.num")
        if spacing == "linear":
            grid = np.linspace(start, stop, num)
        elif spacing == "log":
            if start <= 0 or stop <= 0:
                raise BadConfigException("log spacing needs positive bounds", key_path=key_path)
            grid = np.geomspace(start, stop, num)
        else:
            raise BadConfigException(f"unknown spacing {spacing!r}", key_path=f"{key_path}.spacing")
    elif isinstance(value, (list, tuple)):
        try:
            grid = np.array([float(v) for v in value])
        except (TypeError, ValueError) as e:
            raise BadConfigException(f"grid values must be numbers: {e}", key_path=key_path) from e
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        grid = np.array([float(value)])
    else:
        raise BadConfigException("expected a list of numbers or a {start, stop, num} table", key_path=key_path)

    if len(grid) == 0:
        raise BadConfigException("grid is empty", key_path=key_path)
    if not np.all(np.isfinite(grid)):
        raise BadConfigException("grid values must be finite", key_path=key_path)
    steps = np.diff(grid)
    if len(grid) > 1 and not (np.all(steps > 0) or np.all(steps < 0)):
        raise BadConfigException("grid must be strictly monotone", key_path=key_path)
    if positive and np.any(grid <= 0):
        raise BadConfigException("values must be positive", key_path=key_path)
    return tuple(float(v) for v in grid)


def parse_model_section(section: Mapping[str, Any]) -> ModelSpec:
    _check_keys(section, _SECTION_KEYS["model"], "model")
    try:
        spec = ModelSpec.from_dict(section)
    except KeyError as e:
        raise BadConfigException(f"missing {e.args[0]!r}", key_path="model") from e
    except ValueError as e:
        raise BadConfigException(str(e), key_path="model.kind") from e
    try:
        spec.validate()
    except InvalidModelException as e:
        raise BadConfigException(str(e), key_path="model") from e
    return spec


def _parse_temperature(value: Any) -> TemperatureSpec:
    if not isinstance(value, Mapping):
        raise BadConfigException("expected a table with mode and values", key_path="sweep.temperature")
    _check_keys(value, {"mode", "values"}, "sweep.temperature")
    try:
        mode = TemperatureMode(value.get("mode", "absolute"))
    except ValueError as e:
        allowed = ", ".join(m.value for m in TemperatureMode)
        raise BadConfigException(f"unknown mode {value.get('mode')!r} (expected one of {allowed})", key_path="sweep.temperature.mode") from e
    if "values" not in value:
        raise BadConfigException("missing 'values'", key_path="sweep.temperature")
    return TemperatureSpec(mode=mode, values=parse_grid(value["values"], "sweep.temperature.values", positive=True))


def _parse_observables(value: Any, spec: ModelSpec) -> Tuple[str, ...]:
    if not isinstance(value, (list, tuple)):
        raise BadConfigException("expected a list of labels", key_path="sweep.observables")
    allowed = {label.value for label in compatible_labels(spec.kind)}
    for i, label in enumerate(value):
        if label not in allowed:
            raise BadConfigException(
                f"observable {label!r} is not available for {spec.kind.value} (expected one of {', '.join(sorted(allowed))})",
                key_path=f"sweep.observables[{i}]",
            )
    if len(set(value)) != len(value):
        raise BadConfigException("duplicate observable labels", key_path="sweep.observables")
    return tuple(str(v) for v in value)


def parse_scaling_section(section: Mapping[str, Any], spec: ModelSpec) -> ScalingConfig:
    _check_keys(section, _SECTION_KEYS["scaling"], "scaling")
    if "sizes" not in section or "t_ratio" not in section:
        raise BadConfigException("scaling needs sizes and t_ratio", key_path="scaling")
    sizes = section["sizes"]
    if not isinstance(sizes, (list, tuple)) or len(sizes) == 0 or not all(isinstance(s, int) and not isinstance(s, bool) for s in sizes):
        raise BadConfigException("expected a non-empty list of integers", key_path="scaling.sizes")
    for i, size in enumerate(sizes):
        try:
            (ModelSpec.spin1(size) if spec.kind == ModelKind.SPIN1_SMA else ModelSpec.xxz(size, spec.zeta_z)).validate()
        except InvalidModelException as e:
            raise BadConfigException(str(e), key_path=f"scaling.sizes[{i}]") from e
    t_ratio = float(section["t_ratio"])
    if t_ratio <= 0:
        raise BadConfigException("must be positive", key_path="scaling.t_ratio")
    window = section.get("x_window", [-2.0, 2.0])
    if not isinstance(window, (list, tuple)) or len(window) != 2 or not float(window[0]) < float(window[1]):
        raise BadConfigException("expected [x_min, x_max] with x_min < x_max", key_path="scaling.x_window")
    points = int(section.get("points", 41))
    if points < 3:
        raise BadConfigException("need at least 3 points", key_path="scaling.points")
    try:
        quantities = tuple(Quantity(q) for q in section.get("quantities", [q.value for q in Quantity]))
    except ValueError as e:
        raise BadConfigException(str(e), key_path="scaling.quantities") from e
    critical_grid = parse_grid(section["critical_grid"], "scaling.critical_grid") if "critical_grid" in section else None
    exponents = None
    if "exponents" in section:
        exp = section["exponents"]
        _check_keys(exp, {"z", "nu", "d"}, "scaling.exponents")
        try:
            exponents = ScalingExponents(z=float(exp["z"]), nu=float(exp["nu"]), d=float(exp["d"]))
        except (KeyError, ValueError) as e:
            raise BadConfigException(str(e), key_path="scaling.exponents") from e
    return ScalingConfig(
        sizes=tuple(int(s) for s in sizes),
        t_ratio=t_ratio,
        x_window=(float(window[0]), float(window[1])),
        points=points,
        quantities=quantities,
        critical_grid=critical_grid,
        exponents=exponents,
    )


def parse_sweep_config(raw: Mapping[str, Any]) -> SweepConfig:
    _check_keys(raw, set(_SECTION_KEYS), "<root>")
    if "model" not in raw:
        raise BadConfigException("missing [model] section", key_path="model")
    spec = parse_model_section(raw["model"])

    sweep = raw.get("sweep", {})
    _check_keys(sweep, _SECTION_KEYS["sweep"], "sweep")
    if "lambda" not in sweep:
        raise BadConfigException("missing lambda grid", key_path="sweep.lambda")
    lambda_grid = parse_grid(sweep["lambda"], "sweep.lambda")
    temperature = _parse_temperature(sweep.get("temperature", {"mode": "ratio_min", "values": [0.26]}))
    observables = _parse_observables(sweep.get("observables", []), spec)
    levels = int(sweep.get("levels", 5))
    if levels < 1:
        raise BadConfigException("must be at least 1", key_path="sweep.levels")
    critical_grid = parse_grid(sweep["critical_grid"], "sweep.critical_grid") if "critical_grid" in sweep else None
    if temperature.mode == TemperatureMode.RATIO_MIN and len(critical_grid if critical_grid is not None else lambda_grid) < 3:
        raise BadConfigException("ratio_min temperatures need a lambda or critical grid of at least 3 points", key_path="sweep.critical_grid")

    scaling = parse_scaling_section(raw["scaling"], spec) if "scaling" in raw else None

    out = raw.get("output", {})
    _check_keys(out, _SECTION_KEYS["output"], "output")
    fmt = out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise BadConfigException(f"unknown format {fmt!r} (expected csv or json)", key_path="output.format")
    output = OutputConfig(path=out.get("path"), format=fmt)

    return SweepConfig(
        model=spec,
        lambda_grid=lambda_grid,
        temperature=temperature,
        observables=observables,
        levels=levels,
        critical_grid=critical_grid,
        scaling=scaling,
        output=output,
    )


def load_sweep_config(path) -> SweepConfig:
    path = Path(path)
    if not path.exists():
        raise BadConfigException(f"config file not found: {path}")
    with path.open("rb") as f:
        try:
            raw = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise BadConfigException(f"invalid TOML in {path}: {e}") from e
    return parse_sweep_config(raw)
