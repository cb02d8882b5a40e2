import io
import json
import math
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd

from critherm.exceptions import CrithermException
from critherm.harness.table import ResultTable

PathLike = Union[str, Path]

FLOAT_FORMAT = "%.17g"
METADATA_PREFIX = "# "
# JSON has no infinity; column cells carry it as a string, NaN as null
JSON_INF_MARKERS = {"inf": np.inf, "-inf": -np.inf}


class EmitException(CrithermException):
    def __init__(self, message, path: PathLike):
        super().__init__(f"{message} ({path})")
        self.path = str(path)

    def details(self):
        return {"path": self.path}


def _json_safe(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _json_cell(value: Any) -> Any:
    if isinstance(value, (float, np.floating)) and np.isinf(value):
        return "inf" if value > 0 else "-inf"
    return _json_safe(value)


def _from_json_cell(value: Any) -> Any:
    if value is None:
        return np.nan
    return JSON_INF_MARKERS.get(value, value) if isinstance(value, str) else value


def to_csv_text(table: ResultTable) -> str:
    buf = io.StringIO()
    for key in sorted(table.metadata):
        buf.write(f"{METADATA_PREFIX}{key}: {json.dumps(_json_safe(table.metadata[key]), sort_keys=True)}\n")
    table.data.to_csv(buf, index=False, float_format=FLOAT_FORMAT)
    return buf.getvalue()


def to_json_obj(table: ResultTable) -> Dict[str, Any]:
    columns = {str(name): [_json_cell(v) for v in table.data[name].tolist()] for name in table.data.columns}
    return {"metadata": _json_safe(table.metadata), "columns": columns}


def emit(table: ResultTable, path: PathLike, format: str = "csv") -> Path:
    """Write a table as CSV ('#' metadata lines, then a header row) or as one JSON object {metadata, columns}."""
    path = Path(path)
    if format not in ("csv", "json"):
        raise EmitException(f"Unknown output format {format!r}", path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as f:
            if format == "csv":
                f.write(to_csv_text(table))
            else:
                json.dump(to_json_obj(table), f, indent=2, allow_nan=False)
                f.write("\n")
    except OSError as e:
        raise EmitException(f"Could not write results: {e.strerror or e}", path) from e
    return path


def load_table(path: PathLike) -> ResultTable:
    """Parse a table written by emit back into memory."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise EmitException(f"Could not read results: {e.strerror or e}", path) from e

    if path.suffix == ".json" or text.lstrip().startswith("{"):
        obj = json.loads(text)
        data = pd.DataFrame({name: pd.Series(values, dtype=object) for name, values in obj["columns"].items()})
        for name in data.columns:
            if name == "flag":
                data[name] = data[name].fillna("").astype(str)
                continue
            try:
                data[name] = pd.to_numeric(data[name].map(_from_json_cell))
            except (TypeError, ValueError):
                pass
        return ResultTable(data=data, metadata=obj["metadata"])

    metadata, n_meta = {}, 0
    for line in text.splitlines():
        if not line.startswith(METADATA_PREFIX):
            break
        key, _, value = line[len(METADATA_PREFIX) :].partition(": ")
        metadata[key] = json.loads(value)
        n_meta += 1
    data = pd.read_csv(io.StringIO(text), skiprows=n_meta, float_precision="round_trip")
    if "flag" in data.columns:
        data["flag"] = data["flag"].fillna("").astype(str)
    return ResultTable(data=data, metadata=metadata)
