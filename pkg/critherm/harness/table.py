from dataclasses import dataclass, field
from typing import Any, Dict, List

import pandas as pd

import critherm


@dataclass
class ResultTable:
    """Row-aligned result columns plus the metadata needed to reproduce them."""

    data: pd.DataFrame
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.metadata.setdefault("version", critherm.__version__)

    def __len__(self):
        return len(self.data)

    @property
    def columns(self) -> List[str]:
        return [str(c) for c in self.data.columns]

    @property
    def name(self) -> str:
        return self.metadata.get("name", "table")

    def column(self, name: str):
        return self.data[name].to_numpy()

    def to_summary_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "rows": len(self), "columns": self.columns, **{k: v for k, v in self.metadata.items() if k != "name"}}


def fisher_units(energy_unit: str) -> Dict[str, str]:
    return {"energy": energy_unit, "T": energy_unit, "f_q": f"{energy_unit}^-2", "f_c": f"{energy_unit}^-2", "epf_var": f"{energy_unit}^2"}
