from critherm.harness.emit import emit, load_table
from critherm.harness.figures import FigureId, reproduce_figure
from critherm.harness.scaling_sweep import measure_scaling_curves, run_scaling
from critherm.harness.sweep import SweepRunner, run_spectrum, run_sweep
from critherm.harness.sweep_config import SweepConfig, load_sweep_config, parse_sweep_config
from critherm.harness.table import ResultTable

__all__ = [
    "FigureId",
    "ResultTable",
    "SweepConfig",
    "SweepRunner",
    "emit",
    "load_sweep_config",
    "load_table",
    "measure_scaling_curves",
    "parse_sweep_config",
    "reproduce_figure",
    "run_scaling",
    "run_spectrum",
    "run_sweep",
]
