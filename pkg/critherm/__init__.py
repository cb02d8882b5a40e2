from pathlib import Path

__version__ = "0.1.0"
__root__ = Path(__file__).parent.parent

from critherm import design, exceptions, scaling, spectral, thermo  # noqa: E402
from critherm.harness import ResultTable, SweepConfig, emit, load_sweep_config, load_table, reproduce_figure, run_sweep  # noqa: E402
from critherm.models import ModelKind, ModelSpec, build_model, build_observable  # noqa: E402

__all__ = [
    "__version__",
    "__root__",
    # modules
    "design",
    "exceptions",
    "scaling",
    "spectral",
    "thermo",
    # models
    "ModelKind",
    "ModelSpec",
    "build_model",
    "build_observable",
    # harness
    "ResultTable",
    "SweepConfig",
    "emit",
    "load_sweep_config",
    "load_table",
    "reproduce_figure",
    "run_sweep",
]
