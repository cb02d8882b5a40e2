from pathlib import Path
from typing import Optional

import numpy as np
import typer

from critherm.cli.impl.common import console, exit_with_error, print_header, print_summary, register_exception_handler, resolve_format, write_table, write_tables
from critherm.exceptions import BadConfigException, CrithermException
from critherm.harness.figures import FigureId, reproduce_figure
from critherm.harness.scaling_sweep import run_scaling
from critherm.harness.sweep import run_spectrum, run_sweep
from critherm.harness.sweep_config import load_sweep_config
from critherm.models import ModelKind, ModelSpec
from critherm.utils import logger
from critherm.utils.timer import Timer


def _output_path(out: Optional[Path], config_path: Optional[str]) -> Optional[Path]:
    if out is not None:
        return out
    return Path(config_path) if config_path else None


def spectrum(
    kind: ModelKind = typer.Option(ModelKind.SPIN1_SMA, "--kind", "-k", help="Model to diagonalize"),
    size: int = typer.Option(200, "--size", "-s", help="Atom count N (Spin1SMA) or number of sites M (XXZChain)"),
    zeta_z: float = typer.Option(0.0, "--zeta-z", help="XXZ anisotropy"),
    lambda_min: float = typer.Option(-3.0, "--lambda-min", help="Lower end of the control grid (q or h_x)"),
    lambda_max: float = typer.Option(3.0, "--lambda-max", help="Upper end of the control grid (q or h_x)"),
    num: int = typer.Option(121, "--num", "-n", help="Number of grid points"),
    levels: int = typer.Option(5, "--levels", help="Number of gaps above the ground state to record"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file; printed to stdout when omitted"),
    format: Optional[str] = typer.Option(None, "--format", "-f", help="csv or json"),
    threads: Optional[int] = typer.Option(None, "--threads", "-t", help="Worker threads"),
    size_cap: Optional[int] = typer.Option(None, "--size-cap", help="Override the configured size cap"),
):
    """Lowest energy gaps over a grid of the control parameter."""
    register_exception_handler()
    spec = ModelSpec.spin1(size) if kind == ModelKind.SPIN1_SMA else ModelSpec.xxz(size, zeta_z)
    try:
        fmt = resolve_format(format)
        spec.validate()
        table = run_spectrum(spec, np.linspace(lambda_min, lambda_max, num), levels=levels, threads=threads, size_cap=size_cap)
        write_table(table, out, fmt)
    except CrithermException as e:
        exit_with_error(e)


def sweep(
    config: Path = typer.Option(..., "--config", "-c", help="Sweep configuration (TOML)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file; defaults to [output].path, else stdout"),
    format: Optional[str] = typer.Option(None, "--format", "-f", help="csv or json; defaults to [output].format"),
    threads: Optional[int] = typer.Option(None, "--threads", "-t", help="Worker threads"),
    size_cap: Optional[int] = typer.Option(None, "--size-cap", help="Override the configured size cap"),
):
    """Evaluate F_Q, SNR and observable sensitivities over a (lambda, T) grid."""
    register_exception_handler()
    try:
        cfg = load_sweep_config(config)
        fmt = resolve_format(format or cfg.output.format)
        path = _output_path(out, cfg.output.path)
        with Timer() as t:
            table = run_sweep(cfg, threads=threads, size_cap=size_cap)
        write_table(table, path, fmt)
    except CrithermException as e:
        exit_with_error(e)
    if path is not None:
        summary = {"rows": len(table), "failed points": table.metadata["n_failed"], "diagonalizations": table.metadata["n_diagonalizations"]}
        if "lambda_c" in table.metadata:
            summary[f"{cfg.model.control_symbol}_c"] = table.metadata["lambda_c"]
            summary["Delta_min"] = table.metadata["delta_min"]
        summary["runtime (s)"] = t.elapsed
        print_summary("Sweep", summary)


def scaling(
    config: Path = typer.Option(..., "--config", "-c", help="Sweep configuration (TOML) with a [scaling] section"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file; printed to stdout when omitted"),
    format: Optional[str] = typer.Option(None, "--format", "-f", help="csv or json"),
    threads: Optional[int] = typer.Option(None, "--threads", "-t", help="Worker threads"),
    size_cap: Optional[int] = typer.Option(None, "--size-cap", help="Override the configured size cap"),
):
    """Finite-size scaling curves and their collapse residuals."""
    register_exception_handler()
    try:
        cfg = load_sweep_config(config)
        if cfg.scaling is None:
            raise BadConfigException("missing [scaling] section", key_path="scaling")
        fmt = resolve_format(format or cfg.output.format)
        table, collapses = run_scaling(cfg, threads=threads, size_cap=size_cap)
        write_table(table, out, fmt)
    except CrithermException as e:
        exit_with_error(e)
    if out is not None:
        print_summary("Collapse residuals", {q.value: r.residual for q, r in collapses.items()})


def reproduce(
    figure: FigureId = typer.Argument(..., help="Figure whose datasets to regenerate"),
    out: Path = typer.Option(Path("results"), "--out", "-o", help="Output directory"),
    format: Optional[str] = typer.Option(None, "--format", "-f", help="csv or json"),
    threads: Optional[int] = typer.Option(None, "--threads", "-t", help="Worker threads"),
    size_cap: Optional[int] = typer.Option(None, "--size-cap", help="Override the configured size cap"),
):
    """Regenerate every dataset behind one figure with its documented defaults."""
    register_exception_handler()
    print_header()
    try:
        fmt = resolve_format(format)
    except CrithermException as e:
        exit_with_error(e)
    out.mkdir(parents=True, exist_ok=True)
    logger.open_log_file(out / "critherm.log")
    try:
        with Timer() as t:
            tables = reproduce_figure(figure, threads=threads, size_cap=size_cap)
        write_tables(tables, out, fmt)
    except CrithermException as e:
        exit_with_error(e)
    finally:
        logger.close_log_file()
    console.print(f"\n:white_check_mark: [bold green]{figure.value}: {len(tables)} datasets in {t.elapsed:.2f}s[/bold green]")
