from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd
import typer

from critherm.cli.impl.common import exit_with_error, print_summary, register_exception_handler, resolve_format, write_table
from critherm.design import BaselineKind, baseline_peak, baseline_qfi, noise_report, optimal_gap
from critherm.exceptions import CrithermException, InvalidArgumentException
from critherm.harness.table import ResultTable


def optimal_gap_cmd(
    m: List[int] = typer.Option([1, 2, 5], "--m", "-m", help="Degeneracy of the excited level (repeatable)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file; printed to stdout when omitted"),
    format: Optional[str] = typer.Option(None, "--format", "-f", help="csv or json"),
):
    """Optimal gap Delta_max / T and the maximal T^2 F_Q for an m-fold excited level."""
    register_exception_handler()
    try:
        fmt = resolve_format(format)
        if any(v < 1 for v in m):
            raise InvalidArgumentException("m must be at least 1", param="--m")
        rows = []
        for value in m:
            design = optimal_gap(value)
            rows.append({"m": design.m, "x_star": design.x_star, "chi_max": design.chi_max, "residual": design.residual})
        write_table(ResultTable(data=pd.DataFrame(rows), metadata={"name": "optimal_gap"}), out, fmt)
    except CrithermException as e:
        exit_with_error(e)


def baseline(
    kind: BaselineKind = typer.Option(BaselineKind.GENERIC, "--kind", "-k", help="Ladder variant"),
    coupling: float = typer.Option(..., "--coupling", help="Level spacing g, quadratic Zeeman q or transverse field h_x"),
    t_min: float = typer.Option(0.01, "--t-min", help="Lowest temperature"),
    t_max: float = typer.Option(2.0, "--t-max", help="Highest temperature"),
    num: int = typer.Option(100, "--num", "-n", help="Number of temperatures (log spaced)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file; printed to stdout when omitted"),
    format: Optional[str] = typer.Option(None, "--format", "-f", help="csv or json"),
):
    """QFI of the non-interacting counterpart and its maximum F_Q^inf."""
    register_exception_handler()
    try:
        fmt = resolve_format(format)
        temps = np.geomspace(t_min, t_max, num)
        t_star, f_inf = baseline_peak(kind, coupling)
        data = pd.DataFrame({"T": temps, "f_q": baseline_qfi(kind, coupling, temps)})
        table = ResultTable(data=data, metadata={"name": "baseline", "kind": kind.value, "coupling": coupling, "T_star": t_star, "f_q_inf": f_inf})
        write_table(table, out, fmt)
    except CrithermException as e:
        exit_with_error(e)
    if out is not None:
        print_summary("Baseline", {"T*": t_star, "F_Q^inf": f_inf})


def noise(
    m: List[int] = typer.Option([2, 4, 10], "--m", "-m", help="Degeneracy of the excited level (repeatable)"),
    sigma_min: float = typer.Option(0.01, "--sigma-min", help="Smallest sigma / T"),
    sigma_max: float = typer.Option(2.0, "--sigma-max", help="Largest sigma / T"),
    num: int = typer.Option(60, "--num", "-n", help="Number of sigma / T values (log spaced)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file; printed to stdout when omitted"),
    format: Optional[str] = typer.Option(None, "--format", "-f", help="csv or json"),
):
    """Fisher information under Gaussian detection noise, numeric next to both closed-form readings."""
    register_exception_handler()
    try:
        fmt = resolve_format(format)
        if any(v < 2 for v in m):
            raise InvalidArgumentException("m must be at least 2", param="--m")
        if not 0 < sigma_min < sigma_max:
            raise InvalidArgumentException("need 0 < sigma-min < sigma-max", param="--sigma-min")
        report = noise_report(m, np.geomspace(sigma_min, sigma_max, num))
        write_table(ResultTable(data=report, metadata={"name": "noise", "ground_truth": "numeric_ratio"}), out, fmt)
    except CrithermException as e:
        exit_with_error(e)
