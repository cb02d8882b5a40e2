import json
import sys
import traceback as tb
from pathlib import Path
from typing import Dict, Optional

import typer
from rich import print as rprint
from rich.console import Console
from rich.table import Table

from critherm.config_paths import critherm_config
from critherm.exceptions import CrithermException, InvalidArgumentException
from critherm.harness.emit import emit, to_csv_text, to_json_obj
from critherm.harness.table import ResultTable
from critherm.utils import logger

console = Console()


def print_header():
    header = r"""          _ _   _
 ___ _ __(_) |_| |__   ___ _ __ _ __ ___
/ __| '__| | __| '_ \ / _ \ '__| '_ ` _ \
| (__| |  | | |_| | | |  __/ |  | | | | | |
\___|_|  |_|\__|_| |_|\___|_|  |_| |_| |_|"""
    console.print(f"[bright_black]{header}[/bright_black]\n")


def exit_with_error(e: CrithermException, code: int = 1):
    """Human-readable message on stdout, one machine-readable JSON object on stderr."""
    logger.fs.error(f"{type(e).__name__}: {e}")
    console.print(e.pretty_print_str())
    typer.echo(json.dumps(e.to_error_dict(), default=str), err=True)
    raise typer.Exit(code=code)


# pretty exception handler with rich
def register_exception_handler():
    def exception_handler(exception_type, exception, traceback, debug_hook=sys.excepthook):
        # write full traceback information to log file
        logger.fs.error(f"Uncaught exception: {exception_type.__name__}: {exception}")
        logger.fs.error("Traceback:\n" + "".join(tb.format_exception(exception_type, exception, traceback)))
        if isinstance(exception, CrithermException):
            print(json.dumps(exception.to_error_dict(), default=str), file=sys.stderr)
        else:
            print(json.dumps({"error": exception_type.__name__, "message": str(exception), "details": {}}), file=sys.stderr)
            rprint(f"[red][bold]Uncaught exception:[/bold] ({exception_type.__name__}) {exception}[/red]")
            typer.secho("Please check the log file for more information, and include it if reporting an issue.", fg=typer.colors.YELLOW)
        sys.exit(1)

    sys.excepthook = exception_handler


def resolve_format(format: Optional[str]) -> str:
    fmt = format or critherm_config.get_flag("output_format")
    if fmt not in ("csv", "json"):
        raise InvalidArgumentException(f"unknown format {fmt!r} (expected csv or json)", param="--format")
    return fmt


def write_table(table: ResultTable, out: Optional[Path], format: str):
    """Write to out, or print to stdout when no path is given."""
    if out is None:
        if format == "csv":
            typer.echo(to_csv_text(table), nl=False)
        else:
            typer.echo(json.dumps(to_json_obj(table), indent=2, allow_nan=False))
        return
    path = emit(table, out, format)
    console.print(f"[bright_black]Wrote {len(table)} rows to[/bright_black] [bold]{path}[/bold]")


def write_tables(tables: Dict[str, ResultTable], out_dir: Path, format: str):
    for name, table in tables.items():
        write_table(table, out_dir / f"{name}.{format}", format)


def print_summary(title: str, rows: Dict[str, object]):
    table = Table(title=title, show_header=False)
    table.add_column(style="bold blue")
    table.add_column(style="green")
    for key, value in rows.items():
        table.add_row(key, f"{value:.6g}" if isinstance(value, float) else str(value))
    console.print(table)
