from concurrent.futures import ThreadPoolExecutor, as_completed

from rich import print as rprint
from rich.progress import Progress, SpinnerColumn, TextColumn, BarColumn, MofNCompleteColumn, TimeElapsedColumn
from typing import Callable, Iterable, List, Tuple, Union, TypeVar

from critherm.utils import logger
from critherm.utils.timer import Timer

T = TypeVar("T")
R = TypeVar("R")


def do_parallel(
    func: Callable[[T], R], args_list: Iterable[T], n=-1, desc=None, return_args=True, spinner=False, spinner_persist=False
) -> List[Union[Tuple[T, R], R]]:
    """Run func over args_list on a thread pool. Results come back in the order of args_list, whatever order they finish in."""
    args_list = list(args_list)
    if len(args_list) == 0:
        return []

    if n == -1:
        n = len(args_list)
    n = max(1, min(n, len(args_list)))

    def wrapped_fn(idx_args):
        idx, args = idx_args
        try:
            return idx, func(args)
        except Exception as e:
            logger.fs.error(f"Error running {getattr(func, '__name__', func)}: {e}")
            raise

    results = [None] * len(args_list)
    with Progress(
        SpinnerColumn(), TextColumn(desc or ""), BarColumn(), MofNCompleteColumn(), TimeElapsedColumn(), disable=not spinner, transient=True
    ) as progress:
        progress_task = progress.add_task("", total=len(args_list))
        with Timer() as t:
            if n == 1:
                for idx, args in enumerate(args_list):
                    results[idx] = wrapped_fn((idx, args))[1]
                    progress.update(progress_task, advance=1)
            else:
                with ThreadPoolExecutor(max_workers=n) as executor:
                    future_list = [executor.submit(wrapped_fn, (idx, args)) for idx, args in enumerate(args_list)]
                    for future in as_completed(future_list):
                        idx, result = future.result()
                        results[idx] = result
                        progress.update(progress_task, advance=1)
    if spinner_persist:
        rprint(f"[bold green]✓[/] [bright_black]{desc} ({len(results)}/{len(args_list)}) in {t.elapsed:.2f}s[/]")
    return list(zip(args_list, results)) if return_args else results
