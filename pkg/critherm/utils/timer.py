import time

from critherm.utils import logger


class Timer:
    def __init__(self, print_desc=None):
        self.print_desc = print_desc
        self.start = time.perf_counter()
        self.end = None

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_typ, exc_val, exc_tb):
        self.end = time.perf_counter()
        if self.print_desc:
            logger.fs.debug(f"{self.print_desc}: {self.elapsed:.2f}s")

    @property
    def elapsed(self):
        if self.end is None:
            return time.perf_counter() - self.start
        else:
            return self.end - self.start
