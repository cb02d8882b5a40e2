import math
from typing import Callable, Tuple

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def golden_section_maximize(f: Callable[[float], float], a: float, b: float, tol: float = 1e-8) -> Tuple[float, float]:
    """
    Golden-section search for the maximum of a unimodal f on [a, b].

    Returns (x_star, f(x_star)) with x_star known to within tol.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = (a + b) / 2
        return x, f(x)

    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc > yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    lo, hi = (a, d) if yc > yd else (c, b)
    x = (lo + hi) / 2
    return x, f(x)
