"""Safeguarded Newton iteration on a sign-change bracket."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

from .errors import AccuracyError


@dataclass(frozen=True)
class RootResult:
    x: float
    fx: float
    lo: float
    hi: float
    iterations: int


def newton_bisect(
    fn: Callable[[float], Tuple[float, float]],
    lo: float,
    hi: float,
    ftol: float,
    max_iter: int = 300,
) -> RootResult:
    """Root of ``fn`` in [lo, hi], where ``fn(x)`` returns ``(f, f')``.

    Requires f(lo) * f(hi) < 0. Newton steps that leave the bracket or fail
    to halve it fall back to bisection; bisection is geometric while the
    bracket spans more than a factor 4 (both ends positive).
    Stops when |f| < ftol.
    """
    flo, _ = fn(lo)
    fhi, _ = fn(hi)
    if flo == 0.0:
        return RootResult(lo, 0.0, lo, lo, 0)
    if fhi == 0.0:
        return RootResult(hi, 0.0, hi, hi, 0)
    if flo * fhi > 0:
        raise ValueError(f"no sign change on [{lo}, {hi}]: f = {flo}, {fhi}")
    rising = fhi > 0
    x = math.sqrt(lo * hi) if lo > 0 and hi > 4 * lo else 0.5 * (lo + hi)
    best = (math.inf, x)
    for it in range(1, max_iter + 1):
        f, df = fn(x)
        if abs(f) < best[0]:
            best = (abs(f), x)
        if abs(f) < ftol:
            return RootResult(x, f, lo, hi, it)
        if (f > 0) == rising:
            hi = x
        else:
            lo = x
        width = hi - lo
        if width <= 4 * math.ulp(max(abs(lo), abs(hi))):
            break
        step_ok = False
        if df != 0.0 and math.isfinite(df):
            xn = x - f / df
            step_ok = lo < xn < hi and abs(xn - x) < 0.5 * width
        if step_ok:
            x = xn
        elif lo > 0 and hi > 4 * lo:
            x = math.sqrt(lo * hi)
        else:
            x = 0.5 * (lo + hi)
    raise AccuracyError(
        f"|f| < {ftol} not reached; best |f| = {best[0]:.3g} at x = {best[1]!r}",
        best=best[1],
        error_estimate=best[0],
    )
