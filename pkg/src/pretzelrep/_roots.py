"""Bracketed root finding shared by the locus and boundary-path solvers."""

from __future__ import annotations

from typing import Callable

from .errors import NoConvergence


def bisect(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    rtol: float,
    max_iter: int,
    f_lo: float | None = None,
) -> float:
    """Bisect ``func`` on ``[lo, hi]``, assuming a sign change.

    Only interior midpoints are evaluated, so ``func`` may be undefined at
    the endpoints as long as ``f_lo`` carries the sign at ``lo``.  Stops
    when the bracket is narrower than ``rtol`` times its magnitude, or when
    the midpoint is no longer representable between the ends.
    """
    if f_lo is None:
        f_lo = func(lo)
    lo_positive = f_lo > 0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * max(abs(lo), abs(hi)) or mid <= lo or mid >= hi:
            return mid
        f_mid = func(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == lo_positive:
            lo = mid
        else:
            hi = mid
    raise NoConvergence(f"bisection did not reach rtol={rtol} in {max_iter} steps")


def march_bracket(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    step: float,
) -> tuple[float, float, float, float] | None:
    """Scan ``lo, lo+step, ..., hi`` for the first sign change.

    Returns ``(x0, x1, f0, f1)`` with ``f0`` and ``f1`` of opposite sign
    (or ``f1 == 0``), or ``None`` if the scan finds none.
    """
    n = max(1, int((hi - lo) / step + 0.5))
    x0 = lo
    f0 = func(x0)
    if f0 == 0:
        return x0, x0, f0, f0
    for i in range(1, n + 1):
        x1 = hi if i == n else lo + i * (hi - lo) / n
        f1 = func(x1)
        if f1 == 0 or (f1 > 0) != (f0 > 0):
            return x0, x1, f0, f1
        x0, f0 = x1, f1
    return None
