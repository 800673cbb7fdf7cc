"""Bracketing scalar root finding.

Plain bisection on purpose: the functions solved here have square-root
singularities at their bracket ends, where open methods misbehave.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import TOL
from .errors import InvalidBracketError

ScalarFn = Callable[[float], float]


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidBracketError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def of(cls, f: ScalarFn, lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, f(lo), f(hi))


def max_bisect_iterations(width: float, tol: float) -> int:
    if width <= tol:
        return 0
    return math.ceil(math.log2(width / tol))


def bisect(f: ScalarFn, bracket: Bracket, tol: float = TOL.root_abs) -> float:
    """Root of ``f`` inside ``bracket`` to absolute width ``tol``.

    The midpoint rule is fixed, so the result is a deterministic function of
    (f, bracket, tol).  Exact zeros at an endpoint are returned immediately.
    """
    if tol <= 0:
        raise InvalidBracketError("tol must be positive")
    lo, hi, f_lo, f_hi = bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi
    if np.isnan(f_lo) or np.isnan(f_hi):
        raise InvalidBracketError("function is NaN at a bracket endpoint")
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise InvalidBracketError(
            f"no sign change on [{lo}, {hi}]: f(lo)={f_lo!r}, f(hi)={f_hi!r}"
        )
    for _ in range(max_bisect_iterations(hi - lo, tol)):
        mid = lo + 0.5 * (hi - lo)
        if mid <= lo or mid >= hi:
            break  # interval at float resolution
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return lo + 0.5 * (hi - lo)


def grid_sign_scan(f: ScalarFn, lo: float, hi: float, n: int = TOL.grid_size) -> list[Bracket]:
    """Brackets around every sign change of ``f`` on an ``n``-point uniform grid.

    A grid value that is exactly zero yields a bracket ending (or starting) at
    that point; duplicates from a zero shared by two cells are collapsed.
    """
    if not lo < hi:
        raise InvalidBracketError(f"scan needs lo < hi, got [{lo}, {hi}]")
    if n < 2:
        raise InvalidBracketError("scan needs at least 2 grid points")
    xs = np.linspace(lo, hi, n)
    fs = np.array([f(float(x)) for x in xs])
    out: list[Bracket] = []
    for i in range(n - 1):
        a, b = fs[i], fs[i + 1]
        if np.isnan(a) or np.isnan(b):
            continue
        if a == 0.0 and i > 0 and not np.isnan(fs[i - 1]):
            continue  # already reported by the previous cell
        if a * b <= 0:
            out.append(Bracket(float(xs[i]), float(xs[i + 1]), float(a), float(b)))
    return out
