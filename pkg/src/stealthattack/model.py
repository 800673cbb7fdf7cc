"""Scalar plant/sensor model and its steady-state Kalman filter.

    x_{k+1} = a x_k + w_k,   w_k ~ N(0, q)
    y_k     = c x_k + v_k,   v_k ~ N(0, r)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import TOL
from .errors import InvalidParametersError

_MAX_FIXED_POINT_ITERS = 100_000


@dataclass(frozen=True)
class SystemParams:
    a: float
    c: float
    q: float
    r: float

    def __post_init__(self):
        for name in ("a", "c", "q", "r"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidParametersError(f"{name} must be finite, got {v!r}")
        if not abs(self.a) < 1:
            raise InvalidParametersError(
                f"|a| = {abs(self.a)} >= 1: the plant must be stable (spectral radius < 1)"
            )
        if not self.r > 0:
            raise InvalidParametersError(f"r = {self.r}: measurement-noise variance must be > 0")
        if self.q < 0:
            raise InvalidParametersError(f"q = {self.q}: process-noise variance must be >= 0")
        if self.c == 0 and self.q > 0:
            raise InvalidParametersError("c = 0 with q > 0: the state is not observed (detectability)")


@dataclass(frozen=True)
class SteadyState:
    p: float  # a-priori error variance
    k_gain: float
    sigma_z2: float  # innovation variance c^2 p + r


DEFAULT_SYSTEM = SystemParams(a=0.4, c=1.0, q=0.2, r=0.5)


def riccati_map(p: float, params: SystemParams) -> float:
    a, c, q, r = params.a, params.c, params.q, params.r
    return a * a * p * r / (c * c * p + r) + q


def _positive_root(params: SystemParams) -> float:
    # c^2 p^2 + (r - c^2 q - a^2 r) p - q r = 0
    a, c, q, r = params.a, params.c, params.q, params.r
    c2 = c * c
    if c2 == 0.0:
        return q / (1.0 - a * a)
    b = r - c2 * q - a * a * r
    disc = math.sqrt(b * b + 4.0 * c2 * q * r)
    if b > 0:
        return 2.0 * q * r / (b + disc)  # avoids cancellation
    return (-b + disc) / (2.0 * c2)


def _iterate_fixed_point(params: SystemParams) -> float:
    p = params.q
    for _ in range(_MAX_FIXED_POINT_ITERS):
        nxt = riccati_map(p, params)
        if abs(nxt - p) <= 1e-15 * max(1.0, nxt):
            return nxt
        p = nxt
    return p


def solve_riccati(params: SystemParams) -> SteadyState:
    """Steady-state a-priori variance, gain and innovation variance.

    The positive quadratic root is taken as the answer; an independent
    fixed-point iteration of the Riccati map has to land on the same value.
    """
    p = _positive_root(params)
    scale = max(1.0, p)
    residual = abs(p - riccati_map(p, params))
    if residual > TOL.riccati_rel * scale:
        raise ArithmeticError(f"Riccati residual {residual:.3e} exceeds tolerance at p={p!r}")
    p_iter = _iterate_fixed_point(params)
    if abs(p_iter - p) > TOL.fixed_point_rel * scale:
        raise ArithmeticError(f"fixed-point iteration gave {p_iter!r}, quadratic root {p!r}")
    c, r = params.c, params.r
    sigma_z2 = c * c * p + r
    return SteadyState(p=p, k_gain=p * c / sigma_z2, sigma_z2=sigma_z2)


def degradation_scale(ss: SteadyState, params: SystemParams) -> float:
    """Multiplier c0 with eta = 1 + J * c0.

    c0 = a^2 K^2 sigma_z^2 / ((1 - a^2) p).  When p = 0 (q = 0) the gain is
    zero and c0 is taken as its limit, 0.
    """
    if ss.p == 0.0:
        return 0.0
    a = params.a
    return a * a * ss.k_gain**2 * ss.sigma_z2 / ((1.0 - a * a) * ss.p)
