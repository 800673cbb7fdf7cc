"""KL-divergence stealthiness of the linear attack z~_k = T z~_{k-1} + S z_k.

All logarithms are natural, so rates are in nats per step.  Only T^2 and S^2
matter here; the attack object is duck-typed (anything with ``t_coef`` and
``s_coef``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import DegenerateAttackError, InfeasibleAttackError, InvalidParametersError
from .numerics import Bracket, bisect

# log(u) stays finite well below this; the small-branch root is never this close to 0
# for budgets representable in double precision.
_U_FLOOR = 1e-300


@dataclass(frozen=True)
class StealthBudget:
    epsilon: float

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0):
            raise InvalidParametersError(f"epsilon must be finite and >= 0, got {self.epsilon!r}")


@dataclass(frozen=True)
class SBounds:
    s_small: float
    s_large: float


def as_epsilon(budget: StealthBudget | float) -> float:
    if isinstance(budget, StealthBudget):
        return budget.epsilon
    return StealthBudget(float(budget)).epsilon


def _check_attack(t: float, s: float) -> None:
    if not abs(t) < 1:
        raise InfeasibleAttackError(f"|T| = {abs(t)} >= 1: no finite KL rate (attack is not stealthy)")
    if s == 0:
        raise DegenerateAttackError("S = 0: transmitted sequence is identically zero")


def kl_rate_ts(t: float, s: float) -> float:
    _check_attack(t, s)
    s2 = s * s
    return -0.5 - 0.5 * math.log(s2) + s2 / (2.0 * (1.0 - t * t))


def kl_rate(attack) -> float:
    """Limit of D(z~_1^k || z_1^k) / k for a stationary linear attack."""
    return kl_rate_ts(attack.t_coef, attack.s_coef)


def finite_horizon_kl(attack, ss, k: int) -> float:
    """Exact Gaussian KL divergence D(z~_1^k || z_1^k) with z~_0 = 0.

    z~ is a causal unit-lower-triangular transform of S z (times a scalar), so
    log det Cov(z~_1^k) = k log(S^2 sigma_z^2); the trace term only needs the
    marginal variances S^2 sigma_z^2 (1 - T^{2i}) / (1 - T^2).  ``ss`` enters
    only through sigma_z^2, which cancels; it is accepted so callers can pass
    the steady state they simulate with.
    """
    t, s = attack.t_coef, attack.s_coef
    _check_attack(t, s)
    if k < 1:
        raise ValueError(f"horizon must be >= 1, got {k}")
    if not ss.sigma_z2 > 0:
        raise ValueError("innovation variance must be positive")
    t2, s2 = t * t, s * s
    i = np.arange(1, k + 1, dtype=float)
    if t2 > 0:
        build_up = -np.expm1(i * math.log(t2))  # 1 - T^{2i}
    else:
        build_up = np.ones(k)
    var_ratio = s2 * build_up / (1.0 - t2)  # Var(z~_i) / sigma_z^2
    return float(0.5 * np.sum(var_ratio - 1.0 - math.log(s2)))


def max_feasible_T(budget: StealthBudget | float) -> float:
    eps = as_epsilon(budget)
    return math.sqrt(-math.expm1(-2.0 * eps))


def boundary_residual(s: float, t: float, budget: StealthBudget | float) -> float:
    """KL rate minus budget; zero on the constraint boundary."""
    return kl_rate_ts(t, s) - as_epsilon(budget)


def solve_s_bounds(t: float, budget: StealthBudget | float) -> SBounds:
    """Positive roots of the KL-rate = epsilon equation for fixed T.

    In u = S^2 the equation reads u - m ln u = (1 + 2 eps) m with m = 1 - T^2.
    The left side is convex with its minimum at u = m, so each root is found
    by bisection on one monotone branch.
    """
    eps = as_epsilon(budget)
    t_max = max_feasible_T(eps)
    if abs(t) > t_max * (1 + 1e-12) + 1e-15:
        raise InfeasibleAttackError(f"|T| = {abs(t)} exceeds sqrt(1 - e^(-2 eps)) = {t_max}")
    m = 1.0 - t * t
    rhs = (1.0 + 2.0 * eps) * m

    def g(u: float) -> float:
        return u - m * math.log(u) - rhs

    g_min = g(m)
    if g_min >= 0 or eps == 0:
        # touching the minimum: both roots coincide at u = m
        root = math.sqrt(m)
        return SBounds(root, root)

    # upper branch: g(m) < 0, g grows like u, so rhs + m*ln(hi) bracket terminates quickly
    hi = max(2.0 * m, 2.0 * rhs)
    while g(hi) <= 0:
        hi *= 2.0
    u_large = bisect(g, Bracket.of(g, m, hi), tol=TOL.root_abs * m)
    # lower branch: the root is about exp(-(rhs - u)/m) >= exp(-rhs/m)
    lo = max(_U_FLOOR, 0.5 * math.exp(-(1.0 + 2.0 * eps)))
    while g(lo) <= 0:
        lo *= 0.5
    u_small = bisect(g, Bracket.of(g, lo, m), tol=TOL.root_abs * lo)
    return SBounds(math.sqrt(u_small), math.sqrt(u_large))
