"""Degradation objective and attack design.

J(T, S) is the stationary excess a-priori error of the remote estimator in
units of a^2 K^2 sigma_z^2 / (1 - a^2), so eta = 1 + J * c0 with c0 from
:func:`stealthattack.model.degradation_scale`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .config import TOL
from .errors import DegenerateSystemError, DomainError, InfeasibleAttackError
from .model import SteadyState, SystemParams, degradation_scale, solve_riccati
from .numerics import bisect, grid_sign_scan
from .stealth import StealthBudget, as_epsilon, kl_rate, solve_s_bounds

STRATEGIES = ("strict", "optimal", "baseline-t0", "custom")


@dataclass(frozen=True)
class AttackParams:
    t_coef: float
    s_coef: float


@dataclass(frozen=True)
class AttackSolution:
    params: AttackParams
    j_value: float
    eta_analytic: float
    kl: float
    strategy: str

    def as_flat_dict(self) -> dict:
        d = asdict(self)
        p = d.pop("params")
        return {"T": p["t_coef"], "S": p["s_coef"], "J": d["j_value"], "eta": d["eta_analytic"],
                "kl": d["kl"], "strategy": d["strategy"]}


NO_ATTACK = AttackParams(0.0, 1.0)
STRICT_ATTACK = AttackParams(0.0, -1.0)


def objective_j_ts(t: float, s: float, a: float) -> float:
    if not abs(t) < 1:
        raise InfeasibleAttackError(f"|T| = {abs(t)} >= 1")
    t2 = t * t
    one_m_t2 = 1.0 - t2
    return ((1.0 - s) ** 2 + t2 * s * s / one_m_t2
            - 2.0 * a * t * s * (1.0 - s - t2) / (one_m_t2 * (1.0 - a * t)))


def objective_j(attack: AttackParams, a: float) -> float:
    """(1-S)^2 + T^2 S^2/(1-T^2) - 2aTS(1-S-T^2)/((1-T^2)(1-aT))."""
    return objective_j_ts(attack.t_coef, attack.s_coef, a)


# --- constraint boundary parameterized by S ------------------------------------------

def s_bracket(budget: StealthBudget | float) -> tuple[float, float]:
    """[-S_omax, -e^(-eps)]: negative large-magnitude branch of the KL boundary."""
    eps = as_epsilon(budget)
    return -solve_s_bounds(0.0, eps).s_large, -math.exp(-eps)


def _log_term(s: float, eps: float) -> float:
    # 2 eps + 1 + ln S^2
    return 2.0 * eps + 1.0 + math.log(s * s)


def _check_in_bracket(s: float, eps: float) -> None:
    lo, hi = s_bracket(eps)
    slack = TOL.domain_slack * max(1.0, abs(lo))
    if not (lo - slack <= s <= hi + slack):
        raise DomainError(f"S = {s} outside boundary bracket [{lo}, {hi}] for eps = {eps}")


def f_of_s(s: float, budget: StealthBudget | float) -> float:
    """Non-negative T placing (T, S) on the KL boundary."""
    eps = as_epsilon(budget)
    _check_in_bracket(s, eps)
    radicand = 1.0 - s * s / _log_term(s, eps)
    return math.sqrt(max(radicand, 0.0))  # clamp rounding at the T = 0 end


def j1_of_s(s: float, budget: StealthBudget | float, a: float) -> float:
    """J restricted to the boundary, T = f(S)."""
    eps = as_epsilon(budget)
    f = f_of_s(s, eps)
    d = _log_term(s, eps)
    denom = 1.0 - a * f
    return -(d - 1.0) - 2.0 * s / denom + 2.0 * d / denom


def dj1_ds(s: float, budget: StealthBudget | float, a: float) -> float:
    """Closed-form dJ1/dS.  Undefined where f(S) = 0 (the -S_omax end)."""
    eps = as_epsilon(budget)
    f = f_of_s(s, eps)
    if f == 0.0:
        raise DomainError(f"dJ1/dS diverges at S = {s} (T = f(S) = 0)")
    d = _log_term(s, eps)
    f_prime = -(s * d - s) / (d * d) / f
    denom2 = s * (1.0 - a * f) ** 2
    return (-2.0 * (a * a * f * f + s - a * s * f - 1.0) / denom2
            - 2.0 * (s * s - s * d) * a * f_prime / denom2)


# --- strategies ----------------------------------------------------------------------

def _steady(system: SystemParams) -> tuple[SteadyState, float]:
    ss = solve_riccati(system)
    return ss, degradation_scale(ss, system)


def eta_of(attack: AttackParams, ss: SteadyState, params: SystemParams) -> float:
    return 1.0 + objective_j(attack, params.a) * degradation_scale(ss, params)


def evaluate(attack: AttackParams, system: SystemParams, strategy: str = "custom") -> AttackSolution:
    ss, c0 = _steady(system)
    j = objective_j(attack, system.a)
    return AttackSolution(attack, j, 1.0 + j * c0, kl_rate(attack), strategy)


def solve_strict(system: SystemParams) -> AttackSolution:
    """Sign-flip attack (0, -1): the only strictly stealthy pair that degrades."""
    return evaluate(STRICT_ATTACK, system, "strict")


def solve_baseline_t0(budget: StealthBudget | float, system: SystemParams) -> AttackSolution:
    """Best memoryless (T = 0) attack within the budget."""
    eps = as_epsilon(budget)
    s = -solve_s_bounds(0.0, eps).s_large
    return evaluate(AttackParams(0.0, s), system, "baseline-t0")


def optimal_s(eps: float, a_abs: float, grid_size: int = TOL.grid_size) -> float:
    """Maximizer of J1 over the boundary bracket for a > 0.

    Every sign change of dJ1/dS on a uniform grid is refined by bisection;
    the winner is picked among these stationary points and both bracket ends.
    """
    lo, hi = s_bracket(eps)
    candidates = [lo, hi]
    # dJ1/dS -> +inf at lo; start the scan just inside
    scan_lo = lo + 1e-9 * (hi - lo)

    def deriv(s: float) -> float:
        return dj1_ds(s, eps, a_abs)

    for br in grid_sign_scan(deriv, scan_lo, hi, grid_size):
        candidates.append(bisect(deriv, br, tol=TOL.root_abs))
    values = [j1_of_s(s, eps, a_abs) for s in candidates]
    best = max(range(len(candidates)), key=values.__getitem__)
    return candidates[best]


def solve_optimal(budget: StealthBudget | float, system: SystemParams,
                  grid_size: int = TOL.grid_size) -> AttackSolution:
    """Best linear attack (T, S) with KL rate <= eps.

    The optimum sits on the KL boundary; T carries the sign of a, since
    J(T, S; a) = J(-T, S; -a).
    """
    eps = as_epsilon(budget)
    a = system.a
    if a == 0:
        raise DegenerateSystemError("a = 0: eta = 1 for every attack")
    if eps == 0:
        return evaluate(STRICT_ATTACK, system, "optimal")
    s = optimal_s(eps, abs(a), grid_size)
    t = math.copysign(f_of_s(s, eps), a)
    return evaluate(AttackParams(t, s), system, "optimal")
