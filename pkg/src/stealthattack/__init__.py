"""Optimal linear stealthy attacks on scalar remote state estimation.

The attacker replaces the transmitted Kalman innovation ``z_k`` by
``z~_k = T z~_{k-1} + S z_k`` and tries to maximize the remote estimator's
error subject to a KL-divergence-rate budget.  Closed-form designs live in
:mod:`stealthattack.attack`; :mod:`stealthattack.sim` checks them by Monte Carlo.
"""

from .attack import (
    AttackParams,
    AttackSolution,
    dj1_ds,
    eta_of,
    f_of_s,
    j1_of_s,
    objective_j,
    solve_baseline_t0,
    solve_optimal,
    solve_strict,
)
from .errors import (
    DegenerateAttackError,
    DegenerateSystemError,
    DomainError,
    InfeasibleAttackError,
    InvalidBracketError,
    InvalidParametersError,
    StealthAttackError,
)
from .model import DEFAULT_SYSTEM, SteadyState, SystemParams, degradation_scale, solve_riccati
from .sim import SimConfig, SimResult, empirical_ztilde_stats, monte_carlo_eta, simulate_run
from .stealth import (
    SBounds,
    StealthBudget,
    finite_horizon_kl,
    kl_rate,
    max_feasible_T,
    solve_s_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "AttackParams",
    "AttackSolution",
    "DEFAULT_SYSTEM",
    "DegenerateAttackError",
    "DegenerateSystemError",
    "DomainError",
    "InfeasibleAttackError",
    "InvalidBracketError",
    "InvalidParametersError",
    "SBounds",
    "SimConfig",
    "SimResult",
    "StealthAttackError",
    "StealthBudget",
    "SteadyState",
    "SystemParams",
    "degradation_scale",
    "dj1_ds",
    "empirical_ztilde_stats",
    "eta_of",
    "f_of_s",
    "finite_horizon_kl",
    "j1_of_s",
    "kl_rate",
    "max_feasible_T",
    "monte_carlo_eta",
    "objective_j",
    "simulate_run",
    "solve_baseline_t0",
    "solve_optimal",
    "solve_riccati",
    "solve_s_bounds",
    "solve_strict",
]
