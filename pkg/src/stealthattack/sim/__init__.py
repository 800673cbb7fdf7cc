"""Seeded Monte Carlo of the attacked remote-estimation loop."""

from ._kernels import BACKENDS, HAVE_NUMBA, default_backend
from .montecarlo import (
    RunAccumulators,
    SimConfig,
    SimResult,
    ZtildeReport,
    empirical_ztilde_stats,
    monte_carlo_eta,
    simulate_run,
)
from .rng import RNG_FAMILY

__all__ = [
    "BACKENDS",
    "HAVE_NUMBA",
    "RNG_FAMILY",
    "RunAccumulators",
    "SimConfig",
    "SimResult",
    "ZtildeReport",
    "default_backend",
    "empirical_ztilde_stats",
    "monte_carlo_eta",
    "simulate_run",
]
