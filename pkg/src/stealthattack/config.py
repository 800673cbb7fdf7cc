"""Tolerances and runtime switches shared across modules."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    riccati_rel: float = 1e-10
    fixed_point_rel: float = 1e-8
    root_abs: float = 1e-12
    boundary_residual: float = 1e-10
    kl_active: float = 1e-9
    domain_slack: float = 1e-12
    grid_size: int = 2048


TOL = Tolerances()

# Set STEALTHATTACK_NUMBA=0 to force the pure-numpy simulation kernel.
NUMBA_ENV = "STEALTHATTACK_NUMBA"
THREADS_ENV = "STEALTHATTACK_THREADS"


def numba_requested() -> bool:
    return os.environ.get(NUMBA_ENV, "1").strip().lower() not in ("0", "false", "no", "off")


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
