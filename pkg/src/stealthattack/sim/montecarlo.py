from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ..config import default_threads
from ..errors import DegenerateSystemError, InfeasibleAttackError
from ..model import SteadyState, SystemParams
from ._kernels import N_ACC, default_backend, get_kernel
from .rng import RNG_FAMILY, check_seed, standard_normal_block

BLOCK_RUNS = 1024


@dataclass(frozen=True)
class SimConfig:
    runs: int = 100_000
    horizon: int = 500
    seed: int = 0
    burn_in: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if not 0 <= self.burn_in < self.horizon:
            raise ValueError(f"burn_in must be in [0, horizon), got {self.burn_in}")
        check_seed(self.seed)

    @property
    def window(self) -> int:
        return self.horizon - self.burn_in


@dataclass(frozen=True)
class RunAccumulators:
    """Sums over steps k = burn_in+1 .. horizon of one trajectory."""

    sum_err2: float
    sum_ztilde: float
    sum_ztilde2: float
    sum_ztilde_lag1: float
    steps: int


@dataclass(frozen=True)
class SimResult:
    eta_hat: float
    p_tilde_hat: float
    ztilde_var_hat: float
    ztilde_ac1_hat: float
    stderr_eta: float
    stderr_ztilde_var: float
    stderr_ztilde_ac1: float
    runs: int
    horizon: int
    burn_in: int
    seed: int
    rng: str
    backend: str

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ZtildeReport:
    var_expected: float
    var_hat: float
    var_zscore: float
    ac1_expected: float
    ac1_hat: float
    ac1_zscore: float

    def within(self, z: float = 4.0) -> bool:
        return abs(self.var_zscore) <= z and abs(self.ac1_zscore) <= z


def _kernel_args(params: SystemParams, ss: SteadyState, attack, burn_in: int):
    t, s = float(attack.t_coef), float(attack.s_coef)
    if not abs(t) < 1:
        raise InfeasibleAttackError(f"|T| = {abs(t)} >= 1: attack recursion is unstable")
    sd_x = math.sqrt(params.q / (1.0 - params.a**2))  # stationary state spread
    return (params.a, params.c, ss.k_gain, t, s, sd_x, math.sqrt(params.q),
            math.sqrt(params.r), burn_in)


def simulate_block(params, ss, attack, horizon, seed, first_run, n_runs, burn_in=0, backend=None):
    """Accumulator rows (n_runs x 4) for runs first_run .. first_run+n_runs-1."""
    kernel = get_kernel(backend)
    noise = standard_normal_block(seed, first_run, n_runs, 2 * horizon + 1)
    out = np.empty((n_runs, N_ACC))
    kernel(noise, *_kernel_args(params, ss, attack, burn_in), out)
    return out


def simulate_run(params: SystemParams, ss: SteadyState, attack, horizon: int, run_seed: int,
                 run_index: int = 0, burn_in: int = 0, backend: str | None = None) -> RunAccumulators:
    """One trajectory of plant, sensor filter, attacker and remote estimator.

    Both estimators start at 0, z~_0 = 0, and x_1 is drawn from the stationary
    state distribution N(0, q / (1 - a^2)).
    """
    row = simulate_block(params, ss, attack, horizon, run_seed, run_index, 1, burn_in, backend)[0]
    return RunAccumulators(float(row[0]), float(row[1]), float(row[2]), float(row[3]),
                           horizon - burn_in)


def _stderr(x: np.ndarray) -> float:
    if x.size < 2:
        return math.inf
    return float(np.std(x, ddof=1) / math.sqrt(x.size))


def monte_carlo_eta(params: SystemParams, ss: SteadyState, attack, config: SimConfig,
                    backend: str | None = None, threads: int | None = None) -> SimResult:
    """Monte Carlo estimate of eta = P~ / P and of the z~ moments.

    Per-run time averages are i.i.d. across runs, so standard errors come
    from their spread.  Results are bit-identical for a given config and
    backend regardless of ``threads``.
    """
    if ss.p <= 0:
        raise DegenerateSystemError("p = 0: eta is a ratio of zeros")
    backend = backend or default_backend()
    threads = threads or default_threads()
    starts = list(range(0, config.runs, BLOCK_RUNS))

    def job(r0: int) -> np.ndarray:
        n = min(BLOCK_RUNS, config.runs - r0)
        return simulate_block(params, ss, attack, config.horizon, config.seed, r0, n,
                              config.burn_in, backend)

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(job, starts))
    else:
        blocks = [job(r0) for r0 in starts]
    acc = np.concatenate(blocks) / config.window  # per-run time averages, run order

    err2, mz, mz2, mlag = acc[:, 0], acc[:, 1], acc[:, 2], acc[:, 3]
    p_tilde = float(np.mean(err2))
    mu = float(np.mean(mz))
    var_hat = float(np.mean(mz2)) - mu * mu
    ac1_hat = (float(np.mean(mlag)) - mu * mu) / var_hat
    return SimResult(
        eta_hat=p_tilde / ss.p,
        p_tilde_hat=p_tilde,
        ztilde_var_hat=var_hat,
        ztilde_ac1_hat=ac1_hat,
        stderr_eta=_stderr(err2) / ss.p,
        stderr_ztilde_var=_stderr(mz2),
        # delta method for the ratio of means
        stderr_ztilde_ac1=_stderr(mlag - ac1_hat * mz2) / var_hat,
        runs=config.runs,
        horizon=config.horizon,
        burn_in=config.burn_in,
        seed=config.seed,
        rng=RNG_FAMILY,
        backend=backend,
    )


def empirical_ztilde_stats(result: SimResult, attack, ss: SteadyState) -> ZtildeReport:
    """Compare simulated z~ moments with the stationary AR(1) values."""
    t, s = attack.t_coef, attack.s_coef
    if abs(t) ** (2 * result.horizon) >= 1e-6:
        raise ValueError("horizon too short for the AR(1) transient to die out")
    var_expected = s * s * ss.sigma_z2 / (1.0 - t * t)

    def z(hat, expected, se):
        if math.isinf(se):
            return 0.0  # a single run carries no spread information
        if se == 0:
            return 0.0 if hat == expected else math.copysign(math.inf, hat - expected)
        return (hat - expected) / se

    return ZtildeReport(
        var_expected=var_expected,
        var_hat=result.ztilde_var_hat,
        var_zscore=z(result.ztilde_var_hat, var_expected, result.stderr_ztilde_var),
        ac1_expected=t,
        ac1_hat=result.ztilde_ac1_hat,
        ac1_zscore=z(result.ztilde_ac1_hat, t, result.stderr_ztilde_ac1),
    )
