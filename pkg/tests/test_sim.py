import math

import numpy as np
import pytest

from stealthattack.attack import NO_ATTACK, STRICT_ATTACK, AttackParams, objective_j
from stealthattack.errors import DegenerateSystemError, InfeasibleAttackError
from stealthattack.model import SystemParams, degradation_scale, solve_riccati
from stealthattack.sim import (
    HAVE_NUMBA,
    RNG_FAMILY,
    SimConfig,
    default_backend,
    empirical_ztilde_stats,
    monte_carlo_eta,
    simulate_run,
)
from stealthattack.sim import _kernels
from stealthattack.sim.rng import run_generator, standard_normal_block

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not importable")


def reference_run(params, ss, attack, noise, burn_in=0):
    """Literal transcription of the filter / attacker / estimator recursions."""
    h = (len(noise) - 1) // 2
    x = math.sqrt(params.q / (1 - params.a**2)) * noise[0]
    xhat_prior = xtil_prior = 0.0
    zt_prev = 0.0
    errs, zts = [], []
    for k in range(1, h + 1):
        y = params.c * x + math.sqrt(params.r) * noise[h + k]
        z = y - params.c * xhat_prior
        zt = attack.t_coef * zt_prev + attack.s_coef * z
        errs.append(x - xtil_prior)
        zts.append(zt)
        xhat_post = xhat_prior + ss.k_gain * z
        xtil_post = xtil_prior + ss.k_gain * zt
        xhat_prior, xtil_prior = params.a * xhat_post, params.a * xtil_post
        x = params.a * x + math.sqrt(params.q) * noise[k]
        zt_prev = zt
    errs, zts = np.array(errs[burn_in:]), np.array([0.0] + zts)
    lag = zts[1 + burn_in:] * zts[burn_in:-1]
    return np.array([np.sum(errs**2), np.sum(zts[1 + burn_in:]), np.sum(zts[1 + burn_in:] ** 2), np.sum(lag)])


def test_rng_streams_depend_only_on_seed_and_run():
    a = standard_normal_block(11, 5, 3, 4)
    b = standard_normal_block(11, 0, 8, 4)
    np.testing.assert_array_equal(a, b[5:8])
    np.testing.assert_array_equal(a[1], run_generator(11, 6).standard_normal(4))
    assert not np.array_equal(standard_normal_block(12, 5, 1, 4), a[:1])
    with pytest.raises(ValueError):
        run_generator(-1, 0)
    with pytest.raises(ValueError):
        run_generator(2**64, 0)


@pytest.mark.parametrize("backend", ["numpy", pytest.param("numba", marks=needs_numba)])
@pytest.mark.parametrize("attack, burn_in", [(AttackParams(0.5, -1.0), 0), (AttackParams(-0.7, 1.3), 3)])
def test_kernel_matches_reference(system, steady, backend, attack, burn_in):
    noise = standard_normal_block(99, 0, 4, 2 * 40 + 1)
    out = np.empty((4, _kernels.N_ACC))
    kernel = _kernels.get_kernel(backend)
    kernel(noise, system.a, system.c, steady.k_gain, attack.t_coef, attack.s_coef,
           math.sqrt(system.q / (1 - system.a**2)), math.sqrt(system.q), math.sqrt(system.r), burn_in, out)
    for j in range(4):
        np.testing.assert_allclose(out[j], reference_run(system, steady, attack, noise[j], burn_in), rtol=1e-12)


@needs_numba
def test_backends_agree(system, steady):
    cfg = SimConfig(runs=1500, horizon=120, seed=5, burn_in=10)
    a = monte_carlo_eta(system, steady, AttackParams(0.4, -1.3), cfg, backend="numba")
    b = monte_carlo_eta(system, steady, AttackParams(0.4, -1.3), cfg, backend="numpy")
    assert a.eta_hat == pytest.approx(b.eta_hat, rel=1e-12)
    assert a.ztilde_ac1_hat == pytest.approx(b.ztilde_ac1_hat, rel=1e-10)


def test_unknown_backend(system, steady):
    with pytest.raises(ValueError):
        monte_carlo_eta(system, steady, STRICT_ATTACK, SimConfig(runs=2, horizon=5), backend="cuda")


def test_backend_env_flag(monkeypatch):
    monkeypatch.setenv("STEALTHATTACK_NUMBA", "0")
    assert default_backend() == "numpy"
    monkeypatch.setenv("STEALTHATTACK_NUMBA", "1")
    assert default_backend() == ("numba" if HAVE_NUMBA else "numpy")


def test_no_attack_reproduces_nominal_error(system, steady):
    res = monte_carlo_eta(system, steady, NO_ATTACK, SimConfig(runs=4000, horizon=300, seed=1))
    assert abs(res.eta_hat - 1.0) <= 3 * res.stderr_eta
    assert res.p_tilde_hat == pytest.approx(steady.p, rel=0.01)


def test_noiseless_static_plant_has_zero_error():
    params = SystemParams(0.5, 1.0, 0.0, 1.0)
    ss = solve_riccati(params)
    acc = simulate_run(params, ss, AttackParams(0.3, -2.0), horizon=50, run_seed=4)
    assert acc.sum_err2 == 0.0
    assert acc.steps == 50
    with pytest.raises(DegenerateSystemError):
        monte_carlo_eta(params, ss, STRICT_ATTACK, SimConfig(runs=3, horizon=10))


def test_simulate_run_is_row_of_block(system, steady):
    cfg = SimConfig(runs=3, horizon=30, seed=8)
    single = simulate_run(system, steady, STRICT_ATTACK, 30, run_seed=8, run_index=2)
    assert single.sum_err2 > 0
    res = monte_carlo_eta(system, steady, STRICT_ATTACK, cfg)
    assert res.runs == 3 and res.rng == RNG_FAMILY


def test_unstable_attack_rejected(system, steady):
    with pytest.raises(InfeasibleAttackError):
        monte_carlo_eta(system, steady, AttackParams(1.0, 1.0), SimConfig(runs=2, horizon=5))


@pytest.mark.parametrize("kwargs", [dict(runs=0), dict(horizon=0), dict(burn_in=10, horizon=10), dict(seed=-3)])
def test_sim_config_validation(kwargs):
    with pytest.raises(ValueError):
        SimConfig(**kwargs)


def test_reruns_bit_identical_and_thread_invariant(system, steady):
    cfg = SimConfig(runs=2500, horizon=80, seed=2024)
    attack = AttackParams(0.3, -1.4)
    first = monte_carlo_eta(system, steady, attack, cfg, threads=1)
    assert monte_carlo_eta(system, steady, attack, cfg, threads=1) == first
    assert monte_carlo_eta(system, steady, attack, cfg, threads=3) == first


def test_single_run_has_infinite_stderr(system, steady):
    res = monte_carlo_eta(system, steady, STRICT_ATTACK, SimConfig(runs=1, horizon=50))
    assert math.isinf(res.stderr_eta) and res.eta_hat > 0


@pytest.mark.parametrize("attack, var, ac1", [
    (STRICT_ATTACK, None, 0.0),
    (AttackParams(0.6, -0.5), 0.28313, 0.6),
])
def test_ztilde_moments(system, steady, attack, var, ac1):
    res = monte_carlo_eta(system, steady, attack, SimConfig(runs=3000, horizon=400, seed=17, burn_in=50))
    report = empirical_ztilde_stats(res, attack, steady)
    expected_var = steady.sigma_z2 if var is None else var
    assert report.var_expected == pytest.approx(expected_var, abs=1e-5)
    assert report.ac1_expected == ac1
    assert report.within(4.0), report


def test_ztilde_stats_needs_long_horizon(system, steady):
    res = monte_carlo_eta(system, steady, AttackParams(0.99, -0.1), SimConfig(runs=2, horizon=100))
    with pytest.raises(ValueError):
        empirical_ztilde_stats(res, AttackParams(0.99, -0.1), steady)


@pytest.mark.parametrize("attack", [AttackParams(0.5, -1.0), AttackParams(-0.6, -1.8), AttackParams(0.85, 0.4)])
def test_limit_formula_against_simulation(system, steady, attack):
    res = monte_carlo_eta(system, steady, attack, SimConfig(runs=4000, horizon=500, seed=31, burn_in=100))
    predicted = 1 + objective_j(attack, system.a) * degradation_scale(steady, system)
    assert abs(res.eta_hat - predicted) <= 4 * res.stderr_eta
