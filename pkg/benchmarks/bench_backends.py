#!/usr/bin/env python3
"""Numba vs pure-numpy simulation kernel.

Times the kernel alone on a fixed block of pre-drawn noise, then the whole
Monte Carlo estimate (noise generation included), and checks both backends
agree.

    python benchmarks/bench_backends.py [--runs 20000] [--horizon 500]
"""

import argparse
import math
import time

import numpy as np

from stealthattack.attack import AttackParams
from stealthattack.model import DEFAULT_SYSTEM, solve_riccati
from stealthattack.sim import HAVE_NUMBA, SimConfig, monte_carlo_eta
from stealthattack.sim import _kernels
from stealthattack.sim.rng import standard_normal_block


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--runs", type=int, default=20_000)
    parser.add_argument("--horizon", type=int, default=500)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba not importable; nothing to compare")

    system, attack = DEFAULT_SYSTEM, AttackParams(0.41861, -1.53509)
    ss = solve_riccati(system)
    kargs = (system.a, system.c, ss.k_gain, attack.t_coef, attack.s_coef,
             math.sqrt(system.q / (1 - system.a**2)), math.sqrt(system.q), math.sqrt(system.r), 0)

    n_block = min(args.runs, 4096)
    noise = standard_normal_block(1, 0, n_block, 2 * args.horizon + 1)
    out_nb, out_np = np.empty((n_block, 4)), np.empty((n_block, 4))
    _kernels.run_block_numba(noise[:2], *kargs, out_nb[:2])  # compile / load cache

    t_nb = best_of(lambda: _kernels.run_block_numba(noise, *kargs, out_nb), args.repeat)
    t_np = best_of(lambda: _kernels.run_block_numpy(noise, *kargs, out_np), args.repeat)
    max_rel = float(np.max(np.abs(out_nb - out_np) / np.maximum(np.abs(out_np), 1e-300)))
    steps = n_block * args.horizon
    print(f"=== kernel only ({n_block:,} runs x {args.horizon} steps) ===")
    print(f"numba: {t_nb:.4f} s  ({steps / t_nb / 1e6:.1f} M steps/s)")
    print(f"numpy: {t_np:.4f} s  ({steps / t_np / 1e6:.1f} M steps/s)")
    print(f"speedup {t_np / t_nb:.1f}x, max relative difference {max_rel:.1e}")

    cfg = SimConfig(runs=args.runs, horizon=args.horizon, seed=0)
    res = {}
    print(f"\n=== monte_carlo_eta ({args.runs:,} runs x {args.horizon} steps, noise included) ===")
    for backend in ("numba", "numpy"):
        t0 = time.perf_counter()
        res[backend] = monte_carlo_eta(system, ss, attack, cfg, backend=backend, threads=1)
        dt = time.perf_counter() - t0
        print(f"{backend}: {dt:.2f} s  eta_hat={res[backend].eta_hat:.6f} +- {res[backend].stderr_eta:.6f}")
    print(f"eta_hat difference between backends: {abs(res['numba'].eta_hat - res['numpy'].eta_hat):.1e}")


if __name__ == "__main__":
    main()
