"""Command-line front end.

    stealthattack steady   [--a --c --q --r] [--format json|text]
    stealthattack solve    --strategy {strict,optimal,baseline-t0} [--epsilon E]
    stealthattack sweep    --epsilons LO:HI:STEP [--mc] [--out PATH]
    stealthattack simulate (--t T --s S | --strategy ...) [--runs --horizon --seed --burn-in]
    stealthattack kl       --t T --s S [--horizon K]

System flags default to a=0.4, c=1, q=0.2, r=0.5.  Output goes to stdout as a
flat JSON object (``sweep`` writes CSV).  Errors exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .attack import AttackParams, evaluate, solve_baseline_t0, solve_optimal, solve_strict
from .config import THREADS_ENV, default_threads
from .errors import StealthAttackError
from .model import DEFAULT_SYSTEM, SystemParams, solve_riccati
from .sim import SimConfig, monte_carlo_eta
from .stealth import StealthBudget, finite_horizon_kl, kl_rate

ANALYTIC_DIGITS = 12
MC_DIGITS = 6

SWEEP_COLUMNS = [
    "epsilon",
    "t_opt",
    "s_opt",
    "j_opt",
    "eta_optimal_analytic",
    "s_baseline",
    "j_baseline",
    "eta_baseline_analytic",
    "eta_optimal_mc",
    "stderr_optimal_mc",
    "eta_baseline_mc",
    "stderr_baseline_mc",
]


class CliError(Exception):
    pass


def _sig(x: float, digits: int):
    if isinstance(x, float) and math.isfinite(x):
        return float(f"{x:.{digits}g}")
    return x


def _fmt(x: float, digits: int) -> str:
    return f"{x:.{digits}g}"


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=False)


def _system(args) -> SystemParams:
    return SystemParams(args.a, args.c, args.q, args.r)


def _solve(strategy: str, epsilon: float, system: SystemParams):
    budget = StealthBudget(epsilon)
    if strategy == "strict":
        return solve_strict(system)
    if strategy == "optimal":
        return solve_optimal(budget, system)
    if strategy == "baseline-t0":
        return solve_baseline_t0(budget, system)
    raise CliError(f"unknown strategy {strategy!r}")


def parse_range(spec: str) -> list[float]:
    """``lo:hi:step`` inclusive of ``hi`` (up to rounding); empty when hi < lo."""
    try:
        lo, hi, step = (float(p) for p in spec.split(":"))
    except ValueError:
        raise CliError(f"bad range {spec!r}; expected lo:hi:step") from None
    if lo < 0 or step <= 0:
        raise CliError("range needs lo >= 0 and step > 0")
    if hi < lo:
        return []
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(n)]


# --- commands ------------------------------------------------------------------------

def cmd_steady(args) -> str:
    system = _system(args)
    ss = solve_riccati(system)
    out = {"p": ss.p, "k_gain": ss.k_gain, "sigma_z2": ss.sigma_z2}
    if args.format == "text":
        return "\n".join(f"{k:<9}{_fmt(v, ANALYTIC_DIGITS)}" for k, v in out.items())
    return _dump({k: _sig(v, ANALYTIC_DIGITS) for k, v in out.items()})


def cmd_solve(args) -> str:
    sol = _solve(args.strategy, args.epsilon, _system(args))
    return _dump({k: _sig(v, ANALYTIC_DIGITS) for k, v in sol.as_flat_dict().items()})


def sweep_rows(epsilons, system: SystemParams, mc: SimConfig | None = None,
               backend: str | None = None, threads: int | None = None) -> list[dict]:
    ss = solve_riccati(system) if mc is not None else None
    rows = []
    for eps in epsilons:
        opt = solve_optimal(eps, system)
        base = solve_baseline_t0(eps, system)
        row = {
            "epsilon": eps,
            "t_opt": opt.params.t_coef,
            "s_opt": opt.params.s_coef,
            "j_opt": opt.j_value,
            "eta_optimal_analytic": opt.eta_analytic,
            "s_baseline": base.params.s_coef,
            "j_baseline": base.j_value,
            "eta_baseline_analytic": base.eta_analytic,
        }
        if mc is not None:
            r_opt = monte_carlo_eta(system, ss, opt.params, mc, backend, threads)
            r_base = monte_carlo_eta(system, ss, base.params, mc, backend, threads)
            row.update(eta_optimal_mc=r_opt.eta_hat, stderr_optimal_mc=r_opt.stderr_eta,
                       eta_baseline_mc=r_base.eta_hat, stderr_baseline_mc=r_base.stderr_eta)
        rows.append(row)
    return rows


def write_sweep_csv(rows: list[dict], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        cells = []
        for col in SWEEP_COLUMNS:
            v = row.get(col)
            if v is None:
                cells.append("")
            elif col == "epsilon":
                cells.append(repr(float(v)))
            else:
                digits = MC_DIGITS if col.endswith("_mc") else ANALYTIC_DIGITS
                cells.append(_fmt(v, digits))
        writer.writerow(cells)


def check_dominance(rows: list[dict]) -> None:
    for row in rows:
        opt, base = row["eta_optimal_analytic"], row["eta_baseline_analytic"]
        if not opt >= base - 1e-12 or not base >= 1 - 1e-12:
            raise CliError(f"dominance violated at eps={row['epsilon']}: {opt} vs {base}")


def cmd_sweep(args) -> str | None:
    epsilons = parse_range(args.epsilons)
    mc = None
    if args.mc:
        mc = SimConfig(runs=args.runs, horizon=args.horizon, seed=args.seed, burn_in=args.burn_in)
    rows = sweep_rows(epsilons, _system(args), mc, threads=args.threads)
    check_dominance(rows)
    if args.out is None:
        buf = io.StringIO()
        write_sweep_csv(rows, buf)
        return buf.getvalue().rstrip("\n")
    path = Path(args.out)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            write_sweep_csv(rows, fh)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}") from None
    return None


def cmd_simulate(args) -> str:
    system = _system(args)
    if args.strategy is not None:
        if args.t is not None or args.s is not None:
            raise CliError("give either --strategy or --t/--s, not both")
        sol = _solve(args.strategy, args.epsilon, system)
    else:
        if args.t is None or args.s is None:
            raise CliError("simulate needs --t and --s, or --strategy")
        sol = evaluate(AttackParams(args.t, args.s), system)
    config = SimConfig(runs=args.runs, horizon=args.horizon, seed=args.seed, burn_in=args.burn_in)
    res = monte_carlo_eta(system, solve_riccati(system), sol.params, config,
                          backend=args.backend, threads=args.threads)
    out = {
        "T": _sig(sol.params.t_coef, ANALYTIC_DIGITS),
        "S": _sig(sol.params.s_coef, ANALYTIC_DIGITS),
        "strategy": sol.strategy,
        "eta_analytic": _sig(sol.eta_analytic, ANALYTIC_DIGITS),
    }
    for k, v in res.as_dict().items():
        out[k] = _sig(v, MC_DIGITS) if isinstance(v, float) else v
    return _dump(out)


def cmd_kl(args) -> str:
    attack = AttackParams(args.t, args.s)
    out = {"T": args.t, "S": args.s, "kl_rate": _sig(kl_rate(attack), ANALYTIC_DIGITS)}
    if args.horizon is not None:
        total = finite_horizon_kl(attack, solve_riccati(_system(args)), args.horizon)
        out.update(horizon=args.horizon, finite_horizon_kl=_sig(total, ANALYTIC_DIGITS),
                   per_step=_sig(total / args.horizon, ANALYTIC_DIGITS))
    return _dump(out)


# --- parser --------------------------------------------------------------------------

def _add_system(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("system")
    g.add_argument("--a", type=float, default=DEFAULT_SYSTEM.a, help="state coefficient")
    g.add_argument("--c", type=float, default=DEFAULT_SYSTEM.c, help="output coefficient")
    g.add_argument("--q", type=float, default=DEFAULT_SYSTEM.q, help="process-noise variance")
    g.add_argument("--r", type=float, default=DEFAULT_SYSTEM.r, help="measurement-noise variance")


def _add_mc(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("monte carlo")
    g.add_argument("--runs", type=int, default=100_000)
    g.add_argument("--horizon", type=int, default=500)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--burn-in", type=int, default=0)
    g.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default ${THREADS_ENV} or cpu count, now {default_threads()})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stealthattack", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady", help="steady-state Kalman filter quantities")
    _add_system(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("solve", help="design an attack pair")
    _add_system(p)
    p.add_argument("--strategy", choices=("strict", "optimal", "baseline-t0"), default="optimal")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="optimal vs T=0 baseline over a range of budgets (CSV)")
    _add_system(p)
    p.add_argument("--epsilons", default="0:1:0.1", help="lo:hi:step (default 0:1:0.1)")
    p.add_argument("--mc", action="store_true", help="also run Monte Carlo for each row")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    _add_mc(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of eta for one attack")
    _add_system(p)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--strategy", choices=("strict", "optimal", "baseline-t0"), default=None)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--backend", choices=("numba", "numpy"), default=None)
    _add_mc(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("kl", help="KL divergence rate of an attack pair")
    _add_system(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--horizon", type=int, default=None)
    p.set_defaults(func=cmd_kl)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except (StealthAttackError, CliError, ValueError, ArithmeticError) as exc:
        print(f"stealthattack {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if text is not None:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
