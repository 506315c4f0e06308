"""Command-line front end: generate instances, solve them offline, run trials.

Subcommands
-----------
gen    sample a random admissible instance and write it to a JSON file
solve  print the offline ground-truth table (per-arm values, gaps, margins)
run    execute one experiment (fixed-confidence or fixed-budget) over trials
sweep  grid over epsilon / delta / budget values; one CSV per combination
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import algorithms, estimation, evaluation, harness, lp
from .agent import play_round
from .domain import load_instance, save_instance
from .harness import ExperimentConfig, GenSpec


def _add_instance_arg(p):
    p.add_argument("--instance", required=True, help="instance JSON file")


def _add_run_args(p, lists=False):
    """Shared run/sweep flags; `lists` switches the schedule knobs to CSV lists."""
    _add_instance_arg(p)
    p.add_argument("--algo", choices=("fc", "fb"), required=True)
    if lists:
        p.add_argument("--epsilon", required=True,
                       help="comma-separated accuracy targets")
        p.add_argument("--delta", default="0.1",
                       help="comma-separated confidence levels")
        p.add_argument("--budget", default=None,
                       help="comma-separated round budgets T (fb only)")
    else:
        p.add_argument("--epsilon", type=float, required=True,
                       help="accuracy target")
        p.add_argument("--delta", type=float, default=0.1,
                       help="confidence level (fc radii; fb default a)")
        p.add_argument("--budget", type=int, default=None,
                       help="round budget T (fb only)")
    p.add_argument("--a", type=float, default=None,
                   help="fb exploration constant; default 2*ln(T*K*2^M/delta)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", choices=("dep", "indep"), default="dep",
                   help="mixing-weight schedule")
    p.add_argument("--round-cap", type=int, default=algorithms.DEFAULT_ROUND_CAP)
    p.add_argument("--out", default=None,
                   help="CSV path (sweep: path prefix)")
    p.add_argument("--dump-lp", default=None, metavar="PATH",
                   help="write the optimistic per-arm programs after one "
                        "initialization pass, then continue")
    p.add_argument("--fb-bs-on-match", action="store_true",
                   help="fb: literal pseudocode variant that refines on "
                        "matching responses instead of mismatches")
    p.add_argument("--timing", action="store_true",
                   help="write measured wall_ms into the CSV (breaks "
                        "byte-level determinism)")
    p.add_argument("--tie-break", choices=("lowest", "principal"),
                   default="lowest")
    p.add_argument("--m-param", type=int, default=None,
                   help="override the support-size term in the radii")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: SCOREID_THREADS or 1)")


def cmd_gen(args) -> int:
    spec = GenSpec(n_states=args.states, n_arms=args.arms,
                   support_size=args.support, n_decisions=args.decisions,
                   B_u=args.b_u, B_S=args.b_s, seed=args.seed,
                   min_gap=args.min_gap, margin_floor=args.margin_floor,
                   max_attempts=args.max_attempts)
    try:
        inst = harness.generate_instance(spec)
    except harness.GenerationExhausted as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    save_instance(inst, args.out)
    gt = evaluation.ground_truth(inst)
    print(f"wrote {args.out}: {inst.n_states} states, {inst.n_arms} arms, "
          f"{inst.support_size} support points, best arm {gt.best_arm}, "
          f"gap {np.sort(gt.h_star_per_arm)[-1] - np.sort(gt.h_star_per_arm)[-2]:.4f}, "
          f"oracle margin {inst.oracle_margin:.4f}")
    return 0


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    gt = evaluation.ground_truth(inst)
    lines = ["arm,cost,u_k,h_star,gap,is_best,oracle_margin"]
    for k in range(inst.n_arms):
        lines.append(
            f"{k},{inst.costs[k]:.9g},{inst.u_arm[k]:.9g},"
            f"{gt.h_star_per_arm[k]:.9g},{gt.gaps[k]:.9g},"
            f"{int(k == gt.best_arm)},{inst.oracle_margin:.9g}"
        )
    table = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(table)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(table)
    if args.epsilon is not None:
        print(f"h_delta({args.epsilon:g}) = {gt.h_delta(args.epsilon):.6g}")
        print(f"h_epsilon({args.epsilon:g}) = {gt.h_epsilon(args.epsilon):.6g}")
    if args.dump_lp:
        chunks = []
        for k in range(inst.n_arms):
            prob = lp.build_lp_k(inst, k)
            chunks.append(lp.format_lp(prob, name=f"offline_arm_{k}"))
        with open(args.dump_lp, "w") as f:
            f.write("\n".join(chunks))
        print(f"wrote {args.dump_lp}")
    return 0


def _dump_run_lps(inst, args) -> None:
    """One initialization pass, then dump each arm's optimistic program."""
    rng = harness.trial_stream(args.seed, 0)
    state = estimation.EstimatorState(
        n_arms=inst.n_arms, support_size=inst.support_size,
        mode="fb" if args.algo == "fb" else "fc",
        delta=args.delta, a=args.a if args.a is not None else 1.0,
        M_param=args.m_param or inst.support_size)
    for k in range(inst.n_arms):
        out = play_round(inst, inst.oracle_rules[k], rng, args.tie_break)
        estimation.update(state, inst.oracle_rules[k], out)
    chunks = [lp.format_lp(lp.build_ucb_lp(inst, state, k),
                           name=f"optimistic_arm_{k}")
              for k in range(inst.n_arms)]
    with open(args.dump_lp, "w") as f:
        f.write("\n".join(chunks))
    print(f"wrote {args.dump_lp}")


def _config_from_args(args, epsilon, delta, budget, out) -> ExperimentConfig:
    return ExperimentConfig(
        algo=args.algo, epsilon=epsilon, delta=delta,
        instance_path=args.instance, alpha_mode=(
            "dependent" if args.alpha == "dep" else "independent"),
        T=budget, a=args.a, trials=args.trials, seed=args.seed,
        round_cap=args.round_cap, tie_break=args.tie_break,
        bs_on_match=args.fb_bs_on_match, m_param=args.m_param,
        out=out, timing=args.timing, threads=args.threads)


def _check_fb_budget(algo, budget) -> None:
    if algo == "fb" and budget is None:
        raise SystemExit("error: --budget is required with --algo fb")


def cmd_run(args) -> int:
    _check_fb_budget(args.algo, args.budget)
    if args.dump_lp:
        inst = load_instance(args.instance)
        _dump_run_lps(inst, args)
    config = _config_from_args(args, args.epsilon, args.delta, args.budget,
                               args.out)
    _records, summary = harness.run_experiment(config)
    print(harness.format_summary(summary))
    if args.out:
        print(f"wrote {args.out}")
    return 0


def _parse_list(text, cast):
    return [cast(tok) for tok in text.split(",") if tok.strip()]


def cmd_sweep(args) -> int:
    epsilons = _parse_list(args.epsilon, float)
    deltas = _parse_list(args.delta, float)
    budgets = _parse_list(args.budget, int) if args.budget else [None]
    _check_fb_budget(args.algo, budgets[0])
    prefix = args.out or "sweep"
    for eps in epsilons:
        for delta in deltas:
            for budget in budgets:
                tag = f"e{eps:g}_d{delta:g}"
                if budget is not None:
                    tag += f"_T{budget}"
                out = f"{prefix}_{tag}.csv"
                config = _config_from_args(args, eps, delta, budget, out)
                _records, summary = harness.run_experiment(config)
                print(f"{tag}: {harness.format_summary(summary)}")
                print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scoreid",
        description="Best-scoring-rule identification experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random admissible instance")
    p.add_argument("--states", type=int, default=2)
    p.add_argument("--arms", type=int, default=2)
    p.add_argument("--support", type=int, default=3)
    p.add_argument("--decisions", type=int, default=None)
    p.add_argument("--b-u", type=float, default=1.0)
    p.add_argument("--b-s", type=float, default=1.0)
    p.add_argument("--min-gap", type=float, default=0.0)
    p.add_argument("--margin-floor", type=float, default=1e-3)
    p.add_argument("--max-attempts", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="offline ground truth for an instance")
    _add_instance_arg(p)
    p.add_argument("--epsilon", type=float, default=None,
                   help="also report the two complexity terms at this accuracy")
    p.add_argument("--out", default=None, help="write the table as CSV")
    p.add_argument("--dump-lp", default=None, metavar="PATH",
                   help="write the per-arm offline programs as text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("run", help="run one experiment")
    _add_run_args(p, lists=False)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="grid over epsilon/delta/budget")
    _add_run_args(p, lists=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, lp.NumericalFailure) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
