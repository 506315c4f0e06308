"""Experiment harness: instance generation, seeded trial batches, CSV output.

Randomness uses counter-based Philox streams keyed by (base_seed, trial_id),
so a trial's draws never depend on scheduling and parallel batches reproduce
serial ones byte for byte.  Wall-clock times are measured per trial for the
console summary, but the CSV writes zeros unless timing output is requested —
the file contract is fully deterministic by default.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import algorithms, evaluation, lp, scoring
from .domain import Instance, ValidationError, make_instance, make_support, load_instance
from .domain import Arm, UtilityModel

CSV_HEADER = "trial,status,tau,tau1,tau2,n_bs,success,regret,event_E,wall_ms"
_GEN_STREAM_ID = 2 ** 64 - 1     # key lane reserved for instance generation
WILSON_Z = 1.959963984540054     # two-sided 95%


class GenerationExhausted(RuntimeError):
    pass


def trial_stream(base_seed: int, trial_id: int) -> np.random.Generator:
    key = np.array([base_seed, trial_id], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class GenSpec:
    """Sizes and knobs for random instance generation."""

    n_states: int = 2
    n_arms: int = 2
    support_size: int = 3
    n_decisions: int = None        # defaults to n_states
    B_u: float = 1.0
    B_S: float = 1.0
    seed: int = 0
    min_gap: float = 0.0
    margin_floor: float = 1e-3
    max_attempts: int = 200


def generate_instance(spec: GenSpec) -> Instance:
    """Sample instances until one satisfies the oracle-margin and gap demands.

    Utilities are uniform on [0, B_u], support beliefs and arm distributions
    are flat-Dirichlet, costs uniform on [0, B_S/2].  Deterministic in
    spec.seed; raises GenerationExhausted after max_attempts rejections.
    """
    if spec.n_states < 2 or spec.n_arms < 2 or spec.support_size < 1:
        raise ValueError("need n_states >= 2, n_arms >= 2, support_size >= 1")
    n_dec = spec.n_decisions or spec.n_states
    rng = trial_stream(spec.seed, _GEN_STREAM_ID)
    for _attempt in range(spec.max_attempts):
        u = rng.uniform(0.0, spec.B_u, size=(spec.n_states, n_dec))
        support_pts = rng.dirichlet(np.ones(spec.n_states), size=spec.support_size)
        Q = rng.dirichlet(np.ones(spec.support_size), size=spec.n_arms)
        costs = rng.uniform(0.0, 0.5 * spec.B_S, size=spec.n_arms)
        try:
            utility = UtilityModel(u=u, B_u=spec.B_u)
            support = make_support(support_pts, utility)
            arms = [Arm(q=Q[k], cost=costs[k]) for k in range(spec.n_arms)]
            rules, margins = scoring.build_oracle_rules(utility, support, arms,
                                                        spec.B_S, spec.margin_floor)
        except (lp.OracleInfeasible, ValidationError):
            continue
        margin = float(np.min(margins)) - 1e-9
        inst = make_instance(utility, support, arms, spec.B_S, rules, margin)
        gt = evaluation.ground_truth(inst)
        order = np.sort(gt.h_star_per_arm)
        gap = order[-1] - order[-2]
        if not np.isfinite(gap) or gap <= max(spec.min_gap, 1e-9):
            continue
        return inst
    raise GenerationExhausted(
        f"no admissible instance in {spec.max_attempts} attempts for {spec}"
    )


@dataclass(frozen=True)
class ExperimentConfig:
    algo: str                      # "fc" | "fb"
    epsilon: float
    delta: float = 0.1
    instance: Instance = None      # any one of instance / instance_path / gen
    instance_path: str = None
    gen: GenSpec = None
    alpha_mode: str = "dependent"
    T: int = None
    a: float = None                # fixed-budget exploration constant; None -> default_a
    trials: int = 1
    seed: int = 0
    round_cap: int = algorithms.DEFAULT_ROUND_CAP
    tie_break: str = "lowest"
    bs_on_match: bool = False
    m_param: int = None
    out: str = None                # CSV path
    timing: bool = False           # write measured wall_ms into the CSV
    threads: int = None            # None -> SCOREID_THREADS env -> 1
    full_transcript: bool = False  # per-round arrays are only needed by tests


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    status: str
    tau: int
    tau1: int
    tau2: int
    n_bs: int
    success: int
    regret: float
    event_E: int
    wall_ms: float


def default_a(T: int, K: int, M: int, delta: float) -> float:
    """Exploration constant 2*ln(T*K*2^M / delta), evaluated in log space."""
    return 2.0 * (math.log(T) + math.log(K) + M * math.log(2.0) - math.log(delta))


def resolve_instance(config: ExperimentConfig) -> Instance:
    if config.instance is not None:
        return config.instance
    if config.instance_path is not None:
        return load_instance(config.instance_path)
    if config.gen is not None:
        return generate_instance(config.gen)
    raise ValueError("config needs an instance, an instance path, or a generator spec")


def _schedule_for(config: ExperimentConfig, inst: Instance) -> algorithms.ScheduleConfig:
    a = config.a
    if config.algo == "fb" and a is None:
        a = default_a(config.T, inst.n_arms, inst.support_size, config.delta)
    return algorithms.ScheduleConfig(epsilon=config.epsilon, delta=config.delta,
                                     mode=config.alpha_mode, T=config.T, a=a)


def run_trial(inst: Instance, gt: evaluation.GroundTruth,
              config: ExperimentConfig, trial: int) -> TrialRecord:
    rng = trial_stream(config.seed, trial)
    schedule = _schedule_for(config, inst)
    t0 = time.perf_counter()
    try:
        if config.algo == "fc":
            out = algorithms.run_fixed_confidence(
                inst, schedule, rng, round_cap=config.round_cap,
                tie_break=config.tie_break, m_param=config.m_param,
                full_transcript=config.full_transcript)
        elif config.algo == "fb":
            out = algorithms.run_fixed_budget(
                inst, schedule, rng, tie_break=config.tie_break,
                bs_on_match=config.bs_on_match, m_param=config.m_param,
                full_transcript=config.full_transcript)
        else:
            raise ValueError(f"unknown algorithm {config.algo!r}")
    except lp.NumericalFailure:
        wall = 1e3 * (time.perf_counter() - t0)
        return TrialRecord(trial=trial, status="numerical-failure", tau=0, tau1=0,
                           tau2=0, n_bs=0, success=0, regret=float("nan"),
                           event_E=0, wall_ms=wall)
    wall = 1e3 * (time.perf_counter() - t0)
    if out.rule is not None:
        regret = evaluation.simple_regret(inst, out.rule, gt,
                                          tie_break=config.tie_break)
        success = int(regret <= config.epsilon + 1e-9)
    else:
        regret, success = float("nan"), 0
    return TrialRecord(trial=trial, status=out.status, tau=out.tau, tau1=out.tau1,
                       tau2=out.tau2, n_bs=out.n_bs, success=success,
                       regret=regret, event_E=int(out.event_E), wall_ms=wall)


def _worker(payload):
    inst, gt, config, trial = payload
    return run_trial(inst, gt, config, trial)


def _thread_count(config: ExperimentConfig) -> int:
    if config.threads is not None:
        return max(1, config.threads)
    env = os.environ.get("SCOREID_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def run_experiment(config: ExperimentConfig):
    """Execute the trial batch; returns (records, summary) and writes the CSV."""
    inst = resolve_instance(config)
    gt = evaluation.ground_truth(inst)
    workers = _thread_count(config)
    trials = list(range(config.trials))
    if workers > 1 and config.trials > 1:
        payloads = [(inst, gt, config, t) for t in trials]
        chunk = max(1, config.trials // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_worker, payloads, chunksize=chunk))
    else:
        records = [run_trial(inst, gt, config, t) for t in trials]
    records.sort(key=lambda r: r.trial)
    if config.out:
        write_csv(records, config.out, timing=config.timing)
    return records, summarize(records, config.epsilon)


def _fmt(x: float) -> str:
    return "%.9g" % x


def write_csv(records, path, timing: bool = False) -> None:
    lines = [CSV_HEADER]
    for r in records:
        wall = r.wall_ms if timing else 0.0
        lines.append(
            f"{r.trial},{r.status},{r.tau},{r.tau1},{r.tau2},{r.n_bs},"
            f"{r.success},{_fmt(r.regret)},{r.event_E},{_fmt(wall)}"
        )
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def wilson_interval(successes: int, n: int, z: float = WILSON_Z):
    if n == 0:
        return 0.0, 1.0
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def summarize(records, epsilon: float) -> dict:
    n = len(records)
    successes = sum(r.success for r in records)
    lo, hi = wilson_interval(successes, n)
    regrets = np.array([r.regret for r in records], dtype=np.float64)
    finite = regrets[np.isfinite(regrets)]
    statuses = {}
    for r in records:
        statuses[r.status] = statuses.get(r.status, 0) + 1
    return {
        "trials": n,
        "epsilon": epsilon,
        "successes": successes,
        "success_rate": successes / n if n else 0.0,
        "wilson_low": lo,
        "wilson_high": hi,
        "mean_tau": float(np.mean([r.tau for r in records])) if n else 0.0,
        "mean_regret": float(np.mean(finite)) if finite.size else float("nan"),
        "mean_wall_ms": float(np.mean([r.wall_ms for r in records])) if n else 0.0,
        "event_E_rate": sum(r.event_E for r in records) / n if n else 0.0,
        "statuses": statuses,
    }


def format_summary(summary: dict) -> str:
    status_txt = " ".join(f"{k}={v}" for k, v in sorted(summary["statuses"].items()))
    return (
        f"trials={summary['trials']} success={summary['successes']}"
        f" rate={summary['success_rate']:.3f}"
        f" wilson=[{summary['wilson_low']:.3f},{summary['wilson_high']:.3f}]"
        f" mean_tau={summary['mean_tau']:.1f}"
        f" mean_regret={summary['mean_regret']:.4f}"
        f" event_E={summary['event_E_rate']:.3f}"
        f" mean_wall_ms={summary['mean_wall_ms']:.1f}"
        f" [{status_txt}]"
    )
