"""Simulation laboratory for best-scoring-rule identification.

A principal repeatedly announces a bounded proper scoring rule to an agent
who privately chooses which costly information source ("arm") to acquire,
reports the resulting belief, and is paid by the rule.  The package covers
the offline problem (linear programs over the Savage representation of
bounded proper rules) and two online identification algorithms —
fixed-confidence and fixed-budget — together with instance generation,
ground-truth evaluation, and a reproducible experiment harness.
"""

from .domain import (Arm, Instance, SupportSet, UtilityModel, ValidationError,
                     as_belief, best_decision, instance_from_dict,
                     instance_to_dict, load_instance, make_instance,
                     make_support, save_instance, validate_instance)
from .scoring import (ImproperRule, ScoringRule, check_proper, constant_rule,
                      is_proper, mix, score, score_table)
from .agent import RoundOutcome, best_response, play_round
from .estimation import (CostGraph, EstimatorState, UnvisitedArm, cost_bounds,
                         cost_estimate, gamma, radius_q, radius_vector, update)
from .lp import (LinearProgram, LpSolution, NumericalFailure, OracleInfeasible,
                 build_lp_k, build_ucb_lp, format_lp, oracle_margin_lp,
                 project_rule, solve, solve_lp_k, solve_ucb_lp)
from .evaluation import (GroundTruth, event_E_held, ground_truth,
                         simple_regret, true_h)
from .algorithms import (RunOutcome, ScheduleConfig, Transcript, alpha, beta,
                         binary_search, run_fixed_budget, run_fixed_confidence)
from .harness import (ExperimentConfig, GenSpec, GenerationExhausted,
                      TrialRecord, default_a, generate_instance,
                      run_experiment, trial_stream, wilson_interval, write_csv)

__version__ = "0.1.0"

__all__ = [
    "Arm", "Instance", "SupportSet", "UtilityModel", "ValidationError",
    "as_belief", "best_decision", "instance_from_dict", "instance_to_dict",
    "load_instance", "make_instance", "make_support", "save_instance",
    "validate_instance",
    "ImproperRule", "ScoringRule", "check_proper", "constant_rule",
    "is_proper", "mix", "score", "score_table",
    "RoundOutcome", "best_response", "play_round",
    "CostGraph", "EstimatorState", "UnvisitedArm", "cost_bounds",
    "cost_estimate", "gamma", "radius_q", "radius_vector", "update",
    "LinearProgram", "LpSolution", "NumericalFailure", "OracleInfeasible",
    "build_lp_k", "build_ucb_lp", "format_lp", "oracle_margin_lp",
    "project_rule", "solve", "solve_lp_k", "solve_ucb_lp",
    "GroundTruth", "event_E_held", "ground_truth", "simple_regret", "true_h",
    "RunOutcome", "ScheduleConfig", "Transcript", "alpha", "beta",
    "binary_search", "run_fixed_budget", "run_fixed_confidence",
    "ExperimentConfig", "GenSpec", "GenerationExhausted", "TrialRecord",
    "default_a", "generate_instance", "run_experiment", "trial_stream",
    "wilson_interval", "write_csv",
]
