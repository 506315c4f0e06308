"""Ground truth for an instance: exact per-arm optima, gaps, complexity
measures, regret of arbitrary rules, and the concentration-event check.

Everything here sees the true arm distributions and costs; it referees the
online algorithms but is never consulted by them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import lp
from .agent import best_response
from .domain import Instance
from .scoring import ScoringRule, expected_payment


@dataclass(frozen=True)
class GroundTruth:
    h_star_per_arm: np.ndarray    # (K,), -inf for arms no rule can induce
    best_arm: int
    best_value: float
    gaps: np.ndarray              # (K,), h(S*) - h(S*_k); 0 at the best arm
    rules: tuple                  # LP optimizer per arm (None where infeasible)
    B_sum: float                  # B_S + B_u, the range constant in complexities

    def h_delta(self, epsilon: float) -> float:
        """Instance-dependent complexity 4*B_sum^2 * (eps^-2 + sum of gap^-2)."""
        finite = np.isfinite(self.h_star_per_arm)
        if not finite.all():
            warnings.warn("arms with empty inducible set are excluded from the "
                          "instance-dependent complexity", stacklevel=2)
        total = epsilon ** -2.0
        for k in range(self.gaps.size):
            if k == self.best_arm or not finite[k]:
                continue
            total += self.gaps[k] ** -2.0   # a zero gap correctly yields +inf
        return 4.0 * self.B_sum ** 2 * total

    def h_epsilon(self, epsilon: float) -> float:
        """Instance-independent complexity 4*B_sum^2 * K / eps^2."""
        return 4.0 * self.B_sum ** 2 * self.gaps.size / epsilon ** 2


def ground_truth(inst: Instance) -> GroundTruth:
    """Solve every per-arm optimum with the true distributions and costs."""
    K = inst.n_arms
    h = np.full(K, -np.inf)
    rules = []
    for k in range(K):
        hk, rule = lp.solve_lp_k(inst, k)
        h[k] = hk
        rules.append(rule)
    best = int(np.argmax(h))
    gaps = h[best] - h
    return GroundTruth(h_star_per_arm=h, best_arm=best, best_value=float(h[best]),
                       gaps=gaps, rules=tuple(rules),
                       B_sum=inst.B_S + inst.utility.B_u)


def true_h(inst: Instance, rule: ScoringRule, tie_break: str = "lowest") -> float:
    """The principal's profit when the agent best-responds to the rule."""
    k = best_response(inst, rule, tie_break=tie_break)
    return float(inst.u_arm[k]) - expected_payment(rule, inst.Q[k])


def simple_regret(inst: Instance, rule: ScoringRule, gt: GroundTruth = None,
                  tie_break: str = "lowest") -> float:
    if gt is None:
        gt = ground_truth(inst)
    return gt.best_value - true_h(inst, rule, tie_break=tie_break)


def event_E_held(inst: Instance, transcript):
    """Check the concentration event on a recorded run.

    Returns (ok, per_round) where per_round[r, k] is True when the L1 error of
    the empirical distribution of arm k at round r was inside its radius
    (vacuously True before the arm's first observation, where the recorded
    radius is +inf).
    """
    q_hat = transcript.q_hat          # (R, K, M)
    radii = transcript.radius         # (R, K)
    err = np.abs(q_hat - inst.Q[None, :, :]).sum(axis=2)
    per_round = (err <= radii) | ~np.isfinite(radii)
    return bool(per_round.all()), per_round
