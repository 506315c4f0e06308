"""The simulated strategic agent and one round of the interaction protocol.

The agent is rational and myopic: it picks the arm with the highest expected
profit under the announced rule, draws a belief from that arm's distribution,
reports it truthfully (the rule is proper), and the state realizes from the
reported belief.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Instance, best_decision
from .scoring import ScoringRule, score

TIE_TOL = 1e-12


@dataclass(frozen=True)
class RoundOutcome:
    arm: int
    report: int            # support index of the (truthful) reported belief
    state: int
    payment: float
    principal_profit: float


def best_response(inst: Instance, rule: ScoringRule, tie_break: str = "lowest") -> int:
    """Profit-maximizing arm.  Ties within 1e-12 go to the lowest arm index,
    or to the principal's favorite among the tied arms when tie_break="principal"."""
    profits = inst.Q @ rule.values - inst.costs
    top = float(np.max(profits))
    tied = np.flatnonzero(profits >= top - TIE_TOL)
    if tie_break == "lowest" or tied.size == 1:
        return int(tied[0])
    if tie_break == "principal":
        payments = inst.Q[tied] @ rule.values
        return int(tied[np.argmax(inst.u_arm[tied] - payments)])
    raise ValueError(f"unknown tie_break {tie_break!r}")


def _sample_index(rng: np.random.Generator, probs: np.ndarray) -> int:
    """Inverse-CDF draw; cumsum + searchsorted keeps it reproducible across platforms."""
    u = rng.random()
    cdf = np.cumsum(probs)
    return int(min(np.searchsorted(cdf, u * cdf[-1], side="right"), probs.size - 1))


def play_round(inst: Instance, rule: ScoringRule, rng: np.random.Generator,
               tie_break: str = "lowest") -> RoundOutcome:
    """One protocol round under an announced rule; deterministic given rng state."""
    k = best_response(inst, rule, tie_break=tie_break)
    report = _sample_index(rng, inst.Q[k])
    sigma = inst.support.beliefs[report]
    state = _sample_index(rng, sigma)
    payment = score(rule, inst.support, state, report)
    decision = best_decision(inst.utility, sigma)
    profit = float(inst.utility.u[state, decision]) - payment
    return RoundOutcome(arm=k, report=report, state=state,
                        payment=payment, principal_profit=profit)
