"""Proper scoring rules in value/subgradient (Savage) form.

A rule stores, for each support belief sigma_i, the value G(sigma_i) of a
convex function and a subgradient g(sigma_i).  The payment for reporting i
when state omega is realized is the supporting affine piece evaluated at the
state corner:

    score(omega, i) = values[i] + <subgradients[i], e_omega - sigma_i>.

Convexity of (values, subgradients) over the support is exactly properness:
truthful reporting maximizes the expected score.  The family is closed under
convex mixing, which the online algorithms rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Instance, SupportSet, UtilityModel

CONVEXITY_TOL = 1e-7
SCORE_BOUND_TOL = 1e-7


class ImproperRule(ValueError):
    """Base for properness-check failures."""


class ConvexityViolation(ImproperRule):
    def __init__(self, i, j, slack):
        self.i, self.j, self.slack = i, j, slack
        super().__init__(
            f"convexity fails between support points {i} and {j} (slack {slack:.3e})"
        )


class BoundViolation(ImproperRule):
    def __init__(self, i, omega, value, B_S):
        self.i, self.omega, self.value = i, omega, value
        super().__init__(
            f"score({omega}, {i}) = {value:.6g} outside [0, {B_S}]"
        )


class PropernessViolation(ImproperRule):
    def __init__(self, i, j, slack):
        self.i, self.j, self.slack = i, j, slack
        super().__init__(
            f"reporting {j} beats truthful report {i} by {slack:.3e} in expectation"
        )


@dataclass(frozen=True)
class ScoringRule:
    values: np.ndarray        # (M,)  G(sigma_i)
    subgradients: np.ndarray  # (M, n_states)  g(sigma_i)

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        g = np.ascontiguousarray(np.asarray(self.subgradients, dtype=np.float64))
        if g.ndim != 2 or g.shape[0] != v.shape[0]:
            raise ValueError(f"subgradients shape {g.shape} does not match {v.shape[0]} values")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "subgradients", g)

    @property
    def support_size(self) -> int:
        return self.values.shape[0]


def constant_rule(support: SupportSet, c: float) -> ScoringRule:
    return ScoringRule(values=np.full(support.size, float(c)),
                       subgradients=np.zeros((support.size, support.n_states)))


def score(rule: ScoringRule, support: SupportSet, state: int, report: int) -> float:
    """Payment for reporting support index `report` when `state` realizes."""
    if not 0 <= report < support.size:
        raise IndexError(f"report index {report} out of range")
    if not 0 <= state < support.n_states:
        raise IndexError(f"state index {state} out of range")
    g = rule.subgradients[report]
    return float(rule.values[report] + g[state] - g @ support.beliefs[report])


def score_table(rule: ScoringRule, support: SupportSet) -> np.ndarray:
    """All payments at once: table[i, omega] = score(omega, report=i)."""
    offset = rule.values - np.einsum("ij,ij->i", rule.subgradients, support.beliefs)
    return offset[:, None] + rule.subgradients


def expected_payment(rule: ScoringRule, weights) -> float:
    """<S, w> over the support; truthful reporting makes E[score | sigma_i] = values[i]."""
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != rule.values.shape:
        raise ValueError(f"weights length {w.shape} does not match support size {rule.values.shape}")
    return float(w @ rule.values)


def agent_profit(inst: Instance, k: int, rule: ScoringRule) -> float:
    """Expected payment minus the arm's private cost."""
    if not 0 <= k < inst.n_arms:
        raise IndexError(f"arm index {k} out of range")
    return expected_payment(rule, inst.Q[k]) - float(inst.costs[k])


def mix(rule_a: ScoringRule, rule_b: ScoringRule, lam: float) -> ScoringRule:
    """Convex combination (1-lam)*rule_a + lam*rule_b (lam=0 gives rule_a)."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0,1], got {lam}")
    if rule_a.values.shape != rule_b.values.shape or rule_a.subgradients.shape != rule_b.subgradients.shape:
        raise ValueError("rules are not over the same support")
    return ScoringRule(values=(1.0 - lam) * rule_a.values + lam * rule_b.values,
                       subgradients=(1.0 - lam) * rule_a.subgradients + lam * rule_b.subgradients)


def check_proper(rule: ScoringRule, support: SupportSet, B_S: float) -> None:
    """Raise ConvexityViolation / BoundViolation / PropernessViolation if the rule fails.

    Three checks: the convexity inequalities that define the representation,
    the [0, B_S] payment bounds at every state corner, and a direct behavioral
    test that no misreport improves the expected score at any support belief.
    """
    if rule.support_size != support.size or rule.subgradients.shape[1] != support.n_states:
        raise ValueError("rule shape does not match support")
    vals, g, pts = rule.values, rule.subgradients, support.beliefs

    # ell[i, j] = affine piece of point i evaluated at belief sigma_j
    cross = g @ pts.T                              # (M, M): g_i . sigma_j
    ell = vals[:, None] + cross - np.diag(cross)[:, None]
    slack = ell - vals[None, :]                    # convexity: ell[i,j] <= vals[j]
    if np.max(slack) > CONVEXITY_TOL:
        i, j = np.unravel_index(np.argmax(slack), slack.shape)
        raise ConvexityViolation(int(i), int(j), float(slack[i, j]))

    table = score_table(rule, support)
    if np.min(table) < -SCORE_BOUND_TOL or np.max(table) > B_S + SCORE_BOUND_TOL:
        i, w = np.unravel_index(
            np.argmax(np.maximum(-table, table - B_S)), table.shape
        )
        raise BoundViolation(int(i), int(w), float(table[i, w]), B_S)

    # behavioral: E_{omega ~ sigma_i}[score(omega, j)] = ell[j, i] must not
    # beat the truthful ell[i, i] = values[i]
    gain = ell.T - vals[:, None]                   # gain[i, j] of misreporting j at truth i
    if np.max(gain) > CONVEXITY_TOL:
        i, j = np.unravel_index(np.argmax(gain), gain.shape)
        raise PropernessViolation(int(i), int(j), float(gain[i, j]))


def is_proper(rule: ScoringRule, support: SupportSet, B_S: float) -> bool:
    try:
        check_proper(rule, support, B_S)
    except ImproperRule:
        return False
    return True


def oracle_margins(arms, rules) -> np.ndarray:
    """Per arm k: profit(k, rules[k]) minus the best competing profit under rules[k]."""
    Q = np.vstack([a.q for a in arms])
    costs = np.array([a.cost for a in arms])
    margins = np.empty(len(arms))
    for k, rule in enumerate(rules):
        profits = Q @ rule.values - costs
        rival = np.max(np.delete(profits, k))
        margins[k] = profits[k] - rival
    return margins


def build_oracle_rules(utility: UtilityModel, support: SupportSet, arms, B_S: float,
                       margin_floor: float = 1e-3):
    """One rule per arm making that arm the strict best response.

    Each rule solves a margin-maximization LP; returns (rules, margins) and
    raises OracleInfeasible(k) when some arm cannot be separated by more than
    margin_floor.
    """
    from . import lp

    rules, margins = [], []
    for k in range(len(arms)):
        margin, rule = lp.oracle_margin_lp(utility, support, arms, B_S, k)
        if margin <= margin_floor:
            raise lp.OracleInfeasible(k, margin)
        rules.append(rule)
        margins.append(margin)
    return tuple(rules), np.array(margins)


def random_rule(rng: np.random.Generator, support: SupportSet, B_S: float) -> ScoringRule:
    """A random proper rule: raw values/subgradients pushed through the feasibility LP."""
    from . import lp

    raw_values = rng.uniform(0.0, B_S, size=support.size)
    raw_g = rng.uniform(-2.0 * B_S, 2.0 * B_S, size=(support.size, support.n_states))
    return lp.project_rule(raw_values, raw_g, support, B_S)
