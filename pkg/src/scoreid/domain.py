"""Core game data: utilities, belief supports, arms, and validated instances.

Beliefs are plain numpy vectors over states.  An instance bundles the
principal's utility matrix, the finite belief support, the agent's arms
(per-arm belief distribution + private cost), a score bound, and one
pre-built "oracle" rule per arm that makes that arm the strict best response.
Everything is immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

PROB_TOL = 1e-9


class ValidationError(ValueError):
    pass


class SimplexViolation(ValidationError):
    pass


class BoundViolation(ValidationError):
    pass


class OracleMarginViolation(ValidationError):
    pass


def as_belief(probs, n_states=None) -> np.ndarray:
    """Validate and return a belief vector (entries in [0,1], summing to 1)."""
    arr = np.asarray(probs, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise SimplexViolation(f"belief must be a vector over >= 2 states, got shape {arr.shape}")
    if n_states is not None and arr.size != n_states:
        raise SimplexViolation(f"belief has {arr.size} entries, expected {n_states}")
    if np.any(arr < -PROB_TOL) or np.any(arr > 1 + PROB_TOL):
        raise SimplexViolation(f"belief entries outside [0,1]: {arr}")
    s = float(arr.sum())
    if abs(s - 1.0) > PROB_TOL:
        raise SimplexViolation(f"belief sums to {s}, not 1")
    # renormalize only within tolerance; anything worse was rejected above
    return np.clip(arr, 0.0, 1.0) / np.clip(arr, 0.0, 1.0).sum()


@dataclass(frozen=True)
class UtilityModel:
    """Principal utility u(state, decision), bounded by B_u."""

    u: np.ndarray          # (n_states, n_decisions)
    B_u: float

    def __post_init__(self):
        u = np.ascontiguousarray(np.asarray(self.u, dtype=np.float64))
        object.__setattr__(self, "u", u)
        if u.ndim != 2 or u.shape[1] < 1:
            raise ValidationError(f"utility matrix must be 2-d with >= 1 decision, got {u.shape}")
        if self.B_u <= 0:
            raise BoundViolation("B_u must be positive")
        if np.any(u < -PROB_TOL) or np.any(u > self.B_u + PROB_TOL):
            raise BoundViolation(f"utility entries must lie in [0, {self.B_u}]")

    @property
    def n_states(self) -> int:
        return self.u.shape[0]

    @property
    def n_decisions(self) -> int:
        return self.u.shape[1]


def best_decision(utility: UtilityModel, belief: np.ndarray) -> int:
    """argmax_d <belief, u(.,d)>, ties broken by lowest decision index."""
    vals = belief @ utility.u
    return int(np.argmax(vals))  # argmax returns the first maximizer


@dataclass(frozen=True)
class SupportSet:
    """The finite set of beliefs the agent's information can produce."""

    beliefs: np.ndarray    # (M, n_states)
    u_at: np.ndarray = field(default=None)  # derived: u(sigma_i) per support point

    @property
    def size(self) -> int:
        return self.beliefs.shape[0]

    @property
    def n_states(self) -> int:
        return self.beliefs.shape[1]


def make_support(beliefs, utility: UtilityModel) -> SupportSet:
    pts = np.ascontiguousarray(
        np.vstack([as_belief(b, utility.n_states) for b in beliefs])
    )
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if np.abs(pts[i] - pts[j]).sum() <= PROB_TOL:
                raise ValidationError(f"support beliefs {i} and {j} coincide")
    u_at = np.array([principal_utility_at_belief(pts[i], utility) for i in range(len(pts))])
    return SupportSet(beliefs=pts, u_at=u_at)


def principal_utility_at_belief(belief: np.ndarray, utility: UtilityModel) -> float:
    return float(np.max(belief @ utility.u))


def principal_utility_at(support: SupportSet, utility: UtilityModel, i: int) -> float:
    """u(sigma_i) = max_d <sigma_i, u(.,d)> for support point i."""
    if not 0 <= i < support.size:
        raise IndexError(f"support index {i} out of range [0, {support.size})")
    return principal_utility_at_belief(support.beliefs[i], utility)


@dataclass(frozen=True)
class Arm:
    """An information action: distribution q over support indices plus a private cost."""

    q: np.ndarray
    cost: float

    def __post_init__(self):
        q = np.ascontiguousarray(np.asarray(self.q, dtype=np.float64))
        object.__setattr__(self, "q", q)
        if np.any(q < -PROB_TOL) or np.any(q > 1 + PROB_TOL) or abs(float(q.sum()) - 1.0) > PROB_TOL:
            raise SimplexViolation(f"arm distribution invalid: {q}")
        if self.cost < 0:
            raise ValidationError("arm cost must be nonnegative")


@dataclass(frozen=True)
class Instance:
    utility: UtilityModel
    support: SupportSet
    arms: tuple            # tuple[Arm, ...]
    B_S: float
    oracle_rules: tuple    # tuple[ScoringRule, ...], one per arm
    oracle_margin: float

    # dense caches used by the hot loops, derived in __post_init__
    Q: np.ndarray = field(default=None, repr=False)         # (K, M) arm distributions
    costs: np.ndarray = field(default=None, repr=False)     # (K,)
    u_arm: np.ndarray = field(default=None, repr=False)     # (K,) expected principal utility per arm
    oracle_values: np.ndarray = field(default=None, repr=False)  # (K, M)

    def __post_init__(self):
        Q = np.ascontiguousarray(np.vstack([a.q for a in self.arms]))
        costs = np.array([a.cost for a in self.arms])
        object.__setattr__(self, "arms", tuple(self.arms))
        object.__setattr__(self, "oracle_rules", tuple(self.oracle_rules))
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "u_arm", Q @ self.support.u_at)
        object.__setattr__(
            self, "oracle_values",
            np.ascontiguousarray(np.vstack([r.values for r in self.oracle_rules]))
            if self.oracle_rules else None,
        )

    @property
    def n_states(self) -> int:
        return self.utility.n_states

    @property
    def n_arms(self) -> int:
        return len(self.arms)

    @property
    def support_size(self) -> int:
        return self.support.size


def validate_instance(inst: Instance) -> None:
    """Raise a ValidationError subclass unless every structural invariant holds."""
    if inst.n_arms < 2:
        raise ValidationError(f"need K >= 2 arms, got {inst.n_arms}")
    if inst.support.size < 1:
        raise ValidationError("support must be nonempty")
    if inst.B_S <= 0:
        raise BoundViolation("B_S must be positive")

    n = inst.n_states
    for i, b in enumerate(inst.support.beliefs):
        as_belief(b, n)
    M = inst.support.size
    for i in range(M):
        for j in range(i + 1, M):
            if np.abs(inst.support.beliefs[i] - inst.support.beliefs[j]).sum() <= PROB_TOL:
                raise ValidationError(f"support beliefs {i} and {j} coincide")
    recompute = np.array([principal_utility_at(inst.support, inst.utility, i) for i in range(M)])
    if np.max(np.abs(recompute - inst.support.u_at)) > 1e-9:
        raise ValidationError("support u_at is inconsistent with the utility matrix")

    for k, arm in enumerate(inst.arms):
        if arm.q.size != M:
            raise ValidationError(f"arm {k} distribution has wrong length")
        if abs(float(arm.q.sum()) - 1.0) > PROB_TOL or np.any(arm.q < -PROB_TOL):
            raise SimplexViolation(f"arm {k} distribution invalid")

    if len(inst.oracle_rules) != inst.n_arms:
        raise ValidationError("need exactly one oracle rule per arm")
    if inst.oracle_margin <= 0:
        raise OracleMarginViolation("oracle margin must be positive")

    from . import scoring  # deferred: scoring depends on domain types

    for k, rule in enumerate(inst.oracle_rules):
        scoring.check_proper(rule, inst.support, inst.B_S)
        gk = scoring.agent_profit(inst, k, rule)
        for kp in range(inst.n_arms):
            if kp == k:
                continue
            if gk - scoring.agent_profit(inst, kp, rule) <= inst.oracle_margin:
                raise OracleMarginViolation(
                    f"oracle rule for arm {k} does not beat arm {kp} by more than "
                    f"the stated margin {inst.oracle_margin}"
                )


def make_instance(utility, support, arms, B_S, oracle_rules, oracle_margin, validate=True) -> Instance:
    inst = Instance(utility=utility, support=support, arms=tuple(arms), B_S=float(B_S),
                    oracle_rules=tuple(oracle_rules), oracle_margin=float(oracle_margin))
    if validate:
        validate_instance(inst)
    return inst


# ---------------------------------------------------------------------------
# instance (de)serialization
# ---------------------------------------------------------------------------

def instance_to_dict(inst: Instance) -> dict:
    return {
        "n_states": inst.n_states,
        "n_decisions": inst.utility.n_decisions,
        "u": [float(x) for x in inst.utility.u.ravel(order="C")],
        "B_u": inst.utility.B_u,
        "B_S": inst.B_S,
        "support": [[float(x) for x in b] for b in inst.support.beliefs],
        "arms": [{"q": [float(x) for x in a.q], "cost": float(a.cost)} for a in inst.arms],
        "oracle_rules": [
            {"values": [float(x) for x in r.values],
             "subgradients": [[float(x) for x in g] for g in r.subgradients]}
            for r in inst.oracle_rules
        ],
    }


def instance_from_dict(data: dict, validate=True) -> Instance:
    from . import scoring

    n_states = int(data["n_states"])
    n_decisions = int(data["n_decisions"])
    u_flat = np.asarray(data["u"], dtype=np.float64)
    if u_flat.ndim == 1:
        u = u_flat.reshape(n_states, n_decisions)
    else:
        u = u_flat  # also accept a nested matrix
    utility = UtilityModel(u=u, B_u=float(data["B_u"]))
    support = make_support(data["support"], utility)
    arms = [Arm(q=np.asarray(a["q"], dtype=np.float64), cost=float(a["cost"])) for a in data["arms"]]

    raw_rules = data.get("oracle_rules")
    if raw_rules:
        rules = tuple(
            scoring.ScoringRule(values=np.asarray(r["values"], dtype=np.float64),
                                subgradients=np.asarray(r["subgradients"], dtype=np.float64))
            for r in raw_rules
        )
        margins = scoring.oracle_margins(arms, rules)
    else:
        rules, margins = scoring.build_oracle_rules(utility, support, arms, float(data["B_S"]))
    margin = max(float(np.min(margins)) - 1e-9, 1e-12)
    return make_instance(utility, support, arms, float(data["B_S"]), rules, margin, validate=validate)


def save_instance(inst: Instance, path) -> None:
    with open(path, "w") as f:
        json.dump(instance_to_dict(inst), f, indent=2)
        f.write("\n")


def load_instance(path, validate=True) -> Instance:
    with open(path) as f:
        return instance_from_dict(json.load(f), validate=validate)
