"""The two online identification algorithms and their shared machinery.

Both algorithms announce one oracle rule per arm to seed the estimators, then
repeat: rebuild the cost graph, solve the optimistic per-arm program, and
announce a mix of the leader's optimistic rule with its oracle rule.  When the
agent's response contradicts the leader, a binary search along the mixing path
repairs the cost estimates; otherwise the round counts as normal exploration.

Fixed-confidence runs stop once the leader's radius passes the beta threshold
and return the last announced rule.  Fixed-budget runs spend exactly T
announcements and return the announced rule from the candidate round with the
smallest recorded radius snapshot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import estimation, lp
from .agent import play_round
from .domain import Instance
from .scoring import ScoringRule, mix

ARGMAX_TIE_TOL = 1e-12
DEFAULT_ROUND_CAP = 100_000

KIND_INIT = 0
KIND_NORMAL = 1
KIND_BSEARCH = 2


@dataclass
class ScheduleConfig:
    """Accuracy/confidence targets plus the fixed-budget fields."""

    epsilon: float
    delta: float = None
    mode: str = "dependent"        # mixing-weight schedule: "dependent" | "independent"
    T: int = None                  # announcement budget (fixed-budget runs)
    a: float = None                # exploration constant (fixed-budget radius)

    def __post_init__(self):
        if self.mode not in ("dependent", "independent"):
            raise ValueError(f"alpha mode must be 'dependent' or 'independent', got {self.mode!r}")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.delta is not None and not 0 < self.delta <= 1:
            raise ValueError("delta must lie in (0, 1]")
        if self.T is not None and self.T < 1:
            raise ValueError("budget T must be at least 1")
        if self.a is not None and self.a <= 0:
            raise ValueError("exploration constant a must be positive")


class Transcript:
    """Per-announcement log.  Scalar columns are always kept; the array
    columns (estimates, radii, rule values, cost graph) only when full=True."""

    def __init__(self, n_arms, support_size, full=True):
        self.K, self.M = n_arms, support_size
        self.full = full
        self._kind, self._round, self._k_star, self._k_t = [], [], [], []
        self._alpha, self._beta_snap = [], []
        self._values, self._h_hat, self._s_hat = [], [], []
        self._q_hat, self._radius, self._c_hat, self._i_c = [], [], [], []

    def append(self, kind, rnd, k_star, k_t, alpha_val, beta_snap,
               values=None, h_hat=None, s_hat=None, q_hat=None, radius=None,
               c_hat=None, i_c=None):
        self._kind.append(kind)
        self._round.append(rnd)
        self._k_star.append(k_star)
        self._k_t.append(k_t)
        self._alpha.append(alpha_val)
        self._beta_snap.append(beta_snap)
        if not self.full:
            return
        nanv = np.full(self.M, np.nan)
        nank = np.full(self.K, np.nan)
        nankm = np.full((self.K, self.M), np.nan)
        nankk = np.full((self.K, self.K), np.nan)
        self._values.append(values.copy() if values is not None else nanv)
        self._h_hat.append(h_hat.copy() if h_hat is not None else nank)
        self._s_hat.append(s_hat.copy() if s_hat is not None else nankm)
        self._q_hat.append(q_hat.copy() if q_hat is not None else nankm)
        self._radius.append(radius.copy() if radius is not None else nank)
        self._c_hat.append(c_hat.copy() if c_hat is not None else nankk)
        self._i_c.append(i_c.copy() if i_c is not None else nankk)

    def finalize(self):
        self.kind = np.asarray(self._kind, dtype=np.int64)
        self.round = np.asarray(self._round, dtype=np.int64)
        self.k_star = np.asarray(self._k_star, dtype=np.int64)
        self.k_t = np.asarray(self._k_t, dtype=np.int64)
        self.alpha = np.asarray(self._alpha, dtype=np.float64)
        self.beta_snap = np.asarray(self._beta_snap, dtype=np.float64)
        R = self.kind.size
        if self.full:
            stack = lambda rows, shape: (np.stack(rows) if rows
                                         else np.zeros((0,) + shape))
            self.values = stack(self._values, (self.M,))
            self.h_hat = stack(self._h_hat, (self.K,))
            self.s_hat = stack(self._s_hat, (self.K, self.M))
            self.q_hat = stack(self._q_hat, (self.K, self.M))
            self.radius = stack(self._radius, (self.K,))
            self.c_hat = stack(self._c_hat, (self.K, self.K))
            self.i_c = stack(self._i_c, (self.K, self.K))
        return self

    def __len__(self):
        return len(self._kind)


@dataclass
class RunOutcome:
    rule: ScoringRule            # None when the run produced no candidate
    status: str                  # "success" | "no-output" | "round-cap-exceeded"
    tau: int                     # announcements made
    tau1: int                    # normal rounds (leader matched)
    tau2: int                    # forced rounds (mismatches + search announcements)
    n_bs: int                    # binary-search invocations
    event_E: bool                # concentration event held at every checked round
    transcript: Transcript = field(repr=False, default=None)
    best_round: int = -1         # fixed-budget: round whose rule was returned


def alpha(schedule: ScheduleConfig, L_k: int, M: int, B_sum: float) -> float:
    """Mixing weight on the oracle rule for the current leader."""
    if schedule.mode == "dependent":
        if L_k <= 0:
            return 1.0
        return min(math.sqrt(M / L_k), 1.0)
    return schedule.epsilon / (4.0 * B_sum)


def beta(schedule: ScheduleConfig, alpha_now: float, B_sum: float) -> float:
    """Stopping threshold; <= 0 means the stop test cannot fire yet."""
    if alpha_now >= 1.0 - 1e-12:
        return 0.0
    return (schedule.epsilon - 2.0 * alpha_now * B_sum) / (1.0 - alpha_now)


class _EventTracker:
    """Incremental concentration-event check against the true distributions."""

    def __init__(self, inst):
        self.Q = inst.Q
        self.ok = True

    def check(self, q_hat, radii):
        if not self.ok:
            return
        err = np.abs(q_hat - self.Q).sum(axis=1)
        if np.any(err > radii):       # +inf radius (unvisited) never trips
            self.ok = False


def binary_search(inst: Instance, state: estimation.EstimatorState,
                  S0: ScoringRule, S1: ScoringRule, k0: int, k1: int,
                  rng: np.random.Generator, budget: int = None,
                  transcript: Transcript = None, tracker: _EventTracker = None,
                  tie_break: str = "lowest", min_width: float = None) -> int:
    """Halve the mixing interval between S0 and S1 until it is narrower than
    the entry radii (or a width override), announcing the midpoint each step.

    k0/k1 are the responses to S0/S1; the interval keeps lambda values whose
    mix still draws response k1 above, k0 (or anything else) below.  Returns
    the number of announcements; the estimator state absorbs each of them.
    """
    if min_width is None:
        t_entry = max(state.t, 1)
        r = min(estimation.radius_q(state, k0, t_round=t_entry),
                estimation.radius_q(state, k1, t_round=t_entry))
    else:
        r = min_width
    lo, hi = 0.0, 1.0
    used = 0
    while hi - lo >= r and (budget is None or used < budget):
        lam = 0.5 * (lo + hi)
        rule = mix(S0, S1, lam)
        t_now = state.t + 1
        radii = estimation.radius_vector(state, t_round=t_now)
        q_hat = state.q_hat_matrix()
        if tracker is not None:
            tracker.check(q_hat, radii)
        out = play_round(inst, rule, rng, tie_break=tie_break)
        estimation.update(state, rule, out)
        used += 1
        if transcript is not None:
            transcript.append(KIND_BSEARCH, t_now, k1, out.arm, lam, np.nan,
                              values=rule.values, q_hat=q_hat, radius=radii)
        if out.arm == k1:
            hi = lam
        else:
            lo = lam
    return used


def _init_rounds(inst, state, rng, budget, transcript, tracker, tie_break):
    """Announce each arm's oracle rule once; returns announcements used."""
    used = 0
    for k in range(inst.n_arms):
        if used >= budget:
            return used
        rule = inst.oracle_rules[k]
        t_now = state.t + 1
        radii = estimation.radius_vector(state, t_round=t_now)
        q_hat = state.q_hat_matrix()
        tracker.check(q_hat, radii)
        out = play_round(inst, rule, rng, tie_break=tie_break)
        estimation.update(state, rule, out)
        transcript.append(KIND_INIT, t_now, -1, out.arm, np.nan, np.nan,
                          values=rule.values, q_hat=q_hat, radius=radii)
        used += 1
    return used


def _leader(h_hat):
    top = np.max(h_hat)
    return int(np.flatnonzero(h_hat >= top - ARGMAX_TIE_TOL)[0])


def _solve_all_arms(inst, template, q_hat, radii, graph, u_hats, pivot_mode):
    K, M = inst.n_arms, inst.support_size
    h_hat = np.empty(K)
    s_values = np.empty((K, M))
    s_grads = [None] * K
    for k in range(K):
        h, G, g, fallback = template.solve(k, q_hat, radii, u_hats[k],
                                           graph.c_hat[k], graph.i_c[k],
                                           inst.oracle_values[k], pivot_mode)
        h_hat[k] = h
        if fallback:
            s_values[k] = inst.oracle_values[k]
            s_grads[k] = inst.oracle_rules[k].subgradients
        else:
            s_values[k] = G
            s_grads[k] = g
    return h_hat, s_values, s_grads


def run_fixed_confidence(inst: Instance, schedule: ScheduleConfig,
                         rng: np.random.Generator,
                         round_cap: int = DEFAULT_ROUND_CAP,
                         tie_break: str = "lowest", m_param: int = None,
                         full_transcript: bool = True,
                         pivot_mode: int = 1) -> RunOutcome:
    """Run until the stop test certifies the announced rule, or the cap hits."""
    B_sum = inst.B_S + inst.utility.B_u
    if schedule.delta is None:
        raise ValueError("fixed-confidence runs need delta")
    if schedule.epsilon > 2.0 * B_sum:
        raise ValueError(f"epsilon must be at most 2(B_S+B_u) = {2 * B_sum}")
    K, M = inst.n_arms, inst.support_size
    state = estimation.EstimatorState(K, M, mode="fc", delta=schedule.delta,
                                      M_param=m_param)
    template = lp.UcbTemplate(inst)
    transcript = Transcript(K, M, full=full_transcript)
    tracker = _EventTracker(inst)
    u_at = inst.support.u_at

    budget = round_cap
    budget -= _init_rounds(inst, state, rng, budget, transcript, tracker, tie_break)
    L = np.zeros(K, dtype=np.int64)
    tau1 = tau2 = n_bs = 0
    status, final_rule = None, None

    while True:
        if budget <= 0:
            status = "round-cap-exceeded"
            break
        t_now = state.t + 1
        radii = estimation.radius_vector(state, t_round=t_now)
        q_hat = state.q_hat_matrix()
        tracker.check(q_hat, radii)
        graph = estimation.cost_estimate(state, inst.B_S, radii=radii)
        u_hats = q_hat @ u_at
        h_hat, s_values, s_grads = _solve_all_arms(inst, template, q_hat, radii,
                                                   graph, u_hats, pivot_mode)
        k_star = _leader(h_hat)
        a_now = alpha(schedule, L[k_star], state.M_param, B_sum)
        b_now = beta(schedule, a_now, B_sum)
        S_hat = ScoringRule(values=s_values[k_star], subgradients=s_grads[k_star])
        S_t = mix(S_hat, inst.oracle_rules[k_star], a_now)
        out = play_round(inst, S_t, rng, tie_break=tie_break)
        estimation.update(state, S_t, out)
        budget -= 1
        final_rule = S_t
        transcript.append(KIND_NORMAL, t_now, k_star, out.arm, a_now, b_now,
                          values=S_t.values, h_hat=h_hat, s_hat=s_values,
                          q_hat=q_hat, radius=radii, c_hat=graph.c_hat,
                          i_c=graph.i_c)
        if out.arm != k_star:
            n_bs += 1
            tau2 += 1
            used = binary_search(inst, state, S_t, inst.oracle_rules[k_star],
                                 out.arm, k_star, rng, budget=budget,
                                 transcript=transcript, tracker=tracker,
                                 tie_break=tie_break)
            budget -= used
            tau2 += used
        else:
            L[k_star] += 1
            tau1 += 1
            if 2.0 * B_sum * radii[k_star] <= b_now:
                status = "success"
                break

    return RunOutcome(rule=final_rule, status=status, tau=state.t, tau1=tau1,
                      tau2=tau2, n_bs=n_bs, event_E=tracker.ok,
                      transcript=transcript.finalize())


def run_fixed_budget(inst: Instance, schedule: ScheduleConfig,
                     rng: np.random.Generator, tie_break: str = "lowest",
                     bs_on_match: bool = False, m_param: int = None,
                     full_transcript: bool = True,
                     pivot_mode: int = 1) -> RunOutcome:
    """Spend exactly T announcements; return the candidate-round rule with the
    smallest radius snapshot (earliest on ties), or no-output if none exists.

    bs_on_match flips the search trigger to leader-matching rounds (the
    literal pseudocode variant) instead of mismatches.
    """
    B_sum = inst.B_S + inst.utility.B_u
    if schedule.T is None:
        raise ValueError("fixed-budget runs need the budget T")
    if schedule.a is None:
        raise ValueError("fixed-budget runs need the exploration constant a")
    if schedule.epsilon > 2.0 * B_sum:
        raise ValueError(f"epsilon must be at most 2(B_S+B_u) = {2 * B_sum}")
    K, M = inst.n_arms, inst.support_size
    state = estimation.EstimatorState(K, M, mode="fb", a=schedule.a,
                                      M_param=m_param)
    template = lp.UcbTemplate(inst)
    transcript = Transcript(K, M, full=full_transcript)
    tracker = _EventTracker(inst)
    u_at = inst.support.u_at

    budget = schedule.T
    budget -= _init_rounds(inst, state, rng, budget, transcript, tracker, tie_break)
    L = np.zeros(K, dtype=np.int64)
    tau1 = tau2 = n_bs = 0
    a_now = schedule.epsilon / (4.0 * B_sum)    # constant mixing weight
    best_snap, best_rule, best_round = np.inf, None, -1

    while budget > 0:
        t_now = state.t + 1
        radii = estimation.radius_vector(state, t_round=t_now)
        q_hat = state.q_hat_matrix()
        tracker.check(q_hat, radii)
        graph = estimation.cost_estimate(state, inst.B_S, radii=radii)
        u_hats = q_hat @ u_at
        h_hat, s_values, s_grads = _solve_all_arms(inst, template, q_hat, radii,
                                                   graph, u_hats, pivot_mode)
        k_star = _leader(h_hat)
        S_hat = ScoringRule(values=s_values[k_star], subgradients=s_grads[k_star])
        S_t = mix(S_hat, inst.oracle_rules[k_star], a_now)
        out = play_round(inst, S_t, rng, tie_break=tie_break)
        estimation.update(state, S_t, out)
        budget -= 1
        matched = out.arm == k_star
        snap = 2.0 * B_sum * radii[k_star] if matched else np.nan
        transcript.append(KIND_NORMAL, t_now, k_star, out.arm, a_now, snap,
                          values=S_t.values, h_hat=h_hat, s_hat=s_values,
                          q_hat=q_hat, radius=radii, c_hat=graph.c_hat,
                          i_c=graph.i_c)
        if matched:
            L[k_star] += 1
            tau1 += 1
            if snap < best_snap:
                best_snap, best_rule, best_round = snap, S_t, t_now
        else:
            tau2 += 1
        if (matched if bs_on_match else not matched):
            n_bs += 1
            used = binary_search(inst, state, S_t, inst.oracle_rules[k_star],
                                 out.arm, k_star, rng, budget=budget,
                                 transcript=transcript, tracker=tracker,
                                 tie_break=tie_break)
            budget -= used
            tau2 += used

    status = "success" if best_rule is not None else "no-output"
    return RunOutcome(rule=best_rule, status=status, tau=state.t, tau1=tau1,
                      tau2=tau2, n_bs=n_bs, event_E=tracker.ok,
                      transcript=transcript.finalize(), best_round=best_round)
