"""Online statistics for a single run: per-arm report histograms, confidence
radii, payment/utility estimates, and the pairwise cost-difference graph.

The cost graph is rebuilt from scratch every round (O(history * M * K) in a
jitted kernel): every historical announcement gives a one-sided bound on a
pairwise cost difference through the agent's revealed preference, the bounds
are paired into midpoint/halfwidth edges, and shortest halfwidth paths turn
the edges into estimates for every ordered pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .domain import Instance


class UnvisitedArm(RuntimeError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"arm {k} has no observations yet")


@dataclass
class EstimatorState:
    """Everything the learner knows after t announcements.

    mode "fc" uses the any-time confidence radius driven by delta; mode "fb"
    uses the fixed-budget radius sqrt(a / N_k).  M_param is the support-size
    parameter inside the fc radius (defaults to the true support size).
    """

    n_arms: int
    support_size: int
    mode: str = "fc"
    delta: float = None
    a: float = None
    M_param: int = None

    t: int = 0
    counts: np.ndarray = None
    hist: np.ndarray = None
    _hv: np.ndarray = field(default=None, repr=False)     # announced value vectors
    _hr: np.ndarray = field(default=None, repr=False)     # responding arm per announcement
    hist_len: int = 0

    def __post_init__(self):
        if self.mode not in ("fc", "fb"):
            raise ValueError(f"radius mode must be 'fc' or 'fb', got {self.mode!r}")
        if self.mode == "fc" and (self.delta is None or not 0 < self.delta <= 1):
            raise ValueError("fc mode needs delta in (0, 1]")
        if self.mode == "fb" and (self.a is None or self.a <= 0):
            raise ValueError("fb mode needs a > 0")
        if self.M_param is None:
            self.M_param = self.support_size
        self.counts = np.zeros(self.n_arms, dtype=np.int64)
        self.hist = np.zeros((self.n_arms, self.support_size))
        cap = 256
        self._hv = np.zeros((cap, self.support_size))
        self._hr = np.zeros(cap, dtype=np.int64)

    def q_hat(self, k: int) -> np.ndarray:
        if self.counts[k] == 0:
            raise UnvisitedArm(k)
        return self.hist[k] / self.counts[k]

    def q_hat_matrix(self) -> np.ndarray:
        """(K, M) empirical distributions; all-zero rows for unvisited arms."""
        denom = np.maximum(self.counts, 1).astype(np.float64)
        return self.hist / denom[:, None]

    def history_views(self):
        return self._hv[: self.hist_len], self._hr[: self.hist_len]


def update(state: EstimatorState, rule, outcome) -> EstimatorState:
    """Record one announcement: the rule's value vector plus the agent's response."""
    values = rule.values if hasattr(rule, "values") else np.asarray(rule, dtype=np.float64)
    k, report = outcome.arm, outcome.report
    state.t += 1
    state.counts[k] += 1
    state.hist[k, report] += 1.0
    if state.hist_len == state._hv.shape[0]:
        cap = 2 * state.hist_len
        hv = np.zeros((cap, state.support_size))
        hv[: state.hist_len] = state._hv
        hr = np.zeros(cap, dtype=np.int64)
        hr[: state.hist_len] = state._hr
        state._hv, state._hr = hv, hr
    state._hv[state.hist_len] = values
    state._hr[state.hist_len] = k
    state.hist_len += 1
    return state


def radius_q(state: EstimatorState, k: int, t_round: int = None) -> float:
    """Confidence radius for the L1 error of q_hat_k at the current round."""
    N = state.counts[k]
    if N == 0:
        raise UnvisitedArm(k)
    if state.mode == "fb":
        return math.sqrt(state.a / N)
    t = state.t + 1 if t_round is None else t_round
    log_term = math.log(4.0 * state.n_arms / state.delta) \
        + state.M_param * math.log(2.0) + 2.0 * math.log(t)
    return math.sqrt(2.0 * log_term / N)


def radius_vector(state: EstimatorState, t_round: int = None) -> np.ndarray:
    """(K,) radii with +inf for unvisited arms (no exception)."""
    out = np.full(state.n_arms, np.inf)
    for k in range(state.n_arms):
        if state.counts[k] > 0:
            out[k] = radius_q(state, k, t_round=t_round)
    return out


def v_hat(state: EstimatorState, rule, k: int) -> float:
    """Estimated expected payment of a rule to arm k."""
    values = rule.values if hasattr(rule, "values") else np.asarray(rule, dtype=np.float64)
    return float(values @ state.q_hat(k))


def u_hat(state: EstimatorState, inst: Instance, k: int) -> float:
    """Estimated expected principal utility of arm k."""
    return float(inst.support.u_at @ state.q_hat(k))


@dataclass(frozen=True)
class CostGraph:
    theta: np.ndarray      # (K, K) midpoints, antisymmetric where edges exist
    phi: np.ndarray        # (K, K) halfwidths, +inf where no edge
    has_edge: np.ndarray   # (K, K) bool
    c_hat: np.ndarray      # (K, K) shortest-path cost-difference estimates
    i_c: np.ndarray        # (K, K) summed halfwidths along the path, +inf if no path


@njit(cache=True)
def _rawmin_pass(hv, hr, L, qhat, K):
    """rawmin[a, b] = min over announcements answered by a of v_hat(S, a) - v_hat(S, b)."""
    M = qhat.shape[1]
    rawmin = np.full((K, K), np.inf)
    w = np.empty(K)
    for s in range(L):
        a = hr[s]
        for b in range(K):
            acc = 0.0
            for m in range(M):
                acc += hv[s, m] * qhat[b, m]
            w[b] = acc
        wa = w[a]
        for b in range(K):
            d = wa - w[b]
            if d < rawmin[a, b]:
                rawmin[a, b] = d
    return rawmin


@njit(cache=True)
def _graph_kernel(rawmin, pad):
    K = rawmin.shape[0]
    theta = np.zeros((K, K))
    phi = np.full((K, K), np.inf)
    has = np.zeros((K, K), np.bool_)
    for a in range(K):
        for b in range(K):
            if a == b:
                continue
            if np.isfinite(rawmin[a, b]) and np.isfinite(rawmin[b, a]):
                c_plus = rawmin[a, b] + pad[a, b]
                c_minus = -rawmin[b, a] - pad[a, b]
                theta[a, b] = 0.5 * (c_plus + c_minus)
                phi[a, b] = abs(0.5 * (c_plus - c_minus))
                has[a, b] = True

    # all-pairs shortest halfwidth paths with next-hop reconstruction
    dist = phi.copy()
    nxt = np.full((K, K), -1, np.int64)
    for i in range(K):
        dist[i, i] = 0.0
        nxt[i, i] = i
        for j in range(K):
            if i != j and has[i, j]:
                nxt[i, j] = j
    for mid in range(K):
        for i in range(K):
            dim = dist[i, mid]
            if not np.isfinite(dim):
                continue
            for j in range(K):
                nd = dim + dist[mid, j]
                if nd < dist[i, j]:
                    dist[i, j] = nd
                    nxt[i, j] = nxt[i, mid]

    c_hat = np.zeros((K, K))
    i_c = np.full((K, K), np.inf)
    for i in range(K):
        i_c[i, i] = 0.0
    for i in range(K):
        for j in range(i + 1, K):
            if nxt[i, j] < 0:
                continue
            csum = 0.0
            fsum = 0.0
            a = i
            steps = 0
            ok = True
            while a != j:
                b = nxt[a, j]
                if b < 0 or steps > K:
                    ok = False
                    break
                csum += theta[a, b]
                fsum += phi[a, b]
                a = b
                steps += 1
            if ok:
                c_hat[i, j] = csum
                c_hat[j, i] = -csum
                i_c[i, j] = fsum
                i_c[j, i] = fsum
    return theta, phi, has, c_hat, i_c


def cost_bounds(state: EstimatorState, k: int, kp: int, B_S: float, t_round: int = None):
    """Direct one-pair bounds (C_plus, C_minus); a side is None without data."""
    if k == kp:
        raise ValueError("cost bounds need two distinct arms")
    if state.counts[k] == 0 or state.counts[kp] == 0:
        return None, None
    hv, hr = state.history_views()
    diff = hv @ (state.q_hat(k) - state.q_hat(kp))
    pad = B_S * (radius_q(state, k, t_round) + radius_q(state, kp, t_round))
    from_k = diff[hr == k]
    from_kp = diff[hr == kp]
    c_plus = float(np.min(from_k)) + pad if from_k.size else None
    c_minus = float(np.max(from_kp)) - pad if from_kp.size else None
    return c_plus, c_minus


def cost_estimate(state: EstimatorState, B_S: float, radii=None, t_round: int = None) -> CostGraph:
    """Pairwise cost-difference estimates and halfwidths for every ordered pair."""
    K = state.n_arms
    if radii is None:
        radii = radius_vector(state, t_round=t_round)
    rawmin = _rawmin_pass(state._hv, state._hr, state.hist_len,
                          state.q_hat_matrix(), K)
    unvisited = state.counts == 0
    if unvisited.any():
        rawmin[unvisited, :] = np.inf
        rawmin[:, unvisited] = np.inf
    pad = B_S * (radii[:, None] + radii[None, :])
    theta, phi, has, c_hat, i_c = _graph_kernel(rawmin, pad)
    return CostGraph(theta=theta, phi=phi, has_edge=has, c_hat=c_hat, i_c=i_c)


def gamma(state: EstimatorState, inst: Instance, k: int, kp: int,
          oracle_margin: float = None, graph: CostGraph = None, t_round: int = None) -> float:
    """Inducement diagnostic: small values mean the mix weight alpha dominates
    the statistical uncertainty between arms k and kp."""
    if state.counts[k] == 0:
        raise UnvisitedArm(k)
    if state.counts[kp] == 0:
        raise UnvisitedArm(kp)
    margin = inst.oracle_margin if oracle_margin is None else oracle_margin
    if graph is None:
        graph = cost_estimate(state, inst.B_S, t_round=t_round)
    r_k = radius_q(state, k, t_round)
    r_kp = radius_q(state, kp, t_round)
    return float(2.0 / margin * (graph.i_c[k, kp] + inst.B_S * (r_k + r_kp)))
