"""Linear programs of the package: generic solve, the offline per-arm optimum,
the online optimistic per-arm program, oracle-rule construction, and the
feasibility projection used to sample random proper rules.

All programs share one variable block for a scoring rule in value/subgradient
form.  Subgradients are gauge-fixed to sum to zero across states (adding a
constant vector to a subgradient changes no payment, so this cuts nothing) and
then shifted by +B_S so every variable is nonnegative:

    columns  [G_0..G_{M-1}, x_{0,0}..x_{M-1,n-1}]   with   g = x - B_S.

Because every dot product of a subgradient with (sigma_j - sigma_i) or
(e_omega - sigma_i) kills constant shifts, the shifted x appears with the same
coefficients as g itself.  Score bounds imply 0 <= G_i <= B_S and |g| <= B_S,
so no explicit box rows are needed beyond the nonnegativity the solver
provides natively.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _simplex
from .domain import Instance, SupportSet, UtilityModel
from .scoring import ScoringRule

MAX_ITER = 10 ** 6


class NumericalFailure(RuntimeError):
    """Simplex gave up: iteration cap or irrecoverable numerical trouble."""


class OracleInfeasible(RuntimeError):
    """No rule separates the target arm by more than the margin floor."""

    def __init__(self, k, margin=None):
        self.k = k
        self.margin = margin
        msg = f"no oracle rule with positive margin exists for arm {k}"
        if margin is not None and np.isfinite(margin):
            msg += f" (best achievable margin {margin:.6g})"
        super().__init__(msg)


# ---------------------------------------------------------------------------
# generic LP container
# ---------------------------------------------------------------------------

@dataclass
class LinearProgram:
    """maximize objective . x  subject to  rows and box bounds."""

    objective: np.ndarray                  # (n,)
    rows: list                             # [(coeffs (n,), relation "<="|">="|"=", rhs), ...]
    lower: np.ndarray = None               # default 0
    upper: np.ndarray = None               # default +inf
    names: list = None                     # optional variable names for dumps

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=np.float64)
        n = self.objective.size
        if self.lower is None:
            self.lower = np.zeros(n)
        if self.upper is None:
            self.upper = np.full(n, np.inf)
        self.lower = np.asarray(self.lower, dtype=np.float64)
        self.upper = np.asarray(self.upper, dtype=np.float64)
        norm_rows = []
        for coeffs, rel, rhs in self.rows:
            coeffs = np.asarray(coeffs, dtype=np.float64)
            if coeffs.size != n:
                raise ValueError("constraint row references out-of-range variables")
            if rel not in ("<=", ">=", "="):
                raise ValueError(f"unknown relation {rel!r}")
            norm_rows.append((coeffs, rel, float(rhs)))
        self.rows = norm_rows

    @property
    def n_vars(self) -> int:
        return self.objective.size


@dataclass
class LpSolution:
    status: str                 # "optimal" | "infeasible" | "unbounded"
    objective: float
    x: np.ndarray = None
    duals: np.ndarray = None    # row multipliers with duals . rhs = objective at optimum


_STATUS_NAMES = {
    _simplex.OPTIMAL: "optimal",
    _simplex.INFEASIBLE: "infeasible",
    _simplex.UNBOUNDED: "unbounded",
}


def _solve_arrays(A, b, neq, c, pivot_mode, max_iter=MAX_ITER):
    """Raw kernel call; raises NumericalFailure on the iteration-limit status."""
    status, x, obj, basis, iters = _simplex.simplex_core(
        np.ascontiguousarray(A, dtype=np.float64),
        np.ascontiguousarray(b, dtype=np.float64),
        neq,
        np.ascontiguousarray(c, dtype=np.float64),
        pivot_mode,
        max_iter,
    )
    if status == _simplex.ITERATION_LIMIT:
        raise NumericalFailure(f"simplex exceeded {max_iter} iterations or stalled")
    return status, x, obj, basis


def _duals_from_basis(A, b, neq, c, basis):
    """Reconstruct row multipliers y with y . b = optimal objective.

    The kernel's internal rows are the input rows scaled by the sign of b;
    basis indices refer to [structural | slack | artificial] columns of that
    internal matrix, so the basis matrix is rebuilt here column by column.
    """
    m, n = A.shape
    sgn = np.where(b < 0.0, -1.0, 1.0)
    B = np.empty((m, m))
    cb = np.zeros(m)
    for pos, j in enumerate(basis):
        if j < n:
            B[:, pos] = sgn * A[:, j]
            cb[pos] = c[j]
        elif j < n + (m - neq):
            col = np.zeros(m)
            row = neq + (j - n)
            col[row] = sgn[row]
            B[:, pos] = col
        else:
            col = np.zeros(m)
            col[j - n - (m - neq)] = 1.0
            B[:, pos] = col
    try:
        y_int = np.linalg.solve(B.T, cb)
    except np.linalg.LinAlgError:
        y_int = np.linalg.lstsq(B.T, cb, rcond=None)[0]
    return sgn * y_int


def solve(prob: LinearProgram, pivot_mode: int = 0, max_iter: int = MAX_ITER,
          want_duals: bool = False) -> LpSolution:
    """Solve a LinearProgram (maximize convention).

    pivot_mode 0 is Bland's rule (default, guaranteed termination); 1 is the
    Dantzig fast path with an automatic Bland fallback.  Duals are reported in
    the original row order and satisfy duals . rhs = objective at an optimum;
    they are only offered when no variable needed a box transformation.
    """
    n = prob.n_vars
    lo, hi = prob.lower, prob.upper

    # column transforms to reach x >= 0 computational form
    col_map = []        # per original var: ("id", j) | ("shift", j, lb) | ("neg", j, ub) | ("split", j+, j-)
    extra_rows = []     # (kernel column index, upper bound) for doubly-bounded vars
    ncols = 0
    plain_boxes = True
    for j in range(n):
        l, u = lo[j], hi[j]
        if l == 0.0 and u == np.inf:
            col_map.append(("id", ncols)); ncols += 1
        elif np.isfinite(l):
            plain_boxes = False
            col_map.append(("shift", ncols, l))
            if np.isfinite(u):
                extra_rows.append((ncols, u - l))
            ncols += 1
        elif np.isfinite(u):
            plain_boxes = False
            col_map.append(("neg", ncols, u)); ncols += 1
        else:
            plain_boxes = False
            col_map.append(("split", ncols, ncols + 1)); ncols += 2

    eq_rows = [i for i, r in enumerate(prob.rows) if r[1] == "="]
    in_rows = [i for i, r in enumerate(prob.rows) if r[1] != "="]
    order = eq_rows + in_rows
    m = len(order) + len(extra_rows)
    neq = len(eq_rows)

    A = np.zeros((m, ncols))
    b = np.zeros(m)
    obj_const = 0.0
    c_max = np.zeros(ncols)

    def place(coeffs, target_row=None):
        out = np.zeros(ncols)
        shift_total = 0.0
        for j in range(n):
            t = col_map[j]
            if t[0] == "id":
                out[t[1]] = coeffs[j]
            elif t[0] == "shift":
                out[t[1]] = coeffs[j]
                shift_total += coeffs[j] * t[2]
            elif t[0] == "neg":
                out[t[1]] = -coeffs[j]
                shift_total += coeffs[j] * t[2]
            else:
                out[t[1]] = coeffs[j]
                out[t[2]] = -coeffs[j]
        return out, shift_total

    c_max, obj_const = place(prob.objective)
    for pos, i in enumerate(order):
        coeffs, rel, rhs = prob.rows[i]
        row, shift = place(coeffs)
        rhs = rhs - shift
        if rel == ">=":
            row, rhs = -row, -rhs
        A[pos], b[pos] = row, rhs
    for pos, (col, ub) in enumerate(extra_rows):
        A[len(order) + pos, col] = 1.0
        b[len(order) + pos] = ub

    status, x_k, obj_k, basis = _solve_arrays(A, b, neq, -c_max, pivot_mode, max_iter)
    name = _STATUS_NAMES[status]
    if name != "optimal":
        return LpSolution(status=name,
                          objective=-np.inf if name == "infeasible" else np.inf)

    x = np.empty(n)
    for j in range(n):
        t = col_map[j]
        if t[0] == "id":
            x[j] = x_k[t[1]]
        elif t[0] == "shift":
            x[j] = x_k[t[1]] + t[2]
        elif t[0] == "neg":
            x[j] = t[2] - x_k[t[1]]
        else:
            x[j] = x_k[t[1]] - x_k[t[2]]

    duals = None
    if want_duals and plain_boxes:
        y = -_duals_from_basis(A, b, neq, -c_max, basis)   # maximize convention
        duals = np.empty(len(prob.rows))
        for pos, i in enumerate(order):
            duals[i] = -y[pos] if prob.rows[i][1] == ">=" else y[pos]
    return LpSolution(status="optimal", objective=-obj_k + obj_const, x=x, duals=duals)


# ---------------------------------------------------------------------------
# shared scoring-rule feasibility block
# ---------------------------------------------------------------------------

def _savage_block(support: SupportSet, B_S: float):
    """Equality and inequality rows over [G (M), x (M*n)] encoding rule feasibility."""
    pts = support.beliefs
    M, n = pts.shape
    nsav = M + M * n

    A_eq = np.zeros((M, nsav))
    b_eq = np.full(M, n * B_S)
    for i in range(M):
        A_eq[i, M + i * n: M + (i + 1) * n] = 1.0     # sum_w x_iw = n*B_S  (gauge)

    n_conv = M * (M - 1)
    A_in = np.zeros((n_conv + 2 * M * n, nsav))
    b_in = np.zeros(n_conv + 2 * M * n)
    r = 0
    for i in range(M):
        for j in range(M):
            if i == j:
                continue
            # G_i - G_j + x_i . (sigma_j - sigma_i) <= 0
            A_in[r, i] = 1.0
            A_in[r, j] -= 1.0
            A_in[r, M + i * n: M + (i + 1) * n] = pts[j] - pts[i]
            b_in[r] = 0.0
            r += 1
    for i in range(M):
        for w in range(n):
            # score lower: -G_i - x_iw + sigma_i . x_i <= 0
            A_in[r, i] = -1.0
            A_in[r, M + i * n: M + (i + 1) * n] = pts[i]
            A_in[r, M + i * n + w] -= 1.0
            b_in[r] = 0.0
            # score upper: G_i + x_iw - sigma_i . x_i <= B_S
            A_in[r + 1, i] = 1.0
            A_in[r + 1, M + i * n: M + (i + 1) * n] = -pts[i]
            A_in[r + 1, M + i * n + w] += 1.0
            b_in[r + 1] = B_S
            r += 2
    return A_eq, b_eq, A_in, b_in


def _rule_from_solution(x, M, n, B_S, offset=0) -> ScoringRule:
    G = x[offset: offset + M].copy()
    g = x[offset + M: offset + M + M * n].reshape(M, n) - B_S
    return ScoringRule(values=G, subgradients=g)


def _savage_names(M, n, prefix=()):
    names = list(prefix)
    names += [f"G[{i}]" for i in range(M)]
    names += [f"xg[{i}][{w}]" for i in range(M) for w in range(n)]
    return names


# ---------------------------------------------------------------------------
# offline per-arm optimum LP
# ---------------------------------------------------------------------------

def _lp_k_arrays(inst: Instance, k: int, q, C, slack):
    M, n, K = inst.support_size, inst.n_states, inst.n_arms
    A_eq, b_eq, A_in, b_in = _savage_block(inst.support, inst.B_S)
    pair_rows, pair_rhs, pairs = [], [], []
    for kp in range(K):
        if kp == k:
            continue
        rhs = C[k, kp] - slack[k, kp]
        if not np.isfinite(rhs):
            continue
        row = np.zeros(M + M * n)
        row[:M] = q[kp] - q[k]          # (q_k - q_k') . G >= rhs, negated to <=
        pair_rows.append(row)
        pair_rhs.append(-rhs)
        pairs.append(kp)
    if pair_rows:
        A_in = np.vstack([A_in] + [np.asarray(pair_rows)])
        b_in = np.concatenate([b_in, pair_rhs])
    c_min = np.zeros(M + M * n)
    c_min[:M] = q[k]                    # minimize expected payment to arm k
    return A_eq, b_eq, A_in, b_in, c_min, pairs


def _normalize_lp_k_inputs(inst, q, C, slack):
    K = inst.n_arms
    q = inst.Q if q is None else np.asarray(q, dtype=np.float64)
    if C is None:
        C = inst.costs[:, None] - inst.costs[None, :]
    else:
        C = np.asarray(C, dtype=np.float64)
    if slack is None:
        slack = np.zeros((K, K))
    elif np.isscalar(slack):
        slack = np.full((K, K), float(slack))
    else:
        slack = np.asarray(slack, dtype=np.float64)
    return q, C, slack


def solve_lp_k(inst: Instance, k: int, q=None, C=None, slack=None, pivot_mode: int = 0):
    """Best principal profit while making arm k a (weak) best response.

    q defaults to the true arm distributions, C to the true pairwise cost
    differences, slack to zero.  Returns (h, rule); infeasible programs give
    (-inf, None).
    """
    q, C, slack = _normalize_lp_k_inputs(inst, q, C, slack)
    A_eq, b_eq, A_in, b_in, c_min, _ = _lp_k_arrays(inst, k, q, C, slack)
    A = np.vstack([A_eq, A_in])
    b = np.concatenate([b_eq, b_in])
    status, x, obj, _basis = _solve_arrays(A, b, len(b_eq), c_min, pivot_mode)
    if status == _simplex.INFEASIBLE:
        return -np.inf, None
    if status != _simplex.OPTIMAL:
        raise NumericalFailure("per-arm optimum LP reported unbounded — bounded by construction")
    u_k = float(q[k] @ inst.support.u_at)
    return u_k - obj, _rule_from_solution(x, inst.support_size, inst.n_states, inst.B_S)


def build_lp_k(inst: Instance, k: int, q=None, C=None, slack=None) -> LinearProgram:
    """The same program as solve_lp_k, packaged for inspection/dumping."""
    q, C, slack = _normalize_lp_k_inputs(inst, q, C, slack)
    A_eq, b_eq, A_in, b_in, c_min, _ = _lp_k_arrays(inst, k, q, C, slack)
    rows = [(A_eq[i], "=", b_eq[i]) for i in range(len(b_eq))]
    rows += [(A_in[i], "<=", b_in[i]) for i in range(len(b_in))]
    return LinearProgram(objective=-c_min, rows=rows,
                         names=_savage_names(inst.support_size, inst.n_states))


# ---------------------------------------------------------------------------
# online optimistic per-arm LP
# ---------------------------------------------------------------------------

class UcbTemplate:
    """Preassembled optimistic program; only the estimate-dependent rows change.

    Columns: [v, G (M), x (M*n)].  Row order: gauge equalities, convexity,
    score bounds, v <= B_S, the two v-band rows, then up to K-1 pairwise rows
    (filled per solve; unused tail sliced off).
    """

    def __init__(self, inst: Instance):
        M, n, K = inst.support_size, inst.n_states, inst.n_arms
        self.M, self.n, self.K = M, n, K
        self.B_S, self.B_u = inst.B_S, inst.utility.B_u
        A_eq, b_eq, A_in, b_in = _savage_block(inst.support, inst.B_S)
        nsav = M + M * n
        self.ncols = 1 + nsav
        n_static = len(b_eq) + len(b_in)
        rows = n_static + 1 + 2 + (K - 1)
        self.A = np.zeros((rows, self.ncols))
        self.b = np.zeros(rows)
        self.neq = len(b_eq)
        self.A[: self.neq, 1:] = A_eq
        self.b[: self.neq] = b_eq
        self.A[self.neq: n_static, 1:] = A_in
        self.b[self.neq: n_static] = b_in
        self.A[n_static, 0] = 1.0                    # v <= B_S
        self.b[n_static] = inst.B_S
        self.r_band = n_static + 1
        self.A[self.r_band, 0] = 1.0                 # v - qhat_k . G <= B_S * I_q(k)
        self.A[self.r_band + 1, 0] = -1.0            # -v + qhat_k . G <= B_S * I_q(k)
        self.r_pair = self.r_band + 2
        self.A[self.r_pair:, 0] = -1.0               # -v + qhat_k' . G <= -(C_hat - pad)
        self.c = np.zeros(self.ncols)
        self.c[0] = 1.0                              # minimize v

    def solve(self, k, q_hat, radii, u_hat_k, c_hat_row, i_c_row, tilde_values_k,
              pivot_mode=1):
        """Returns (h_hat, values, subgradients, fallback_used)."""
        M, B_S, B_u = self.M, self.B_S, self.B_u
        A, b = self.A, self.b
        band = B_S * radii[k]
        A[self.r_band, 1: 1 + M] = -q_hat[k]
        A[self.r_band + 1, 1: 1 + M] = q_hat[k]
        b[self.r_band] = band
        b[self.r_band + 1] = band
        r = self.r_pair
        for kp in range(self.K):
            if kp == k or not np.isfinite(i_c_row[kp]):
                continue
            A[r, 1: 1 + M] = q_hat[kp]
            b[r] = -(c_hat_row[kp] - (i_c_row[kp] + B_S * radii[kp]))
            r += 1
        status, x, obj, _basis = _solve_arrays(A[:r], b[:r], self.neq, self.c, pivot_mode)
        if status == _simplex.OPTIMAL:
            h_hat = u_hat_k + B_u * radii[k] - obj
            G = x[1: 1 + M]
            g = x[1 + M:].reshape(M, self.n) - B_S
            return h_hat, G, g, False
        if status == _simplex.INFEASIBLE:
            v_tilde = float(tilde_values_k @ q_hat[k])
            h_hat = u_hat_k - v_tilde + (B_u + B_S) * radii[k]
            return h_hat, None, None, True
        raise NumericalFailure("optimistic per-arm LP reported unbounded — v is boxed")


def _ucb_inputs(inst, state, k, graph, radii, t_round):
    from . import estimation

    if radii is None:
        radii = estimation.radius_vector(state, t_round=t_round)
    if graph is None:
        graph = estimation.cost_estimate(state, inst.B_S, radii=radii)
    u_hat_k = estimation.u_hat(state, inst, k)
    return graph, radii, u_hat_k


def solve_ucb_lp(inst: Instance, state, k: int, graph=None, radii=None,
                 template: UcbTemplate = None, t_round=None, pivot_mode: int = 1):
    """Optimistic upper bound and witness rule for arm k at the current round.

    Falls back to the arm's oracle rule with the pessimistic-payment bound
    when the program is infeasible.  Returns (h_hat, ScoringRule).
    """
    graph, radii, u_hat_k = _ucb_inputs(inst, state, k, graph, radii, t_round)
    if template is None:
        template = UcbTemplate(inst)
    q_hat = state.q_hat_matrix()
    h_hat, G, g, fb = template.solve(k, q_hat, radii, u_hat_k,
                                     graph.c_hat[k], graph.i_c[k],
                                     inst.oracle_values[k], pivot_mode=pivot_mode)
    rule = inst.oracle_rules[k] if fb else ScoringRule(values=G, subgradients=g)
    return h_hat, rule


def build_ucb_lp(inst: Instance, state, k: int, graph=None, radii=None,
                 t_round=None) -> LinearProgram:
    """The optimistic program in generic form (for --dump-lp); rhs uses current estimates."""
    graph, radii, _u_hat_k = _ucb_inputs(inst, state, k, graph, radii, t_round)
    tmpl = UcbTemplate(inst)
    q_hat = state.q_hat_matrix()
    M, B_S = tmpl.M, tmpl.B_S
    A, b = tmpl.A.copy(), tmpl.b.copy()
    band = B_S * radii[k]
    A[tmpl.r_band, 1: 1 + M] = -q_hat[k]
    A[tmpl.r_band + 1, 1: 1 + M] = q_hat[k]
    b[tmpl.r_band] = band
    b[tmpl.r_band + 1] = band
    r = tmpl.r_pair
    for kp in range(tmpl.K):
        if kp == k or not np.isfinite(graph.i_c[k, kp]):
            continue
        A[r, 1: 1 + M] = q_hat[kp]
        b[r] = -(graph.c_hat[k, kp] - (graph.i_c[k, kp] + B_S * radii[kp]))
        r += 1
    rows = [(A[i], "=", b[i]) for i in range(tmpl.neq)]
    rows += [(A[i], "<=", b[i]) for i in range(tmpl.neq, r)]
    return LinearProgram(objective=-tmpl.c, rows=rows,
                         names=_savage_names(M, tmpl.n, prefix=("v",)))


# ---------------------------------------------------------------------------
# oracle-rule margin LP and feasibility projection
# ---------------------------------------------------------------------------

def oracle_margin_lp(utility: UtilityModel, support: SupportSet, arms, B_S: float, k: int):
    """Maximize the profit margin of arm k over all rivals; (margin, rule).

    Infeasible programs (no nonnegative margin exists) return (-inf, None).
    """
    M, n = support.size, support.n_states
    K = len(arms)
    Q = np.vstack([np.asarray(a.q, dtype=np.float64) for a in arms])
    costs = np.array([a.cost for a in arms])
    A_eq, b_eq, A_in, b_in = _savage_block(support, B_S)
    nsav = M + M * n
    ncols = 1 + nsav                       # [margin, G, x]

    A = np.zeros((len(b_eq) + len(b_in) + K - 1, ncols))
    b = np.empty(len(b_eq) + len(b_in) + K - 1)
    A[: len(b_eq), 1:] = A_eq
    b[: len(b_eq)] = b_eq
    A[len(b_eq): len(b_eq) + len(b_in), 1:] = A_in
    b[len(b_eq): len(b_eq) + len(b_in)] = b_in
    r = len(b_eq) + len(b_in)
    for kp in range(K):
        if kp == k:
            continue
        A[r, 0] = 1.0
        A[r, 1: 1 + M] = Q[kp] - Q[k]      # m + (q_k' - q_k) . G <= c_k' - c_k
        b[r] = costs[kp] - costs[k]
        r += 1
    c = np.zeros(ncols)
    c[0] = -1.0                            # maximize m
    status, x, obj, _basis = _solve_arrays(A, b, len(b_eq), c, 0)
    if status == _simplex.INFEASIBLE:
        return -np.inf, None
    if status != _simplex.OPTIMAL:
        raise NumericalFailure("margin LP reported unbounded — payments are bounded")
    return -obj, _rule_from_solution(x, M, n, B_S, offset=1)


def project_rule(raw_values, raw_subgradients, support: SupportSet, B_S: float) -> ScoringRule:
    """L1-closest feasible rule to arbitrary raw values/subgradients.

    Residuals are split into nonnegative parts and their sum minimized subject
    to the feasibility rows; already-feasible (gauge-fixed) inputs come back
    unchanged.
    """
    raw_values = np.asarray(raw_values, dtype=np.float64)
    raw_g = np.asarray(raw_subgradients, dtype=np.float64)
    M, n = support.size, support.n_states
    nsav = M + M * n
    ncols = 3 * nsav                       # [G, x] + positive and negative residuals
    A_eq_f, b_eq_f, A_in, b_in = _savage_block(support, B_S)

    target = np.concatenate([raw_values, (raw_g + B_S).ravel()])
    A_eq = np.zeros((M + nsav, ncols))
    b_eq = np.empty(M + nsav)
    A_eq[:M, :nsav] = A_eq_f
    b_eq[:M] = b_eq_f
    for j in range(nsav):                  # var_j - p_j + q_j = target_j
        A_eq[M + j, j] = 1.0
        A_eq[M + j, nsav + j] = -1.0
        A_eq[M + j, 2 * nsav + j] = 1.0
        b_eq[M + j] = target[j]

    A_in_full = np.zeros((len(b_in), ncols))
    A_in_full[:, :nsav] = A_in
    A = np.vstack([A_eq, A_in_full])
    b = np.concatenate([b_eq, b_in])
    c = np.zeros(ncols)
    c[nsav:] = 1.0
    status, x, _obj, _basis = _solve_arrays(A, b, len(b_eq), c, 0)
    if status != _simplex.OPTIMAL:
        raise NumericalFailure("feasibility projection LP must be solvable — the polytope is nonempty")
    return _rule_from_solution(x, M, n, B_S)


# ---------------------------------------------------------------------------
# plain-text dump
# ---------------------------------------------------------------------------

def format_lp(prob: LinearProgram, name: str = "lp") -> str:
    """Human-readable rendering of a LinearProgram."""
    n = prob.n_vars
    names = prob.names if prob.names else [f"x{j}" for j in range(n)]

    def term_str(coeffs):
        parts = []
        for j in range(n):
            a = coeffs[j]
            if a == 0.0:
                continue
            sign = "-" if a < 0 else ("+" if parts else "")
            mag = abs(a)
            coef = "" if mag == 1.0 else f"{mag:.6g} "
            parts.append(f"{sign} {coef}{names[j]}".strip())
        return " ".join(parts) if parts else "0"

    out = [f"\\ {name}: {n} variables, {len(prob.rows)} rows",
           "maximize", f"  {term_str(prob.objective)}", "subject to"]
    for i, (coeffs, rel, rhs) in enumerate(prob.rows):
        op = {"<=": "<=", ">=": ">=", "=": "="}[rel]
        out.append(f"  r{i}: {term_str(coeffs)} {op} {rhs:.6g}")
    out.append("bounds")
    for j in range(n):
        lo = prob.lower[j]
        hi = prob.upper[j]
        if lo == 0.0 and hi == np.inf:
            continue
        out.append(f"  {lo:.6g} <= {names[j]} <= {hi:.6g}")
    out.append("end")
    return "\n".join(out) + "\n"
