"""Dense two-phase tableau simplex, jitted for the tiny programs this package solves.

The kernel works on a fixed "computational form":

    minimize    c . x
    subject to  A[i] . x  =  b[i]   for i <  neq
                A[i] . x  <= b[i]   for i >= neq
                x >= 0

Slack and artificial columns are appended internally.  Everything is plain
float64 arithmetic; the pivot rules are deterministic so identical inputs give
bit-identical outputs.

Pivot modes:
    0  Bland's rule (lowest eligible index; guaranteed termination)
    1  Dantzig's rule (most negative reduced cost) with a permanent switch to
       Bland after a long degenerate stall — the fast path used in hot loops.
"""

import numpy as np
from numba import njit

# status codes returned by the kernel
OPTIMAL = 0
INFEASIBLE = 1
UNBOUNDED = 2
ITERATION_LIMIT = 3

_RC_TOL = 1e-9      # reduced-cost tolerance for entering columns
_PIV_TOL = 1e-9     # smallest acceptable pivot element
_RATIO_TIE = 1e-10  # ratio-test tie window
_STALL_LIMIT = 200  # degenerate pivots before the fast path falls back to Bland


@njit(cache=True)
def _pick_entering(obj_row, ncols_allowed, bland):
    """Entering column index, or -1 when the current basis is optimal."""
    if bland:
        for j in range(ncols_allowed):
            if obj_row[j] < -_RC_TOL:
                return j
        return -1
    best = -_RC_TOL
    best_j = -1
    for j in range(ncols_allowed):
        if obj_row[j] < best:
            best = obj_row[j]
            best_j = j
    return best_j


@njit(cache=True)
def _pick_leaving(T, basis, col, m, rhs):
    """Ratio test with lowest-basis-index tie-breaking (anti-cycling)."""
    best_ratio = np.inf
    row = -1
    for i in range(m):
        a = T[i, col]
        if a > _PIV_TOL:
            ratio = T[i, rhs] / a
            if ratio < best_ratio - _RATIO_TIE:
                best_ratio = ratio
                row = i
            elif ratio < best_ratio + _RATIO_TIE and row >= 0:
                if basis[i] < basis[row]:
                    row = i
    return row


@njit(cache=True)
def _pivot(T, basis, row, col, nrows, ncols1):
    piv = T[row, col]
    for j in range(ncols1):
        T[row, j] /= piv
    T[row, col] = 1.0
    for i in range(nrows):
        if i == row:
            continue
        f = T[i, col]
        if f != 0.0:
            for j in range(ncols1):
                T[i, j] -= f * T[row, j]
            T[i, col] = 0.0
    basis[row] = col


@njit(cache=True)
def simplex_core(A, b, neq, c, pivot_mode, max_iter):
    """Returns (status, x, objective, basis, iterations)."""
    m, n = A.shape
    nslack = m - neq
    nstruct = n + nslack          # columns eligible in phase 2
    ncols = nstruct + m           # + one artificial per row
    rhs = ncols

    T = np.zeros((m + 1, ncols + 1))
    basis = np.empty(m, dtype=np.int64)
    for i in range(m):
        sgn = 1.0 if b[i] >= 0.0 else -1.0
        for j in range(n):
            T[i, j] = sgn * A[i, j]
        if i >= neq:
            T[i, n + (i - neq)] = sgn
        T[i, nstruct + i] = 1.0
        T[i, rhs] = sgn * b[i]
        basis[i] = nstruct + i

    # phase-1 reduced costs: cost 1 on artificials, all of which are basic
    for j in range(ncols + 1):
        s = 0.0
        for i in range(m):
            s += T[i, j]
        T[m, j] = -s
    for i in range(m):
        T[m, nstruct + i] += 1.0

    iters = 0
    bland = pivot_mode == 0
    stall = 0
    last_obj = T[m, rhs]
    for _phase in range(2):
        allowed = ncols if _phase == 0 else nstruct
        while True:
            col = _pick_entering(T[m], allowed, bland)
            if col < 0:
                break
            row = _pick_leaving(T, basis, col, m, rhs)
            if row < 0:
                if _phase == 0:
                    # phase-1 objective is bounded below; a missing pivot row
                    # here is numerical trouble, not a real unbounded ray
                    return ITERATION_LIMIT, np.zeros(n), 0.0, basis, iters
                return UNBOUNDED, np.zeros(n), 0.0, basis, iters
            _pivot(T, basis, row, col, m + 1, ncols + 1)
            iters += 1
            if iters >= max_iter:
                return ITERATION_LIMIT, np.zeros(n), 0.0, basis, iters
            if not bland:
                if T[m, rhs] > last_obj - 1e-12:
                    stall += 1
                    if stall > _STALL_LIMIT:
                        bland = True
                else:
                    stall = 0
                last_obj = T[m, rhs]

        if _phase == 0:
            if -T[m, rhs] > 1e-7:
                return INFEASIBLE, np.zeros(n), -T[m, rhs], basis, iters
            # drive leftover artificials out of the basis (degenerate rows)
            for i in range(m):
                if basis[i] >= nstruct:
                    done = False
                    for j in range(nstruct):
                        if abs(T[i, j]) > _PIV_TOL:
                            _pivot(T, basis, i, j, m + 1, ncols + 1)
                            iters += 1
                            done = True
                            break
                    if not done:
                        # redundant row: blank it so it can never pivot again
                        for j in range(ncols + 1):
                            T[i, j] = 0.0
            # rebuild the objective row with the real costs
            for j in range(ncols + 1):
                T[m, j] = 0.0
            for j in range(n):
                T[m, j] = c[j]
            for i in range(m):
                bi = basis[i]
                cb = c[bi] if bi < n else 0.0
                if cb != 0.0:
                    for j in range(ncols + 1):
                        T[m, j] -= cb * T[i, j]
            last_obj = T[m, rhs]
            stall = 0

    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, rhs]
    return OPTIMAL, x, -T[m, rhs], basis, iters
