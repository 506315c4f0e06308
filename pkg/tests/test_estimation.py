import math
from collections import namedtuple

import numpy as np
import pytest

import reference
from scoreid import estimation

Out = namedtuple("Out", "arm report")


def _state(n_arms=2, support_size=3, mode="fc", **kw):
    kw.setdefault("delta", 0.1) if mode == "fc" else kw.setdefault("a", 1.0)
    return estimation.EstimatorState(n_arms=n_arms, support_size=support_size,
                                     mode=mode, **kw)


def _random_state(rng, K, M, L):
    st = _state(n_arms=K, support_size=M)
    for _ in range(L):
        vals = rng.uniform(0.0, 1.0, size=M)
        estimation.update(st, vals, Out(int(rng.integers(0, K)),
                                        int(rng.integers(0, M))))
    return st


# ---------------------------------------------------------------------------
# state bookkeeping
# ---------------------------------------------------------------------------

def test_state_validation():
    with pytest.raises(ValueError):
        estimation.EstimatorState(2, 3, mode="zz", delta=0.1)
    with pytest.raises(ValueError):
        estimation.EstimatorState(2, 3, mode="fc")            # missing delta
    with pytest.raises(ValueError):
        estimation.EstimatorState(2, 3, mode="fb")            # missing a
    st = estimation.EstimatorState(2, 3, mode="fc", delta=0.1)
    assert st.M_param == 3                                    # defaults to M


def test_update_tracks_history_and_grows(rng):
    st = _random_state(rng, K=2, M=3, L=300)
    assert st.t == 300 and st.hist_len == 300
    assert st._hv.shape[0] >= 300                             # grew past the 256 seed
    assert st.counts.sum() == 300
    hv, hr = st.history_views()
    assert hv.shape == (300, 3) and hr.shape == (300,)


def test_q_hat_and_unvisited(rng):
    st = _state()
    with pytest.raises(estimation.UnvisitedArm):
        st.q_hat(0)
    estimation.update(st, np.zeros(3), Out(0, 1))
    np.testing.assert_array_equal(st.q_hat(0), [0.0, 1.0, 0.0])
    # matrix form zeroes unvisited rows instead of raising
    qm = st.q_hat_matrix()
    np.testing.assert_array_equal(qm[1], np.zeros(3))


# ---------------------------------------------------------------------------
# confidence radii
# ---------------------------------------------------------------------------

def test_radius_fixed_budget_frozen():
    st = _state(mode="fb", a=8.0)
    st.counts = np.array([2, 5], dtype=np.int64)
    assert estimation.radius_q(st, 0) == reference.RADIUS_FB_A8_N2


def test_radius_fixed_confidence_frozen():
    st = estimation.EstimatorState(2, 1, mode="fc", delta=0.5, M_param=1)
    st.counts = np.array([1, 1], dtype=np.int64)
    assert estimation.radius_q(st, 0, t_round=1) == pytest.approx(
        reference.RADIUS_FC_SMALL, abs=1e-12)


def test_radius_default_round_is_next_announcement():
    st = _state()
    st.counts = np.array([3, 1], dtype=np.int64)
    st.t = 7
    assert estimation.radius_q(st, 0) == estimation.radius_q(st, 0, t_round=8)


def test_radius_scales_inverse_sqrt_counts():
    st = _state()
    st.counts = np.array([1, 4], dtype=np.int64)
    assert estimation.radius_q(st, 0, t_round=5) == pytest.approx(
        2.0 * estimation.radius_q(st, 1, t_round=5), abs=1e-12)
    fb = _state(mode="fb", a=8.0)
    fb.counts = np.array([2, 8], dtype=np.int64)
    assert estimation.radius_q(fb, 0) == pytest.approx(
        2.0 * estimation.radius_q(fb, 1), abs=1e-12)


def test_radius_vector_marks_unvisited():
    st = _state(n_arms=3)
    st.counts = np.array([2, 0, 1], dtype=np.int64)
    r = estimation.radius_vector(st, t_round=4)
    assert np.isinf(r[1]) and np.isfinite(r[0]) and np.isfinite(r[2])
    with pytest.raises(estimation.UnvisitedArm):
        estimation.radius_q(st, 1)


# ---------------------------------------------------------------------------
# payment / utility estimates
# ---------------------------------------------------------------------------

def test_v_hat_and_u_hat_canonical(i2):
    st = _state()
    st.counts = np.array([2, 1], dtype=np.int64)
    st.hist = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    vals = np.array([0.4, 0.2, 0.9])
    assert estimation.v_hat(st, vals, 0) == pytest.approx(0.3, abs=1e-12)
    assert estimation.u_hat(st, i2, 0) == pytest.approx(0.9, abs=1e-12)
    assert estimation.u_hat(st, i2, 1) == pytest.approx(0.5, abs=1e-12)


# ---------------------------------------------------------------------------
# pairwise cost bounds
# ---------------------------------------------------------------------------

def test_cost_bounds_hand_example():
    st = _state()
    estimation.update(st, np.array([0.4, 0.2, 0.0]), Out(0, 0))
    estimation.update(st, np.array([1.0, 1.0, 1.0]), Out(1, 2))
    pad = 1.0 * (estimation.radius_q(st, 0, t_round=1)
                 + estimation.radius_q(st, 1, t_round=1))
    c_plus, c_minus = estimation.cost_bounds(st, 0, 1, 1.0, t_round=1)
    # q_hat_0 = e_0, q_hat_1 = e_2: round 1 separates them by 0.4, the
    # constant rule by exactly 0
    assert c_plus == pytest.approx(0.4 + pad, abs=1e-12)
    assert c_minus == pytest.approx(0.0 - pad, abs=1e-12)
    # a tighter announcement shrinks the upper bound
    estimation.update(st, np.array([0.1, 0.3, 0.0]), Out(0, 0))
    c_plus2, _ = estimation.cost_bounds(st, 0, 1, 1.0, t_round=1)
    pad2 = 1.0 * (estimation.radius_q(st, 0, t_round=1)
                  + estimation.radius_q(st, 1, t_round=1))
    assert c_plus2 == pytest.approx(0.1 + pad2, abs=1e-12)


def test_cost_bounds_needs_both_arms():
    st = _state()
    estimation.update(st, np.zeros(3), Out(0, 0))
    assert estimation.cost_bounds(st, 0, 1, 1.0) == (None, None)
    with pytest.raises(ValueError):
        estimation.cost_bounds(st, 0, 0, 1.0)


# ---------------------------------------------------------------------------
# cost graph
# ---------------------------------------------------------------------------

def test_graph_kernel_worked_example():
    # three arms, direct halfwidths 0.1/0.1/0.5 and midpoints 0.3/0.2/0.9:
    # the two-hop route wins, giving c_hat(0,2) = 0.5 with halfwidth 0.2
    rawmin = np.array([[np.inf, 0.4, 1.4],
                       [-0.2, np.inf, 0.3],
                       [-0.4, -0.1, np.inf]])
    pad = np.zeros((3, 3))
    theta, phi, has, c_hat, i_c = estimation._graph_kernel(rawmin, pad)
    assert has.sum() == 6
    assert theta[0, 1] == pytest.approx(0.3) and phi[0, 1] == pytest.approx(0.1)
    assert theta[1, 2] == pytest.approx(0.2) and phi[1, 2] == pytest.approx(0.1)
    assert theta[0, 2] == pytest.approx(0.9) and phi[0, 2] == pytest.approx(0.5)
    assert c_hat[0, 2] == pytest.approx(0.5, abs=1e-12)
    assert i_c[0, 2] == pytest.approx(0.2, abs=1e-12)
    assert c_hat[2, 0] == -c_hat[0, 2]
    assert i_c[0, 1] == pytest.approx(0.1, abs=1e-12)
    np.testing.assert_allclose(theta, -theta.T, atol=1e-15)


def test_cost_estimate_matches_brute_force(rng):
    for _ in range(10):
        K = int(rng.integers(2, 5))
        st = _random_state(rng, K=K, M=3, L=int(rng.integers(2, 10)))
        radii = rng.uniform(0.05, 0.4, size=K)
        g = estimation.cost_estimate(st, 1.0, radii=radii)
        hv, hr = st.history_views()
        _, _, ch, ic = reference.brute_force_cost_graph(
            hv, hr, st.q_hat_matrix(), 1.0, radii)
        np.testing.assert_array_equal(g.c_hat, ch)
        np.testing.assert_array_equal(g.i_c, ic)


def test_cost_estimate_properties(rng):
    for _ in range(10):
        K = int(rng.integers(2, 6))
        st = _random_state(rng, K=K, M=4, L=int(rng.integers(K, 16)))
        g = estimation.cost_estimate(st, 1.0)
        np.testing.assert_allclose(g.c_hat, -g.c_hat.T, atol=1e-9)
        np.testing.assert_array_equal(g.i_c, g.i_c.T)
        assert np.all(np.diag(g.i_c) == 0.0)
        # the chosen path is never worse than the direct edge
        direct = g.has_edge
        assert np.all(g.i_c[direct] <= g.phi[direct] + 1e-12)


def test_cost_estimate_isolates_unvisited_arms():
    st = _state(n_arms=3)
    estimation.update(st, np.array([0.5, 0.1, 0.0]), Out(0, 0))
    estimation.update(st, np.array([0.2, 0.2, 0.2]), Out(1, 1))
    g = estimation.cost_estimate(st, 1.0)
    assert not g.has_edge[0, 2] and not g.has_edge[2, 1]
    assert np.isinf(g.i_c[0, 2]) and g.c_hat[0, 2] == 0.0
    assert np.isfinite(g.i_c[0, 1])


def test_true_cost_difference_inside_bounds(i2, rng):
    # play the oracle rules repeatedly; the interval [theta - phi, theta + phi]
    # must cover the true cost difference whenever q_hat is within its radius
    from scoreid import agent
    st = _state()
    for _ in range(60):
        for rule in i2.oracle_rules:
            out = agent.play_round(i2, rule, rng)
            estimation.update(st, rule, out)
    g = estimation.cost_estimate(st, i2.B_S)
    err = np.abs(st.q_hat_matrix() - i2.Q).sum(axis=1)
    if np.all(err <= estimation.radius_vector(st)):
        true_diff = i2.costs[0] - i2.costs[1]
        assert abs(g.c_hat[0, 1] - true_diff) <= g.i_c[0, 1] + 1e-12


# ---------------------------------------------------------------------------
# inducement diagnostic
# ---------------------------------------------------------------------------

def test_gamma_frozen_example(i2):
    st = _state(mode="fb", a=0.02)
    st.counts = np.array([2, 2], dtype=np.int64)
    st.hist = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 2.0]])
    graph = estimation.CostGraph(theta=np.zeros((2, 2)), phi=np.zeros((2, 2)),
                                 has_edge=np.ones((2, 2), dtype=bool),
                                 c_hat=np.zeros((2, 2)), i_c=np.zeros((2, 2)))
    # radii are sqrt(0.02/2) = 0.1 each, so gamma = 2/0.5 * (0 + 0.2) = 0.8
    val = estimation.gamma(st, i2, 0, 1, oracle_margin=0.5, graph=graph)
    assert val == pytest.approx(reference.GAMMA_EXAMPLE, abs=1e-12)


def test_gamma_requires_visits(i2):
    st = _state()
    st.counts = np.array([1, 0], dtype=np.int64)
    st.hist = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    with pytest.raises(estimation.UnvisitedArm):
        estimation.gamma(st, i2, 0, 1)
