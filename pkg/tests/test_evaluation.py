import types

import numpy as np
import pytest

import reference
from scoreid import agent, algorithms, evaluation, harness, lp, scoring


# ---------------------------------------------------------------------------
# ground truth
# ---------------------------------------------------------------------------

def test_ground_truth_canonical(i2, i2_gt):
    np.testing.assert_allclose(i2_gt.h_star_per_arm, reference.I2_H_STAR, atol=1e-9)
    assert i2_gt.best_arm == reference.I2_BEST_ARM
    assert i2_gt.best_value == pytest.approx(0.5, abs=1e-9)
    np.testing.assert_allclose(i2_gt.gaps, [0.05, 0.0], atol=1e-9)
    assert i2_gt.B_sum == 2.0
    for rule in i2_gt.rules:
        scoring.check_proper(rule, i2.support, i2.B_S)


def test_complexities_frozen():
    gt = evaluation.GroundTruth(h_star_per_arm=np.array([1.0, 0.5]),
                                best_arm=0, best_value=1.0,
                                gaps=np.array([0.0, 0.5]),
                                rules=(None, None), B_sum=2.0)
    assert gt.h_delta(0.4) == pytest.approx(reference.H_DELTA_EXAMPLE, abs=1e-9)
    assert gt.h_epsilon(0.4) == pytest.approx(reference.H_EPS_EXAMPLE, abs=1e-9)


def test_complexity_zero_gap_is_infinite():
    gt = evaluation.GroundTruth(h_star_per_arm=np.array([1.0, 1.0]),
                                best_arm=0, best_value=1.0,
                                gaps=np.array([0.0, 0.0]),
                                rules=(None, None), B_sum=2.0)
    assert gt.h_delta(0.4) == np.inf


def test_complexity_warns_on_uninducible_arm():
    gt = evaluation.GroundTruth(h_star_per_arm=np.array([1.0, -np.inf]),
                                best_arm=0, best_value=1.0,
                                gaps=np.array([0.0, np.inf]),
                                rules=(None, None), B_sum=2.0)
    with pytest.warns(UserWarning):
        total = gt.h_delta(0.4)
    assert total == pytest.approx(16.0 * 0.4 ** -2.0, abs=1e-9)


# ---------------------------------------------------------------------------
# profit of a rule
# ---------------------------------------------------------------------------

def test_true_h_constant_rules(i2):
    # any constant payment sends the agent to the free arm
    assert evaluation.true_h(i2, scoring.constant_rule(i2.support, 0.2)) \
        == pytest.approx(0.3, abs=1e-12)
    assert evaluation.true_h(i2, scoring.constant_rule(i2.support, 0.0)) \
        == pytest.approx(0.5, abs=1e-12)


def test_true_h_consistent_with_best_response(i2):
    rng = np.random.default_rng(5)
    for _ in range(20):
        rule = scoring.random_rule(rng, i2.support, i2.B_S)
        k = agent.best_response(i2, rule)
        want = i2.u_arm[k] - scoring.expected_payment(rule, i2.Q[k])
        assert evaluation.true_h(i2, rule) == pytest.approx(want, abs=1e-12)


def test_optimizer_rule_has_zero_regret(i2, i2_gt):
    assert evaluation.simple_regret(i2, i2_gt.rules[i2_gt.best_arm], i2_gt) \
        == pytest.approx(0.0, abs=1e-9)


def test_no_rule_beats_the_offline_optimum(i2, i2_gt, rng):
    # h(S) <= h(S*_{BR(S)}) <= best_value for any proper rule
    for _ in range(200):
        raw_v = rng.uniform(-1.0, 2.0, size=3)
        raw_g = rng.uniform(-3.0, 3.0, size=(3, 2))
        rule = lp.project_rule(raw_v, raw_g, i2.support, i2.B_S)
        k = agent.best_response(i2, rule)
        h = evaluation.true_h(i2, rule)
        assert h <= i2_gt.h_star_per_arm[k] + 1e-6
        assert h <= i2_gt.best_value + 1e-6


# ---------------------------------------------------------------------------
# concentration event
# ---------------------------------------------------------------------------

def test_event_e_on_forged_transcripts(i2):
    q_hat = np.stack([i2.Q, np.zeros((2, 3))])          # exact, then nonsense
    wide = types.SimpleNamespace(q_hat=q_hat, radius=np.full((2, 2), 2.0))
    ok, per_round = evaluation.event_E_held(i2, wide)
    assert ok and per_round.shape == (2, 2)             # L1 error can't exceed 2
    tight = types.SimpleNamespace(q_hat=q_hat, radius=np.full((2, 2), 1e-6))
    ok, per_round = evaluation.event_E_held(i2, tight)
    assert not ok and per_round[0].all() and not per_round[1].any()
    # +inf radius rows (pre-visit) pass vacuously
    lazy = types.SimpleNamespace(q_hat=q_hat, radius=np.full((2, 2), np.inf))
    assert evaluation.event_E_held(i2, lazy)[0]


def test_event_e_matches_run_flag(i2):
    sched = algorithms.ScheduleConfig(epsilon=1.0, delta=0.2)
    out = algorithms.run_fixed_confidence(i2, sched, harness.trial_stream(1, 1),
                                          round_cap=400, full_transcript=True)
    ok, _ = evaluation.event_E_held(i2, out.transcript)
    assert ok == out.event_E
