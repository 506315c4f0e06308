import math

import numpy as np
import pytest

from scoreid import algorithms, estimation, evaluation, harness, scoring


def _fc(epsilon=1.0, delta=0.1, mode="dependent"):
    return algorithms.ScheduleConfig(epsilon=epsilon, delta=delta, mode=mode)


def _seeded_state(i2, rng, mode="fc", **kw):
    """Estimator state after one oracle announcement per arm."""
    kw.setdefault("delta", 0.5) if mode == "fc" else kw.setdefault("a", 1.0)
    st = estimation.EstimatorState(i2.n_arms, i2.support_size, mode=mode, **kw)
    for k in range(i2.n_arms):
        out = algorithms.play_round(i2, i2.oracle_rules[k], rng)
        estimation.update(st, i2.oracle_rules[k], out)
    return st


# ---------------------------------------------------------------------------
# schedules
# ---------------------------------------------------------------------------

def test_schedule_validation():
    with pytest.raises(ValueError):
        algorithms.ScheduleConfig(epsilon=0.0)
    with pytest.raises(ValueError):
        algorithms.ScheduleConfig(epsilon=0.5, delta=1.5)
    with pytest.raises(ValueError):
        algorithms.ScheduleConfig(epsilon=0.5, mode="other")
    with pytest.raises(ValueError):
        algorithms.ScheduleConfig(epsilon=0.5, T=0)
    with pytest.raises(ValueError):
        algorithms.ScheduleConfig(epsilon=0.5, a=0.0)


def test_alpha_frozen_values():
    dep = _fc(epsilon=0.4)
    assert algorithms.alpha(dep, 16, 4, 2.0) == 0.5
    assert algorithms.alpha(dep, 0, 4, 2.0) == 1.0
    assert algorithms.alpha(dep, 2, 4, 2.0) == 1.0          # clipped at 1
    ind = _fc(epsilon=0.4, mode="independent")
    assert algorithms.alpha(ind, 16, 4, 2.0) == pytest.approx(0.05, abs=1e-15)
    assert algorithms.alpha(ind, 0, 4, 2.0) == pytest.approx(0.05, abs=1e-15)


def test_beta_frozen_values():
    sched = _fc(epsilon=0.4)
    assert algorithms.beta(sched, 0.05, 2.0) == pytest.approx(0.2 / 0.95, abs=1e-12)
    assert algorithms.beta(sched, 1.0, 2.0) == 0.0
    # alpha exactly at epsilon / (2 B_sum) zeroes the threshold
    assert abs(algorithms.beta(sched, 0.4 / 4.0, 2.0)) <= 1e-15


# ---------------------------------------------------------------------------
# binary search
# ---------------------------------------------------------------------------

def test_binary_search_fixed_width_traces(i2):
    for width, want in ((2.0, 0), (1.0, 1), (0.3, 2)):
        rng = harness.trial_stream(0, 3)
        st = _seeded_state(i2, rng)
        used = algorithms.binary_search(i2, st, i2.oracle_rules[0],
                                        i2.oracle_rules[1], 0, 1, rng,
                                        min_width=width)
        assert used == want
        assert st.t == i2.n_arms + used


def test_binary_search_depth_bound(i2):
    for width in (0.5, 0.1, 0.01):
        rng = harness.trial_stream(0, 4)
        st = _seeded_state(i2, rng)
        used = algorithms.binary_search(i2, st, i2.oracle_rules[0],
                                        i2.oracle_rules[1], 0, 1, rng,
                                        min_width=width)
        assert used <= math.ceil(math.log2(1.0 / width)) + 1
        assert 2.0 ** -used < width          # terminal interval is narrow enough


def test_binary_search_respects_budget(i2):
    rng = harness.trial_stream(0, 5)
    st = _seeded_state(i2, rng)
    used = algorithms.binary_search(i2, st, i2.oracle_rules[0],
                                    i2.oracle_rules[1], 0, 1, rng,
                                    budget=1, min_width=1e-3)
    assert used == 1


def test_binary_search_entry_radius_default(i2):
    # with one observation per arm the entry radii exceed 1: no announcements
    rng = harness.trial_stream(0, 6)
    st = _seeded_state(i2, rng)
    assert min(estimation.radius_q(st, 0, t_round=2),
               estimation.radius_q(st, 1, t_round=2)) > 1.0
    used = algorithms.binary_search(i2, st, i2.oracle_rules[0],
                                    i2.oracle_rules[1], 0, 1, rng)
    assert used == 0


def test_binary_search_logs_rounds(i2):
    rng = harness.trial_stream(0, 7)
    st = _seeded_state(i2, rng)
    tr = algorithms.Transcript(i2.n_arms, i2.support_size, full=True)
    used = algorithms.binary_search(i2, st, i2.oracle_rules[0],
                                    i2.oracle_rules[1], 0, 1, rng,
                                    transcript=tr, min_width=0.3)
    tr.finalize()
    assert used == 2
    assert np.all(tr.kind == algorithms.KIND_BSEARCH)
    assert np.all(tr.k_star == 1)
    # each announcement was the midpoint mix of the shrinking interval
    assert tr.alpha[0] == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# fixed-confidence runs
# ---------------------------------------------------------------------------

def test_fc_validation(i2):
    with pytest.raises(ValueError):
        algorithms.run_fixed_confidence(
            i2, algorithms.ScheduleConfig(epsilon=1.0), harness.trial_stream(0, 0))
    with pytest.raises(ValueError):
        algorithms.run_fixed_confidence(i2, _fc(epsilon=5.0),
                                        harness.trial_stream(0, 0))


def test_fc_run_accounting(ref_inst):
    out = algorithms.run_fixed_confidence(ref_inst, _fc(),
                                          harness.trial_stream(11, 0))
    tr = out.transcript
    K = ref_inst.n_arms
    assert out.status == "success"
    assert out.tau == tr.kind.size == out.tau1 + out.tau2 + K
    assert int(np.sum(tr.kind == algorithms.KIND_INIT)) == K
    normal = tr.kind == algorithms.KIND_NORMAL
    matched = normal & (tr.k_t == tr.k_star)
    assert int(matched.sum()) == out.tau1
    assert int((normal & ~matched).sum()) + \
        int(np.sum(tr.kind == algorithms.KIND_BSEARCH)) == out.tau2
    assert out.n_bs == int((normal & ~matched).sum())
    assert tr.round[-1] == out.tau


def test_fc_stop_certificate(ref_inst):
    out = algorithms.run_fixed_confidence(ref_inst, _fc(),
                                          harness.trial_stream(11, 1))
    tr = out.transcript
    assert out.status == "success"
    # the final announcement is a matched normal round passing the stop test
    assert tr.kind[-1] == algorithms.KIND_NORMAL
    k = tr.k_star[-1]
    assert tr.k_t[-1] == k
    B_sum = ref_inst.B_S + ref_inst.utility.B_u
    assert 2.0 * B_sum * tr.radius[-1, k] <= tr.beta_snap[-1]
    # ...and no earlier matched round passed it
    earlier = (tr.kind == algorithms.KIND_NORMAL) & (tr.k_t == tr.k_star)
    earlier[-1] = False
    snaps = 2.0 * B_sum * tr.radius[earlier, tr.k_star[earlier]]
    assert np.all(snaps > tr.beta_snap[earlier])


def test_fc_stopped_run_meets_epsilon_under_event(ref_inst):
    eps = 1.0
    gt = evaluation.ground_truth(ref_inst)
    stopped = 0
    for trial in range(5):
        out = algorithms.run_fixed_confidence(ref_inst, _fc(epsilon=eps),
                                              harness.trial_stream(21, trial),
                                              full_transcript=False)
        if out.status == "success" and out.event_E:
            stopped += 1
            regret = evaluation.simple_regret(ref_inst, out.rule, gt)
            assert regret <= eps + 1e-9
    assert stopped > 0


def test_fc_round_cap(i2):
    K = i2.n_arms
    out = algorithms.run_fixed_confidence(i2, _fc(), harness.trial_stream(0, 8),
                                          round_cap=K)
    assert out.status == "round-cap-exceeded"
    assert out.rule is None and out.tau == K
    out = algorithms.run_fixed_confidence(i2, _fc(), harness.trial_stream(0, 8),
                                          round_cap=K + 2)
    assert out.status == "round-cap-exceeded"
    assert out.rule is not None and out.tau == K + 2


def test_fc_deterministic(ref_inst):
    a = algorithms.run_fixed_confidence(ref_inst, _fc(),
                                        harness.trial_stream(3, 9))
    b = algorithms.run_fixed_confidence(ref_inst, _fc(),
                                        harness.trial_stream(3, 9))
    assert (a.status, a.tau, a.tau1, a.tau2, a.n_bs) == \
        (b.status, b.tau, b.tau1, b.tau2, b.n_bs)
    np.testing.assert_array_equal(a.transcript.values, b.transcript.values)
    np.testing.assert_array_equal(a.transcript.k_t, b.transcript.k_t)
    np.testing.assert_array_equal(a.rule.values, b.rule.values)


def test_fc_every_announced_rule_is_proper(i2, monkeypatch):
    real = algorithms.play_round

    def checked(inst, rule, rng, tie_break="lowest"):
        scoring.check_proper(rule, inst.support, inst.B_S)
        return real(inst, rule, rng, tie_break=tie_break)

    monkeypatch.setattr(algorithms, "play_round", checked)
    out = algorithms.run_fixed_confidence(i2, _fc(), harness.trial_stream(5, 2),
                                          round_cap=300, full_transcript=False)
    assert out.tau >= i2.n_arms


def test_fc_m_param_override(i2):
    cap = i2.n_arms + 1
    runs = {}
    for m_param in (3, 10):
        out = algorithms.run_fixed_confidence(i2, _fc(), harness.trial_stream(0, 10),
                                              round_cap=cap, m_param=m_param)
        runs[m_param] = out.transcript.radius[i2.n_arms]
    want = math.sqrt(2.0 * (math.log(4 * 2 / 0.1) + 10 * math.log(2.0)
                            + 2.0 * math.log(3.0)))
    assert runs[10][0] == pytest.approx(want, abs=1e-12)
    assert np.all(runs[10] > runs[3])


def test_fc_independent_schedule_runs(ref_inst):
    out = algorithms.run_fixed_confidence(ref_inst, _fc(mode="independent"),
                                          harness.trial_stream(4, 0),
                                          full_transcript=False)
    assert out.status == "success"
    # the mixing weight never moves in the independent schedule
    out2 = algorithms.run_fixed_confidence(ref_inst, _fc(mode="independent"),
                                           harness.trial_stream(4, 1),
                                           round_cap=40)
    normal = out2.transcript.kind == algorithms.KIND_NORMAL
    alphas = out2.transcript.alpha[normal]
    assert np.all(alphas == alphas[0])


# ---------------------------------------------------------------------------
# fixed-budget runs
# ---------------------------------------------------------------------------

def _fb(epsilon=1.0, T=60, a=4.0, mode="dependent"):
    return algorithms.ScheduleConfig(epsilon=epsilon, delta=None, mode=mode,
                                     T=T, a=a)


def test_fb_validation(i2):
    with pytest.raises(ValueError):
        algorithms.run_fixed_budget(i2, algorithms.ScheduleConfig(epsilon=1.0, a=1.0),
                                    harness.trial_stream(0, 0))
    with pytest.raises(ValueError):
        algorithms.run_fixed_budget(i2, algorithms.ScheduleConfig(epsilon=1.0, T=10),
                                    harness.trial_stream(0, 0))


def test_fb_no_output_when_budget_covers_init_only(i2):
    for T in (1, 2):
        out = algorithms.run_fixed_budget(i2, _fb(T=T), harness.trial_stream(0, 1))
        assert out.status == "no-output"
        assert out.rule is None and out.best_round == -1
        assert out.tau == T


def test_fb_spends_exactly_the_budget(i2):
    for T in (10, 60):
        out = algorithms.run_fixed_budget(i2, _fb(T=T), harness.trial_stream(0, 2))
        assert out.tau == T == out.transcript.kind.size


def test_fb_returns_smallest_snapshot_round(ref_inst):
    out = algorithms.run_fixed_budget(ref_inst, _fb(T=60),
                                      harness.trial_stream(0, 3))
    tr = out.transcript
    assert out.status == "success"
    matched = (tr.kind == algorithms.KIND_NORMAL) & (tr.k_t == tr.k_star)
    assert matched.any()
    snaps = tr.beta_snap[matched]
    i = int(np.argmin(snaps))                  # argmin takes the earliest tie
    assert out.best_round == tr.round[matched][i]
    row = int(np.flatnonzero(tr.round == out.best_round)[0])
    np.testing.assert_array_equal(out.rule.values, tr.values[row])


def test_fb_constant_alpha(i2):
    out = algorithms.run_fixed_budget(i2, _fb(epsilon=0.8, T=40),
                                      harness.trial_stream(0, 4))
    normal = out.transcript.kind == algorithms.KIND_NORMAL
    np.testing.assert_allclose(out.transcript.alpha[normal], 0.8 / 8.0, atol=1e-15)


def test_fb_radius_uses_budget_mode(i2):
    out = algorithms.run_fixed_budget(i2, _fb(T=10, a=4.0),
                                      harness.trial_stream(0, 5))
    tr = out.transcript
    first_normal = int(np.flatnonzero(tr.kind == algorithms.KIND_NORMAL)[0])
    np.testing.assert_allclose(tr.radius[first_normal], [2.0, 2.0], atol=1e-12)


def test_fb_bs_on_match_variant(ref_inst):
    out = algorithms.run_fixed_budget(ref_inst, _fb(T=40),
                                      harness.trial_stream(0, 5),
                                      bs_on_match=True)
    tr = out.transcript
    matched = int(((tr.kind == algorithms.KIND_NORMAL) &
                   (tr.k_t == tr.k_star)).sum())
    assert matched > 0
    assert out.n_bs == matched
    assert out.tau == 40


def test_fb_deterministic(i2):
    a = algorithms.run_fixed_budget(i2, _fb(T=50), harness.trial_stream(9, 0))
    b = algorithms.run_fixed_budget(i2, _fb(T=50), harness.trial_stream(9, 0))
    assert a.best_round == b.best_round and a.status == b.status
    np.testing.assert_array_equal(a.transcript.values, b.transcript.values)


def test_fb_every_announced_rule_is_proper(i2, monkeypatch):
    real = algorithms.play_round

    def checked(inst, rule, rng, tie_break="lowest"):
        scoring.check_proper(rule, inst.support, inst.B_S)
        return real(inst, rule, rng, tie_break=tie_break)

    monkeypatch.setattr(algorithms, "play_round", checked)
    out = algorithms.run_fixed_budget(i2, _fb(T=50), harness.trial_stream(5, 3),
                                      full_transcript=False)
    assert out.tau == 50


# ---------------------------------------------------------------------------
# transcripts
# ---------------------------------------------------------------------------

def test_transcript_scalar_only_mode(i2):
    out = algorithms.run_fixed_confidence(i2, _fc(), harness.trial_stream(2, 2),
                                          round_cap=10, full_transcript=False)
    tr = out.transcript
    assert tr.kind.size == out.tau
    assert not hasattr(tr, "values")
