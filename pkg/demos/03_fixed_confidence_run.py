"""
Anatomy of a fixed-confidence run
=================================

One full run with a complete transcript: initialization, optimistic leader
selection, oracle-rule mixing, forced binary searches on mismatches, and the
stopping certificate.
"""

import numpy as np

from scoreid import algorithms, evaluation, harness

inst = harness.generate_instance(harness.GenSpec(seed=9, min_gap=0.3))
gt = evaluation.ground_truth(inst)
schedule = algorithms.ScheduleConfig(epsilon=1.0, delta=0.1, mode="dependent")

out = algorithms.run_fixed_confidence(inst, schedule, harness.trial_stream(0, 0))
tr = out.transcript

print(f"status={out.status} after tau={out.tau} announcements "
      f"(tau1={out.tau1} matched, tau2={out.tau2} forced, "
      f"{out.n_bs} binary searches)")
print(f"concentration event held throughout: {out.event_E}")

# Announcement kinds over time: each arm's oracle rule once, then leader
# rounds interleaved with binary-search refinements.
kinds = {algorithms.KIND_INIT: "init", algorithms.KIND_NORMAL: "leader",
         algorithms.KIND_BSEARCH: "search"}
head = [kinds[k] for k in tr.kind[:12]]
print("first announcements:", " ".join(head))

# The leader's identity stabilizes as the estimates tighten.
normal = tr.kind == algorithms.KIND_NORMAL
leaders = tr.k_star[normal]
switch_points = np.flatnonzero(np.diff(leaders) != 0)
print(f"leader switched {switch_points.size} times across {leaders.size} "
      f"leader rounds; final leader {leaders[-1]} (true best arm {gt.best_arm})")

# The mixing weight on the oracle rule decays as the leader accumulates
# matched rounds, shrinking the payment overhead of forced inducement.
alphas = tr.alpha[normal]
marks = np.linspace(0, alphas.size - 1, 6).astype(int)
print("mixing weight over leader rounds:",
      np.array_str(alphas[marks], precision=3))

# Confidence radii shrink like 1/sqrt(pulls); the run stops on a matched
# round once the scaled radius drops below the stopping threshold.
B_sum = inst.B_S + inst.utility.B_u
k_last = tr.k_star[-1]
print(f"stop certificate: 2*B_sum*radius = {2 * B_sum * tr.radius[-1, k_last]:.4f}"
      f" <= beta = {tr.beta_snap[-1]:.4f} on a matched round")

regret = evaluation.simple_regret(inst, out.rule, gt)
print(f"returned rule: simple regret {regret:.4f} (target 1.0)")

# A second run with the same stream is bit-identical; a different trial id
# explores differently but ends with the same verdict.
again = algorithms.run_fixed_confidence(inst, schedule, harness.trial_stream(0, 0))
other = algorithms.run_fixed_confidence(inst, schedule, harness.trial_stream(0, 7),
                                        full_transcript=False)
print(f"replay identical: {again.tau == out.tau and np.array_equal(again.rule.values, out.rule.values)}; "
      f"trial 7: status={other.status} tau={other.tau}")
