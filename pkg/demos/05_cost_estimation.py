"""
Estimating private costs from responses alone
=============================================

The agent never reveals its costs; every announcement only shows which arm it
preferred under that payment schedule.  Each observed choice bounds a cost
difference, the bounds compose along paths between arms, and binary search
along a rule mixture sharpens them near the switching threshold.
"""

import numpy as np

from scoreid import algorithms, estimation, harness

inst = harness.generate_instance(harness.GenSpec(seed=9, min_gap=0.3))
true_diff = inst.costs[0] - inst.costs[1]
print(f"true cost difference c_0 - c_1 = {true_diff:.4f} (hidden from the principal)")

state = estimation.EstimatorState(inst.n_arms, inst.support_size,
                                  mode="fc", delta=0.1)
rng = harness.trial_stream(42, 0)

# Play each oracle rule a few times: the responses pin down the empirical
# belief distributions and seed the cost graph.
for _ in range(30):
    for rule in inst.oracle_rules:
        out = algorithms.play_round(inst, rule, rng)
        estimation.update(state, rule, out)

radii = estimation.radius_vector(state)
print(f"\nafter {state.t} rounds: pulls {state.counts.tolist()}, "
      f"radii {np.round(radii, 3).tolist()}")
print("empirical vs true distributions (L1):",
      np.round(np.abs(state.q_hat_matrix() - inst.Q).sum(axis=1), 4).tolist())

graph = estimation.cost_estimate(state, inst.B_S, radii=radii)
print(f"cost difference estimate {graph.c_hat[0, 1]:+.4f} "
      f"+/- {graph.i_c[0, 1]:.4f}")

# Binary search between the two oracle rules: each probe is announced, the
# response halves the mixing interval around the agent's switching point, and
# every probe lands in the shared history the cost graph is built from.
used = algorithms.binary_search(inst, state, inst.oracle_rules[1],
                                inst.oracle_rules[0], 1, 0, rng,
                                min_width=0.02)
radii = estimation.radius_vector(state)
graph = estimation.cost_estimate(state, inst.B_S, radii=radii)
print(f"\nafter a {used}-announcement binary search: "
      f"estimate {graph.c_hat[0, 1]:+.4f} +/- {graph.i_c[0, 1]:.4f}")
assert abs(graph.c_hat[0, 1] - true_diff) <= graph.i_c[0, 1]

# The midpoint is now sharp; the certified half-width stays conservative
# because it carries the belief radii, which only shrink with more pulls.
print(f"midpoint error {abs(graph.c_hat[0, 1] - true_diff):.4f} vs "
      f"certified half-width {graph.i_c[0, 1]:.4f} (radius-dominated)")

# The interval midpoints are antisymmetric and self-consistent along paths:
# going 0 -> 1 costs exactly the negative of going 1 -> 0.
print("antisymmetry check: c_hat + c_hat.T =\n",
      np.round(graph.c_hat + graph.c_hat.T, 12))

# The inducement diagnostic gamma scales the remaining uncertainty by how
# strongly the oracle rules separate the arms; below 1 means the oracle
# margins already dominate the statistical error.
val = estimation.gamma(state, inst, 0, 1, graph=graph)
print(f"inducement diagnostic gamma(0, 1) = {val:.3f}")
