"""
Offline optimum per arm: linear program vs grid search
======================================================

With the true belief distributions and costs in hand, the best profit the
principal can earn while steering the agent to arm k is a linear program over
Savage-form rules.  A brute-force grid over value vectors agrees with it.
"""

import numpy as np

from scoreid import agent, evaluation, harness, lp

# A reproducible random instance: two states, two arms, three support points,
# and a comfortable gap between the best and second-best arm values.
inst = harness.generate_instance(harness.GenSpec(seed=9, min_gap=0.3))
gt = evaluation.ground_truth(inst)

print("costs:", np.round(inst.costs, 4))
print("expected principal utility per arm:", np.round(inst.u_arm, 4))
print()
print("arm  h(S*_k)   gap      best?")
for k in range(inst.n_arms):
    print(f"{k:>3}  {gt.h_star_per_arm[k]:.4f}   {gt.gaps[k]:.4f}   "
          f"{'*' if k == gt.best_arm else ''}")

# The LP also returns the optimizing rule; it induces its arm and achieves
# exactly h(S*_k) = u_k - expected payment.
h0, rule0 = lp.solve_lp_k(inst, gt.best_arm)
print(f"\nbest arm {gt.best_arm}: LP optimum {h0:.6f}, "
      f"induced response {agent.best_response(inst, rule0)}, "
      f"regret of its rule {evaluation.simple_regret(inst, rule0, gt):.2e}")

# Brute force over a grid of value vectors: for two states each value vector
# is feasible iff every support point admits a supporting slope, and the
# per-arm incentive rows use the true cost differences.  At step 0.01 the
# grid brackets the LP optimum to within 2e-2.
step = 0.01


def grid_h(inst, k, step):
    M, B_S = inst.support_size, inst.B_S
    p = inst.support.beliefs[:, 1]
    axes = [np.linspace(0.0, B_S, int(round(B_S / step)) + 1)] * M
    G = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    feasible = np.ones(len(G), dtype=bool)
    for i in range(M):
        lo = np.full(len(G), -np.inf)
        hi = np.full(len(G), np.inf)
        for j in range(M):
            if j == i:
                continue
            chord = (G[:, j] - G[:, i]) / (p[j] - p[i])
            if p[j] > p[i]:
                lo = np.maximum(lo, chord)
            else:
                hi = np.minimum(hi, chord)
        hi = np.minimum(hi, np.minimum(G[:, i], B_S - G[:, i]) / max(p[i], 1e-12))
        lo = np.maximum(lo, np.maximum(G[:, i] - B_S, -G[:, i]) / max(1 - p[i], 1e-12))
        feasible &= lo <= hi + 1e-12
    for kp in range(inst.n_arms):
        if kp == k:
            continue
        feasible &= (G @ (inst.Q[k] - inst.Q[kp])
                     >= inst.costs[k] - inst.costs[kp] - 1e-12)
    if not feasible.any():
        return -np.inf
    return inst.u_arm[k] - float((G[feasible] @ inst.Q[k]).min())


for k in range(inst.n_arms):
    h_lp, _ = lp.solve_lp_k(inst, k)
    h_grid = grid_h(inst, k, step)
    print(f"arm {k}: LP {h_lp:.4f} vs grid({step}) {h_grid:.4f} "
          f"(diff {abs(h_lp - h_grid):.4f})")

# Problem complexity in both regimes, at a target accuracy of 1.0.
print(f"\ncomplexity at eps=1.0: gap-dependent {gt.h_delta(1.0):.1f}, "
      f"gap-free {gt.h_epsilon(1.0):.1f}")
