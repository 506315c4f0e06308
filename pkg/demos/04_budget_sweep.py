"""
Fixed-budget identification: error rate vs budget
=================================================

The budgeted variant spends exactly T announcements and returns the rule
from the candidate round with the tightest confidence snapshot.  More budget
means smaller snapshots and fewer mistakes.
"""

import numpy as np

from scoreid import harness

inst = harness.generate_instance(harness.GenSpec(seed=9, min_gap=0.3))

print("T      a        errors  mean_regret  mean_tau1")
for T in (120, 300, 800, 2000):
    config = harness.ExperimentConfig(
        algo="fb", epsilon=1.0, delta=0.1, instance=inst, T=T,
        trials=40, seed=0)
    records, summary = harness.run_experiment(config)
    a = harness.default_a(T, inst.n_arms, inst.support_size, 0.1)
    errors = sum(1 - r.success for r in records)
    regrets = np.array([r.regret for r in records])
    finite = regrets[np.isfinite(regrets)]
    mean_regret = finite.mean() if finite.size else float("nan")
    mean_tau1 = np.mean([r.tau1 for r in records])
    print(f"{T:<6} {a:<8.2f} {errors:>2}/40    {mean_regret:<11.4f} {mean_tau1:.1f}")

# Wilson intervals quantify how sure we are about each error rate.
config = harness.ExperimentConfig(algo="fb", epsilon=1.0, delta=0.1,
                                  instance=inst, T=800, trials=40, seed=0)
records, summary = harness.run_experiment(config)
lo, hi = summary["wilson_low"], summary["wilson_high"]
print(f"\nT=800: success rate {summary['success_rate']:.3f}, "
      f"95% Wilson interval [{lo:.3f}, {hi:.3f}]")

# The exploration constant a steers the radius schedule; the default grows
# logarithmically in T, arms, and support size.
print("default_a(T=1000, K=2, M=3, delta=0.1) =",
      round(harness.default_a(1000, 2, 3, 0.1), 4))
