"""
Instances, proper scoring rules, and the agent's best response
==============================================================

Builds the canonical two-state instance by hand, inspects its oracle rules,
and shows how mixing trades the principal's payment against inducement.
"""

import numpy as np

from scoreid import agent, domain, scoring

# The world has two states and a matching utility: the principal earns 1 for
# guessing the realized state, 0 otherwise.
utility = domain.UtilityModel(u=np.eye(2), B_u=1.0)

# Beliefs the agent can end up with: two informative posteriors and the prior.
support = domain.make_support([[0.9, 0.1], [0.1, 0.9], [0.5, 0.5]], utility)
print("support beliefs:\n", support.beliefs)
print("principal value of acting on each belief:", support.u_at)

# Arm 0 is informative (uniform over the two posteriors) but costs 0.2;
# arm 1 is free and leaves the agent at the prior.
arms = [domain.Arm(q=np.array([0.5, 0.5, 0.0]), cost=0.2),
        domain.Arm(q=np.array([0.0, 0.0, 1.0]), cost=0.0)]
rules, margins = scoring.build_oracle_rules(utility, support, arms, 1.0)
inst = domain.make_instance(utility, support, arms, 1.0, rules,
                            float(np.min(margins)) - 1e-9)
domain.validate_instance(inst)
print("oracle margins per arm:", np.round(margins, 4))

# Each oracle rule makes its arm the strict best response.
rng = np.random.default_rng(0)
for k, rule in enumerate(inst.oracle_rules):
    response = agent.best_response(inst, rule)
    profit = [scoring.agent_profit(inst, j, rule) for j in range(inst.n_arms)]
    print(f"oracle rule {k}: agent picks arm {response}, profits {np.round(profit, 4)}")

# A proper rule is a convex function over beliefs, stored as values plus
# supporting slopes at each support point; check_proper verifies convexity
# and the payment bounds.
scoring.check_proper(inst.oracle_rules[0], support, inst.B_S)
print("oracle rule 0 payments:\n",
      np.round(scoring.score_table(inst.oracle_rules[0], support), 9))

# Mixing two proper rules stays proper; sliding the weight moves the agent's
# response from one arm to the other at a sharp threshold.
for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
    mixed = scoring.mix(inst.oracle_rules[0], inst.oracle_rules[1], lam)
    scoring.check_proper(mixed, support, inst.B_S)
    print(f"weight {lam:.2f} on rule 1 -> agent plays arm",
          agent.best_response(inst, mixed))

# play_round samples the full interaction: arm, report, state, payment.
out = agent.play_round(inst, inst.oracle_rules[0], rng)
print(f"one round: arm={out.arm} report={out.report} state={out.state} "
      f"payment={out.payment:.3f} principal_profit={out.principal_profit:.3f}")

# Instances round-trip through JSON for reuse from the command line.
domain.save_instance(inst, "/tmp/two_state.json")
again = domain.load_instance("/tmp/two_state.json")
assert np.array_equal(again.Q, inst.Q)
print("saved and reloaded instance matches")
