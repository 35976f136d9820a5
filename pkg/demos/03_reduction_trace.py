"""How the general solver peels agents off, one reduction at a time.

With five or more agents the solver picks a pivot, builds a partition where
only the last bundle may exceed her share, and tries to match everyone else to
the other bundles. When that fails, the agents outside the maximum Hall
violator are served and leave, and the rest continue on the leftover chores.
"""

import random

from amms import Instance, alpha_for, format_rational, normalize, solve

rng = random.Random(17)
n = 6
# find an instance that needs more than one round
for attempt in range(200):
    m = rng.randint(n, 2 * n)
    instance = Instance.from_rows([[rng.randint(1, 9) for _ in range(m)] for _ in range(n)])
    allocation, trace = solve(instance)
    if len(trace.steps) > 1:
        break

norm = normalize(instance)
print(f"n={n}, m={instance.m}, guarantee {format_rational(alpha_for(n))}\n")
for r, step in enumerate(trace.steps, 1):
    print(f"round {r}: pivot {step.pivot}, agents {sorted(step.agents)}, method {step.method}")
    print("  partition costs for pivot:",
          [format_rational(c) for c in step.partition.costs(norm, step.pivot)])
    if step.violator is not None:
        print(f"  violator {sorted(step.violator.agents)} likes only bundles {sorted(step.violator.neighborhood)}")
    for agent, bundle in sorted(step.assigned.items()):
        print(f"  agent {agent} leaves with {sorted(bundle)} ({format_rational(norm.cost(agent, bundle))})")
    if step.survivors:
        print(f"  {len(step.survivors)} agents remain on {len(step.remaining_items)} items")

print("\nfinal ratios:", [format_rational(r) for r in allocation.ratios])
