"""Three agents, eight chores, and a flexible agent who pays exactly 9/8.

Every agent's maximin share is 1 here. Agents 0 and 1 agree on costs and only
one bundle of agent 2's MMS partition is cheap enough for either of them, so
the matching step fails and the fallback hands agent 0 a bundle costing 9/8.

The instance itself is not hard: giving agent 2 items 2, 3, 4 lets everyone
stay within their share (see 04_how_tight_is_it.py). What it shows is that
the solver's 9/8 bound is reached.
"""

from amms import build_graph, format_rational, mms, normalize, perfect_matching, solve
from amms.harness import tight_example

instance = tight_example()
for i, row in enumerate(instance.costs):
    print(f"agent {i}: " + " ".join(format_rational(c) for c in row))

shares = [mms(instance, i, instance.items, instance.n) for i in range(instance.n)]
print("\nMMS values:", [format_rational(s.value) for s in shares])
print("agent 2's MMS partition:", [sorted(b) for b in shares[2].witness])

norm = normalize(instance)
graph = build_graph(norm.full_view(), norm.witnesses[2])
for agent in graph.left:
    print(f"agent {agent} can take bundles {graph.neighbors(agent)}")
print("perfect matching:", perfect_matching(graph))

allocation, case = solve(instance)
print(f"\nsolver branch: {case}")
for i, bundle in enumerate(allocation.bundles):
    print(f"agent {i} gets {sorted(bundle)} at {format_rational(allocation.ratios[i])} of her share")
print("flexible agent:", allocation.flexible_agent)
