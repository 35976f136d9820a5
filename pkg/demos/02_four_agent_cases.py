"""Walk through every branch of the four-agent solver.

Each instance below is built so that the maximum Hall violator of agent 3's
MMS partition has a particular shape. The solver reports which branch it took,
and the flexible agent never pays more than 4/3 of her share.
"""

from amms import alpha_for, format_rational, max_violator, normalize, build_graph, solve, verify_allocation
from amms.harness import constructed_instances

for name, instance in constructed_instances().items():
    if not name.startswith("four/"):
        continue
    norm = normalize(instance)
    violator = max_violator(build_graph(norm.full_view(), norm.witnesses[3]))
    shape = "none" if violator is None else f"|S|={len(violator.agents)} |L(S)|={len(violator.neighborhood)}"
    allocation, case = solve(instance)
    report = verify_allocation(instance, allocation, alpha_for(4))
    ratios = ", ".join(format_rational(r) for r in allocation.ratios)
    print(f"{name:<28} violator {shape:<16} branch {case:<18} ratios ({ratios})  ok={report.passed}")
