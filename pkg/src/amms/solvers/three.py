"""Three agents: agents 0 and 1 get their MMS, agent 0 possibly only 9/8 of it."""

from __future__ import annotations

from fractions import Fraction

from ..core import Allocation, InvariantError, NormalizedInstance, alpha_for
from ..matching import build_graph, perfect_matching
from ..procedures import divide_and_choose, find_heavy_pair, load_balancing
from .base import finalize

NINE_EIGHTHS = Fraction(9, 8)


def solve_three(normalized: NormalizedInstance) -> Allocation:
    """9/8-AMMS allocation for three agents.

    Agent 2's MMS partition is offered to everyone. Without a perfect matching
    agents 0 and 1 both like a single bundle, and either a heavy pair lets
    agent 2 take a bundle while the other two divide-and-choose, or agent 0
    ends up with a bundle costing at most 9/8.
    """
    if normalized.n != 3:
        raise ValueError("solve_three needs exactly three agents")
    alpha = alpha_for(3)
    view = normalized.full_view()
    owner = 2
    P = normalized.witnesses[owner]
    graph = build_graph(view, P)
    matching = perfect_matching(graph)
    if matching is not None:
        return finalize(normalized, {a: P[j] for a, j in matching.items()}, alpha, None, "matching")

    shared = graph.neighborhood([0, 1])
    if len(shared) != 1:
        raise InvariantError(f"agents 0 and 1 like {len(shared)} bundles, expected exactly one")
    (s,) = shared
    others = [j for j in range(3) if j != s]

    for j in others:
        hit = find_heavy_pair(view, P[j], (0, 1))
        if hit is not None:
            divider = hit[0]
            chooser = 1 - divider
            mine, theirs = divide_and_choose(view, view.items - P[j], divider, chooser)
            assignment = {owner: P[j], divider: mine, chooser: theirs}
            return finalize(normalized, assignment, alpha, None, "heavy-pair")

    # agent 2 takes the costlier of the two others for agent 0; ties go to the higher index
    lo, hi = sorted(others, key=lambda j: (view.cost(0, P[j]), j))
    if view.cost(0, P[lo]) <= NINE_EIGHTHS:
        assignment = {0: P[lo], 1: P[s], owner: P[hi]}
        return finalize(normalized, assignment, alpha, 0, "direct")

    rest = P[s] | P[lo]
    halves = load_balancing(rest, 2, view.row(0))
    pick = min((0, 1), key=lambda b: (view.cost(1, halves[b]), b))
    assignment = {1: halves[pick], 0: halves[1 - pick], owner: P[hi]}
    return finalize(normalized, assignment, alpha, 0, "load-balancing")
