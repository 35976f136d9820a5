"""Four agents: three get their MMS, one gets at most 4/3 of it.

Agent 3 owns the reference MMS partition ``P``. When the feasibility graph has
no perfect matching, the maximum Hall violator ``S*`` decides the case:

* ``|S*| = 2``: the two outside agents are matched, the two inside agents
  split the rest by load-balancing.
* ``|S*| = 3``, ``|L(S*)| = 2``: either a direct assignment plus a two-agent
  load-balance, or a (4/3, 1, 1)-partition for the agent who likes two bundles.
* ``|S*| = 3``, ``|L(S*)| = 1``: atomic bundles ``B_i & P_j`` (``B`` being the
  lead agent's MMS partition) pick agent 3's bundle and build a
  (4/3, 1, 1)-partition.

Every (4/3, 1, 1)-partition is finished by :func:`four_thirds_three_agents`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..core import Allocation, InvariantError, NormalizedInstance, Partition, alpha_for
from ..matching import FeasibilityGraph, build_graph, complement_matching, max_violator, perfect_matching
from ..procedures import divide_and_choose, load_balancing
from .base import finalize

FOUR_FIFTHS = Fraction(4, 5)


@dataclass(frozen=True)
class AtomicBundleMatrix:
    """``cells[i][j] = B[i] & P[j]`` for two 4-partitions of the same items."""

    cells: tuple[tuple[frozenset, ...], ...]

    @classmethod
    def of(cls, B: Partition, P: Partition) -> "AtomicBundleMatrix":
        if B.ground != P.ground:
            raise ValueError("atomic bundles need two partitions of the same items")
        return cls(tuple(tuple(b & p for p in P) for b in B))

    def column(self, j: int) -> list[frozenset]:
        return [row[j] for row in self.cells]


def four_thirds_three_agents(view, partition: Partition, lead: int) -> tuple[dict, int]:
    """Allocate a (4/3, 1, 1)-partition for ``lead`` among the view's three agents.

    Returns ``(assignment, flexible_agent)``.
    """
    if view.k != 3 or lead not in view.agents:
        raise ValueError("need a three-agent view containing the lead agent")
    if partition.ground != view.items or len(partition) != 3:
        raise ValueError("need a 3-partition of the view's items")
    second, third = sorted(view.agents - {lead})
    graph = build_graph(view, partition, excluded_agent=lead)
    matching = perfect_matching(graph)
    if matching is not None:
        assignment = {a: partition[j] for a, j in matching.items()}
        (spare,) = set(range(3)) - set(matching.values())
        assignment[lead] = partition[spare]
        return assignment, lead

    for j in range(3):
        if (
            view.cost(lead, partition[j]) <= 1
            and view.cost(second, partition[j]) > 1
            and view.cost(third, partition[j]) > 1
        ):
            mine, theirs = divide_and_choose(view, view.items - partition[j], second, third)
            return {lead: partition[j], second: mine, third: theirs}, second
    raise InvariantError("no bundle is feasible for the lead agent alone")


def _finish_with_three(normalized, owner_bundle, owner, trio, lead, partition, case) -> Allocation:
    view = normalized.full_view().shrink([owner], owner_bundle)
    if view.agents != frozenset(trio):
        raise InvariantError(f"{case}: remaining agents {sorted(view.agents)} != {sorted(trio)}")
    assignment, flexible = four_thirds_three_agents(view, partition, lead)
    assignment[owner] = owner_bundle
    return finalize(normalized, assignment, alpha_for(4), flexible, case)


def _split_between_two(normalized, fixed: dict, splitter: int, picker: int, case: str) -> Allocation:
    """Load-balance the unassigned items for ``splitter``; ``picker`` picks first."""
    view = normalized.full_view()
    rest = view.items.difference(*fixed.values())
    halves = load_balancing(rest, 2, view.row(splitter))
    pick = min((0, 1), key=lambda b: (view.cost(picker, halves[b]), b))
    assignment = dict(fixed)
    assignment[picker] = halves[pick]
    assignment[splitter] = halves[1 - pick]
    return finalize(normalized, assignment, alpha_for(4), splitter, case)


def _sorted_by_cost(view, agent: int, P: Partition, bundles: Sequence[int]) -> list[int]:
    return sorted(bundles, key=lambda j: (view.cost(agent, P[j]), j))


def solve_four(normalized: NormalizedInstance) -> Allocation:
    """4/3-AMMS allocation for four agents."""
    if normalized.n != 4:
        raise ValueError("solve_four needs exactly four agents")
    alpha = alpha_for(4)
    view = normalized.full_view()
    owner = 3
    P = normalized.witnesses[owner]
    graph = build_graph(view, P)
    matching = perfect_matching(graph)
    if matching is not None:
        return finalize(normalized, {a: P[j] for a, j in matching.items()}, alpha, None, "matching")

    violator = max_violator(graph)
    S = sorted(violator.agents)
    L = sorted(violator.neighborhood)

    if len(S) == 2:
        outside = complement_matching(graph, violator)
        fixed = {a: P[j] for a, j in outside.items()}
        return _split_between_two(normalized, fixed, S[0], S[1], "s2")

    if len(S) != 3 or owner in S:
        raise InvariantError(f"unexpected violator {S} with neighborhood {L}")
    unliked = [j for j in range(4) if j not in L]

    if len(L) == 2:
        return _three_like_two(normalized, graph, P, S, L, unliked)
    if len(L) == 1:
        return _three_like_one(normalized, P, S, L[0], unliked)
    raise InvariantError(f"violator {S} has neighborhood {L}")


def _three_like_two(normalized, graph: FeasibilityGraph, P: Partition, S, L, unliked) -> Allocation:
    view = normalized.full_view()
    owner = 3
    double = [a for a in S if len(graph.neighbors(a)) >= 2]
    if not double:
        # two agents share one bundle, the third likes the other one
        liked_by = {j: [a for a in S if (a, j) in graph.edges] for j in L}
        shared = next(j for j in L if len(liked_by[j]) == 2)
        (single,) = [j for j in L if j != shared]
        (loner,) = liked_by[single]
        a, b = liked_by[shared]
        owner_bundle = _sorted_by_cost(view, a, P, unliked)[-1]
        fixed = {loner: P[single], owner: P[owner_bundle]}
        return _split_between_two(normalized, fixed, a, b, "s3-l2-single")

    lead = double[0]
    q1, q2, q3, q4 = _sorted_by_cost(view, lead, P, range(4))
    if {q1, q2} != set(L):
        raise InvariantError("the lead's two liked bundles are not her cheapest")
    halves = load_balancing(P[q1] | P[q3], 2, view.row(lead))
    partition = Partition((P[q2], halves[0], halves[1]), P[q1] | P[q2] | P[q3])
    return _finish_with_three(normalized, P[q4], owner, S, lead, partition, "s3-l2-double")


def _three_like_one(normalized, P: Partition, S, liked: int, unliked) -> Allocation:
    view = normalized.full_view()
    owner = 3
    lead = S[0]
    B = normalized.witnesses[lead]
    atoms = AtomicBundleMatrix.of(B, P)

    for j in unliked:
        for i in range(4):
            if view.cost(lead, P[j] - atoms.cells[i][j]) > 1:
                rest = view.items - P[j] - B[i]
                halves = load_balancing(rest, 2, view.row(lead))
                partition = Partition((B[i] - P[j], halves[0], halves[1]), view.items - P[j])
                return _finish_with_three(normalized, P[j], owner, S, lead, partition, "s3-l1-atomic")

    q1, q2, q3, q4 = _sorted_by_cost(view, lead, P, range(4))
    if q1 != liked:
        raise InvariantError("the shared bundle is not the lead's cheapest")
    beta = view.cost(lead, P[q1])

    def cheapest_atom(j: int) -> frozenset:
        column = atoms.column(j)
        return column[min(range(4), key=lambda i: (view.cost(lead, column[i]), i))]

    b2, b3 = cheapest_atom(q2), cheapest_atom(q3)
    if beta <= FOUR_FIFTHS:
        bundles = (P[q1] | b2 | b3, P[q2] - b2, P[q3] - b3)
        case = "s3-l1-beta-low"
    else:
        bundles = (P[q1], P[q2] | b3, P[q3] - b3)
        case = "s3-l1-beta-high"
    partition = Partition(bundles, view.items - P[q4])
    return _finish_with_three(normalized, P[q4], owner, S, lead, partition, case)
