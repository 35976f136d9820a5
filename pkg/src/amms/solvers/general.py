"""Five or more agents: everyone but one gets her MMS, the last (n+1)^2/4n of it."""

from __future__ import annotations

from typing import NamedTuple, Optional

from ..core import Allocation, InvariantError, NormalizedInstance, Partition, ReducedInstanceView, alpha_for
from ..matching import FeasibilityGraph, Violator, build_graph, complement_matching, max_violator, perfect_matching
from ..procedures import gamma_partition, uses_partition_merging
from .base import ReductionTrace, TraceStep, finalize


class Reduction(NamedTuple):
    assignments: dict
    view: ReducedInstanceView
    violator: Violator
    matching: dict


def valid_reduction(
    view: ReducedInstanceView,
    graph_prime: FeasibilityGraph,
    pivot: int,
    partition: Partition,
) -> Reduction:
    """Hand out bundles nobody in the maximum violator wants, and drop their owners.

    ``graph_prime`` excludes ``pivot`` and the relaxed (last) bundle. The agents
    outside the violator ``S`` are matched outside ``L(S)``; the pivot takes the
    lowest-index bundle still free outside ``L(S)``. Only ``S`` survives.
    """
    relaxed = len(partition) - 1
    violator = max_violator(graph_prime)
    if violator is None:
        raise ValueError("valid_reduction needs a graph without a perfect matching")
    matching: dict = {}
    if set(violator.agents) != set(graph_prime.left):
        matching = complement_matching(graph_prime, violator)
    taken = set(violator.neighborhood) | set(matching.values()) | {relaxed}
    pool = [j for j in range(len(partition)) if j not in taken]
    if not pool:
        raise InvariantError("no bundle left for the pivot agent")
    assignments = {a: partition[j] for a, j in matching.items()}
    assignments[pivot] = partition[pool[0]]
    used = frozenset().union(*assignments.values())
    smaller = view.shrink(assignments.keys(), used)
    if smaller.agents != violator.agents:
        raise InvariantError("surviving agents differ from the violator")
    return Reduction(assignments, smaller, violator, matching)


def solve_general(normalized: NormalizedInstance) -> tuple[Allocation, ReductionTrace]:
    """(n+1)^2/4n-AMMS allocation by repeated valid reductions."""
    n = normalized.n
    if n < 5:
        raise ValueError("solve_general needs at least five agents")
    gamma = alpha_for(n)
    trace = ReductionTrace(n)
    view = normalized.full_view()
    assignment: dict = {}
    for _ in range(n):
        pivot = min(view.agents)
        method = "partition-merging" if uses_partition_merging(n, view.k) else "capped-bag-filling"
        partition = gamma_partition(normalized, view, pivot)
        relaxed = len(partition) - 1
        graph = build_graph(view, partition, excluded_agent=pivot, excluded_bundle=relaxed)
        matching = perfect_matching(graph)
        if matching is not None:
            got = {a: partition[j] for a, j in matching.items()}
            got[pivot] = partition[relaxed]
            assignment.update(got)
            trace.steps.append(TraceStep(
                pivot, view.agents, view.items, partition, method, matching, None,
                got, frozenset(), frozenset(),
            ))
            return finalize(normalized, assignment, gamma, pivot, "general"), trace

        reduction = valid_reduction(view, graph, pivot, partition)
        if reduction.view.k >= view.k:
            raise InvariantError("a reduction did not remove any agent")
        if not reduction.view.is_valid():
            raise InvariantError("a reduction broke c_i(M') <= |N'|")
        assignment.update(reduction.assignments)
        trace.steps.append(TraceStep(
            pivot, view.agents, view.items, partition, method, reduction.matching,
            reduction.violator, reduction.assignments, reduction.view.agents, reduction.view.items,
        ))
        view = reduction.view
    raise InvariantError(f"no allocation after {n} rounds")
