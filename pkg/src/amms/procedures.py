"""Allocation subroutines shared by the solvers.

Ties are broken the same way everywhere: items go in non-increasing cost
order with the lower index first, and among equally cheap bundles the lower
bundle index wins.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import InvariantError, NormalizedInstance, Partition, ReducedInstanceView
from .mms import mms_partition


def _by_cost_desc(items: Iterable[int], costs: Sequence[Fraction]) -> list[int]:
    return sorted(items, key=lambda e: (-costs[e], e))


def _load(bundle: Iterable[int], costs: Sequence[Fraction]) -> Fraction:
    return sum((costs[e] for e in bundle), Fraction(0))


def divide_and_choose(view, items: Iterable[int], divider: int, chooser: int) -> tuple[frozenset, frozenset]:
    """Divider splits ``items`` optimally in two; chooser takes the cheaper half.

    Returns ``(divider_bundle, chooser_bundle)``.
    """
    items = frozenset(items)
    split = mms_partition(view, divider, items, 2)
    first, second = split[0], split[1]
    if view.cost(chooser, second) < view.cost(chooser, first):
        return first, second
    return second, first


def load_balancing(items: Iterable[int], n_prime: int, costs: Sequence[Fraction]) -> Partition:
    """LPT greedy: each item, largest first, joins the currently cheapest bundle.

    >>> p = load_balancing(range(5), 3, [5, 4, 3, 3, 2])
    >>> [sorted(b) for b in p]
    [[0], [1, 4], [2, 3]]
    """
    if n_prime < 1:
        raise ValueError("need at least one bundle")
    items = frozenset(items)
    bundles: list[list[int]] = [[] for _ in range(n_prime)]
    loads = [Fraction(0)] * n_prime
    for e in _by_cost_desc(items, costs):
        j = min(range(n_prime), key=lambda b: (loads[b], b))
        bundles[j].append(e)
        loads[j] += costs[e]
    return Partition(tuple(bundles), items)


def find_heavy_pair(view, bundle: Iterable[int], agents: Iterable[int]) -> Optional[tuple[int, int, int]]:
    """Some ``(agent, e1, e2)`` with ``e1 < e2`` in ``bundle`` and
    ``c_agent(e1) + c_agent(e2) >= 1``, scanning agents then item pairs in order."""
    items = sorted(bundle)
    for agent in sorted(agents):
        row = view.row(agent)
        for e1, e2 in combinations(items, 2):
            if row[e1] + row[e2] >= 1:
                return agent, e1, e2
    return None


def bag_fill(items: Iterable[int], k: int, costs: Sequence[Fraction]) -> tuple[list[list[int]], list[int]]:
    """Fill ``k`` bundles under a unit cap, largest items first, each item going
    to the first bundle it fits in. Returns ``(bundles, leftover)``."""
    bundles: list[list[int]] = [[] for _ in range(k)]
    loads = [Fraction(0)] * k
    leftover: list[int] = []
    for e in _by_cost_desc(items, costs):
        for j in range(k):
            if loads[j] + costs[e] <= 1:
                bundles[j].append(e)
                loads[j] += costs[e]
                break
        else:
            leftover.append(e)
    return bundles, leftover


def capped_bag_filling(view: ReducedInstanceView, agent: int) -> Partition:
    """``k`` bundles filled greedily under a unit cap; overflow goes to the cheapest.

    Items that fit nowhere are appended to the last bundle after the bundles
    are sorted by non-increasing cost, so that bundle is the relaxed one.
    """
    k = view.k
    costs = view.row(agent)
    bundles, leftover = bag_fill(view.items, k, costs)
    if len(leftover) > k - 1:
        raise InvariantError(f"capped bag-filling left {len(leftover)} items for k={k}")
    order = sorted(range(k), key=lambda j: (-_load(bundles[j], costs), j))
    ordered = [bundles[j] for j in order]
    ordered[-1] = ordered[-1] + leftover
    return Partition(tuple(ordered), view.items)


def partition_merging(normalized: NormalizedInstance, view: ReducedInstanceView, agent: int) -> Partition:
    """Restrict the agent's original MMS partition to the remaining items, keep
    its ``k-1`` most expensive bundles and merge the rest into the last one."""
    k = view.k
    witness = normalized.witnesses[agent]
    restricted = [b & view.items for b in witness]
    costs = view.row(agent)
    order = sorted(range(len(restricted)), key=lambda j: (-_load(restricted[j], costs), j))
    kept = [restricted[j] for j in order[: k - 1]]
    merged = frozenset().union(*(restricted[j] for j in order[k - 1:]))
    return Partition(tuple(kept) + (merged,), view.items)


def uses_partition_merging(n: int, k: int) -> bool:
    """Partition-merging handles ``k > floor((n+1)/2)``; bag-filling the rest."""
    return k > (n + 1) // 2


def gamma_partition(normalized: NormalizedInstance, view: ReducedInstanceView, agent: int) -> Partition:
    """A ``k``-partition whose first ``k-1`` bundles cost at most 1 to ``agent``
    and whose last bundle costs at most ``(n+1)^2/4n``."""
    if uses_partition_merging(normalized.n, view.k):
        return partition_merging(normalized, view, agent)
    return capped_bag_filling(view, agent)
