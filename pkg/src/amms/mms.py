"""Exact maximin shares and MMS partitions.

The value is computed by a memoized subset DP over (remaining items, bundles
left), with bundles always taking the lowest remaining item so that each
unordered partition is generated once. Costs are scaled to a common
denominator so the DP runs on Python ints.

The witness is the partition whose item-to-bundle label vector is
lexicographically smallest among all partitions achieving the value. It is
found by a depth-first labelling in item order at capacity = value, with a
memo of dead states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .core import (
    Instance,
    NormalizedInstance,
    OracleBudgetError,
    Partition,
    DegenerateInstanceError,
)

DEFAULT_ITEM_BUDGET = 24


@dataclass(frozen=True)
class MmsResult:
    value: Fraction
    witness: Partition


def _scale(row: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for c in row:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in row], den


def _min_max_value(w: list[int], k: int) -> int:
    """Smallest achievable maximum bundle weight over all k-partitions of w."""
    m = len(w)
    if m == 0:
        return 0
    if k >= m:
        return max(w)
    # heaviest item first: it is the one every bundle choice is forced to take
    w = sorted(w, reverse=True)
    sums = [0]
    tops = [0]
    for x in w:
        sums += [s + x for s in sums]
        tops += [t if t > x else x for t in tops]

    @lru_cache(maxsize=None)
    def f(s: int, j: int) -> int:
        if j == 1:
            return sums[s]
        if bin(s).count("1") <= j:
            return tops[s]
        floor = max(tops[s], -(-sums[s] // j))
        low = s & -s
        rest = s ^ low
        best = sums[s]
        sub = rest
        while True:
            t = low | sub
            ct = sums[t]
            if ct < best:
                r = s ^ t
                # the other j-1 bundles must fit strictly below `best`
                if max(tops[r], -(-sums[r] // (j - 1))) < best:
                    cand = max(ct, f(r, j - 1)) if r else ct
                    if cand < best:
                        best = cand
                        if best <= floor:
                            break
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return best

    return f((1 << m) - 1, k)


def _lexmin_labels(w: list[int], k: int, cap: int) -> Optional[list[int]]:
    """Lexicographically smallest labelling into k bundles of weight <= cap."""
    m = len(w)
    suffix = [0] * (m + 1)
    for p in range(m - 1, -1, -1):
        suffix[p] = suffix[p + 1] + w[p]
    loads = [0] * k
    labels = [0] * m
    dead: set = set()

    def dfs(p: int, used: int) -> bool:
        if p == m:
            return True
        if suffix[p] > k * cap - sum(loads):
            return False
        key = (p, tuple(sorted(loads)))
        if key in dead:
            return False
        for b in range(min(used + 1, k)):
            if loads[b] + w[p] <= cap:
                loads[b] += w[p]
                labels[p] = b
                if dfs(p + 1, max(used, b + 1)):
                    return True
                loads[b] -= w[p]
        dead.add(key)
        return False

    return labels if dfs(0, 0) else None


def mms_of_row(
    row: Sequence[Fraction],
    items: Iterable[int],
    k: int,
    budget: int = DEFAULT_ITEM_BUDGET,
) -> MmsResult:
    """MMS of a single cost row over ``items`` split into ``k`` bundles."""
    if k < 1:
        raise ValueError("k must be at least 1")
    order = sorted(items)
    if len(order) > budget:
        raise OracleBudgetError(
            f"oracle budget exceeded: {len(order)} items > budget of {budget}"
        )
    w, den = _scale([Fraction(row[e]) for e in order])
    value = _min_max_value(w, k)
    labels = _lexmin_labels(w, k, value)
    if labels is None:  # pragma: no cover - the DP value is always achievable
        raise AssertionError("no witness at the optimal value")
    bundles = [[] for _ in range(k)]
    for e, b in zip(order, labels):
        bundles[b].append(e)
    return MmsResult(Fraction(value, den), Partition(tuple(bundles), frozenset(order)))


def mms(source, agent: int, items: Iterable[int], k: int, budget: int = DEFAULT_ITEM_BUDGET) -> MmsResult:
    """Exact ``MMS_agent(items, k)`` and a witness partition.

    ``source`` is anything exposing ``row(agent)``: an :class:`Instance`, a
    normalized instance or a reduced view.

    >>> inst = Instance.from_rows([[3, 3, 2, 2, 2]])
    >>> mms(inst, 0, range(5), 2).value
    Fraction(6, 1)
    """
    return mms_of_row(source.row(agent), items, k, budget)


def mms_partition(source, agent: int, items: Iterable[int], k: int, budget: int = DEFAULT_ITEM_BUDGET) -> Partition:
    return mms(source, agent, items, k, budget).witness


def normalize(instance: Instance, budget: int = DEFAULT_ITEM_BUDGET) -> NormalizedInstance:
    """Divide every agent's costs by her own ``MMS(M, n)``.

    An agent with MMS 0 has only zero-cost items; she is left with an all-zero
    row, so every bundle is feasible for her.
    """
    n = instance.n
    values = []
    witnesses = []
    rows = []
    for i in range(n):
        res = mms(instance, i, instance.items, n, budget)
        row = instance.row(i)
        if res.value == 0:
            if any(c > 0 for c in row):  # pragma: no cover - impossible for additive costs
                raise DegenerateInstanceError(f"agent {i} has MMS 0 but positive costs")
            rows.append(tuple(Fraction(0) for _ in row))
        else:
            rows.append(tuple(c / res.value for c in row))
        values.append(res.value)
        witnesses.append(res.witness)
    return NormalizedInstance(instance, tuple(values), tuple(witnesses), tuple(rows))

