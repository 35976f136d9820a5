"""Independent certification of allocations and partitions.

MMS values are recomputed from the raw instance here; nothing is taken from a
solver's normalization unless the caller passes ``mms_values`` explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

from .core import (
    Allocation,
    AllocationError,
    Instance,
    OracleBudgetError,
    Partition,
    format_rational,
)
from .mms import mms

ENUMERATION_BUDGET = 2_000_000


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    alpha: Fraction
    mms: tuple[Fraction, ...]
    costs: tuple[Fraction, ...]
    ratios: tuple[Fraction, ...]
    flexible_agent: Optional[int]
    proportional: tuple[bool, ...]
    reason: str = ""
    n_within_mms: int = field(default=0)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "alpha": format_rational(self.alpha),
            "mms": [format_rational(v) for v in self.mms],
            "costs": [format_rational(c) for c in self.costs],
            "ratios": [format_rational(r) for r in self.ratios],
            "flexible_agent": self.flexible_agent,
            "agents_within_mms": self.n_within_mms,
            "proportional": list(self.proportional),
            "reason": self.reason,
        }


def _ratio(cost: Fraction, share: Fraction) -> Fraction:
    if share == 0:
        # zero MMS only happens with all-zero costs
        return Fraction(0)
    return cost / share


def verify_allocation(
    instance: Instance,
    allocation: Allocation,
    alpha,
    mms_values: Optional[Sequence[Fraction]] = None,
) -> VerificationReport:
    """Check that all agents but one get at most their MMS and the last at most
    ``alpha`` times it.

    Raises :class:`~amms.core.AllocationError` if the bundles do not partition
    the items. Proportionality is reported but never enforced.
    """
    alpha = Fraction(alpha)
    n = instance.n
    if allocation.n != n:
        raise AllocationError(f"allocation has {allocation.n} bundles for {n} agents")
    allocation.check_complete(instance.m)
    if mms_values is None:
        mms_values = [mms(instance, i, instance.items, n).value for i in range(n)]
    mms_values = tuple(Fraction(v) for v in mms_values)
    costs = tuple(instance.cost(i, allocation.bundles[i]) for i in range(n))
    ratios = tuple(_ratio(c, v) for c, v in zip(costs, mms_values))
    prop = tuple(costs[i] * n <= instance.cost(i, instance.items) for i in range(n))

    over = [i for i in range(n) if ratios[i] > 1]
    flexible = allocation.flexible_agent
    if not over:
        passed, reason = True, ""
    elif len(over) > 1:
        passed = False
        reason = f"agents {over} all exceed their MMS"
    else:
        worst = over[0]
        passed = ratios[worst] <= alpha
        reason = "" if passed else (
            f"agent {worst} has ratio {format_rational(ratios[worst])} > alpha {format_rational(alpha)}"
        )
        flexible = worst
    return VerificationReport(
        passed=passed,
        alpha=alpha,
        mms=mms_values,
        costs=costs,
        ratios=ratios,
        flexible_agent=flexible,
        proportional=prop,
        reason=reason,
        n_within_mms=n - len(over),
    )


def verify_partition_shape(view, partition: Partition, agent: int, alpha) -> bool:
    """True iff at most one bundle costs more than 1 to ``agent`` and it costs at most ``alpha``."""
    alpha = Fraction(alpha)
    over = [c for c in partition.costs(view, agent) if c > 1]
    return len(over) == 0 or (len(over) == 1 and over[0] <= alpha)


def naive_mms(row: Sequence[Fraction], items: Iterable[int], k: int) -> Fraction:
    """MMS by trying every assignment of items to ``k`` labelled bundles."""
    items = sorted(items)
    if not items:
        return Fraction(0)
    best = None
    for labels in product(range(k), repeat=len(items)):
        loads = [Fraction(0)] * k
        for e, b in zip(items, labels):
            loads[b] += row[e]
        top = max(loads)
        if best is None or top < best:
            best = top
    return best


def brute_force_best_alpha(instance: Instance, budget: int = ENUMERATION_BUDGET) -> Fraction:
    """Smallest ``alpha >= 1`` for which some allocation is ``alpha``-AMMS.

    Every one of the ``n^m`` allocations is tried.
    """
    n, m = instance.n, instance.m
    if n ** m > budget:
        raise OracleBudgetError(f"enumeration budget exceeded: {n}^{m} > {budget}")
    shares = [mms(instance, i, instance.items, n).value for i in range(n)]
    # ratio of each item for each agent, so a bundle ratio is a plain sum
    unit = [[_ratio(instance.costs[i][e], shares[i]) for e in range(m)] for i in range(n)]
    best: Optional[Fraction] = None
    for owners in product(range(n), repeat=m):
        ratios = [Fraction(0)] * n
        for e, i in enumerate(owners):
            ratios[i] += unit[i][e]
        ratios.sort()
        if n >= 2 and ratios[-2] > 1:
            continue
        top = max(ratios[-1], Fraction(1))
        if best is None or top < best:
            best = top
            if best == 1:
                break
    return best
