from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from ..core import Allocation, InvariantError, NormalizedInstance, Partition, format_rational
from ..matching import Violator
from ..verify import verify_allocation


@dataclass(frozen=True)
class TraceStep:
    """One iteration of the general-n loop."""

    pivot: int
    agents: frozenset
    items: frozenset
    partition: Partition
    method: str
    matching: Optional[dict]
    violator: Optional[Violator]
    assigned: dict
    survivors: frozenset
    remaining_items: frozenset

    def to_json(self) -> dict:
        return {
            "pivot": self.pivot,
            "agents": sorted(self.agents),
            "items": sorted(self.items),
            "partition": self.partition.to_json(),
            "method": self.method,
            "matching": None if self.matching is None else {str(a): j for a, j in self.matching.items()},
            "violator": None if self.violator is None else {
                "agents": sorted(self.violator.agents),
                "neighborhood": sorted(self.violator.neighborhood),
            },
            "assigned": {str(a): sorted(b) for a, b in sorted(self.assigned.items())},
            "survivors": sorted(self.survivors),
            "remaining_items": sorted(self.remaining_items),
        }


@dataclass
class ReductionTrace:
    n: int
    steps: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"n": self.n, "steps": [s.to_json() for s in self.steps]}


def finalize(
    normalized: NormalizedInstance,
    assignment: Mapping[int, frozenset],
    alpha: Fraction,
    flexible: Optional[int],
    case: str,
) -> Allocation:
    """Assemble an allocation and certify it against the solver's own MMS values."""
    n = normalized.n
    if sorted(assignment) != list(range(n)):
        raise InvariantError(f"{case}: agents {sorted(assignment)} assigned, expected all {n}")
    bundles = tuple(frozenset(assignment[i]) for i in range(n))
    ratios = tuple(normalized.cost(i, bundles[i]) for i in range(n))
    allocation = Allocation(bundles, alpha, flexible, ratios, case)
    report = verify_allocation(normalized.base, allocation, alpha, normalized.mms)
    if not report.passed:
        raise InvariantError(f"{case}: {report.reason}")
    for i in range(n):
        if i != flexible and ratios[i] > 1:
            raise InvariantError(
                f"{case}: agent {i} is not the flexible agent but has ratio {format_rational(ratios[i])}"
            )
    return allocation
