"""All-but-one maximin share allocations of chores, in exact arithmetic."""

from .core import (
    Allocation,
    AllocationError,
    AmmsError,
    DegenerateInstanceError,
    Instance,
    InvariantError,
    NormalizedInstance,
    OracleBudgetError,
    Partition,
    ReducedInstanceView,
    alpha_for,
    format_rational,
    parse_rational,
)
from .matching import FeasibilityGraph, Violator, build_graph, max_violator, perfect_matching
from .mms import MmsResult, mms, mms_partition, normalize
from .solvers import ReductionTrace, TraceStep, solve
from .verify import VerificationReport, brute_force_best_alpha, naive_mms, verify_allocation

__all__ = [
    "Allocation",
    "AllocationError",
    "AmmsError",
    "DegenerateInstanceError",
    "FeasibilityGraph",
    "Instance",
    "InvariantError",
    "MmsResult",
    "NormalizedInstance",
    "OracleBudgetError",
    "Partition",
    "ReducedInstanceView",
    "ReductionTrace",
    "TraceStep",
    "VerificationReport",
    "Violator",
    "alpha_for",
    "brute_force_best_alpha",
    "build_graph",
    "format_rational",
    "max_violator",
    "mms",
    "mms_partition",
    "naive_mms",
    "normalize",
    "parse_rational",
    "perfect_matching",
    "solve",
    "verify_allocation",
]
