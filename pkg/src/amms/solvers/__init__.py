"""AMMS solvers, one per agent-count regime, and the :func:`solve` dispatcher."""

from __future__ import annotations

from typing import Union

from ..core import Allocation, Instance, NormalizedInstance, alpha_for
from ..mms import DEFAULT_ITEM_BUDGET, normalize
from ..procedures import divide_and_choose
from .base import ReductionTrace, TraceStep, finalize
from .four import AtomicBundleMatrix, four_thirds_three_agents, solve_four
from .general import Reduction, solve_general, valid_reduction
from .three import solve_three

__all__ = [
    "AtomicBundleMatrix",
    "Reduction",
    "ReductionTrace",
    "TraceStep",
    "four_thirds_three_agents",
    "solve",
    "solve_four",
    "solve_general",
    "solve_normalized",
    "solve_three",
    "valid_reduction",
]


def solve_normalized(normalized: NormalizedInstance) -> tuple[Allocation, Union[ReductionTrace, str]]:
    n = normalized.n
    if n == 1:
        return finalize(normalized, {0: normalized.items}, alpha_for(1), None, "single"), "single"
    if n == 2:
        view = normalized.full_view()
        mine, theirs = divide_and_choose(view, view.items, 0, 1)
        alloc = finalize(normalized, {0: mine, 1: theirs}, alpha_for(2), None, "divide-and-choose")
        return alloc, alloc.case
    if n == 3:
        alloc = solve_three(normalized)
        return alloc, alloc.case
    if n == 4:
        alloc = solve_four(normalized)
        return alloc, alloc.case
    return solve_general(normalized)


def solve(instance: Instance, budget: int = DEFAULT_ITEM_BUDGET) -> tuple[Allocation, Union[ReductionTrace, str]]:
    """Compute an AMMS allocation at the guarantee for ``instance.n`` agents.

    Returns the allocation together with the general-n reduction trace, or a
    short tag naming the case taken for ``n <= 4``.
    """
    return solve_normalized(normalize(instance, budget))
