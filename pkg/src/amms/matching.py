"""MMS-feasibility graphs, saturating matchings and maximum Hall violators."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .core import InvariantError, OracleBudgetError, Partition

VIOLATOR_BUDGET = 20


@dataclass(frozen=True)
class FeasibilityGraph:
    """Bipartite graph between agents (left) and bundle indices (right).

    An edge ``(i, j)`` means bundle ``j`` is MMS-feasible for agent ``i``.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(sorted(self.left)))
        object.__setattr__(self, "right", tuple(sorted(self.right)))
        edges = frozenset((int(a), int(b)) for a, b in self.edges)
        lset, rset = set(self.left), set(self.right)
        for a, b in edges:
            if a not in lset or b not in rset:
                raise ValueError(f"edge {(a, b)} has an endpoint outside the graph")
        object.__setattr__(self, "edges", edges)

    def neighbors(self, agent: int) -> list[int]:
        return [j for j in self.right if (agent, j) in self.edges]

    def neighborhood(self, agents: Iterable[int]) -> frozenset:
        agents = set(agents)
        return frozenset(j for a, j in self.edges if a in agents)

    def restrict(self, left: Iterable[int], right: Iterable[int]) -> "FeasibilityGraph":
        left, right = tuple(left), tuple(right)
        lset, rset = set(left), set(right)
        return FeasibilityGraph(
            left, right, frozenset((a, b) for a, b in self.edges if a in lset and b in rset)
        )

    def to_json(self) -> dict:
        return {
            "left": list(self.left),
            "right": list(self.right),
            "edges": sorted([a, b] for a, b in self.edges),
        }


@dataclass(frozen=True)
class Violator:
    """A set of agents with fewer feasible bundles than members."""

    agents: frozenset
    neighborhood: frozenset


def build_graph(
    view,
    partition: Partition,
    excluded_agent: Optional[int] = None,
    excluded_bundle: Optional[int] = None,
) -> FeasibilityGraph:
    """Feasibility graph of ``view``'s agents against ``partition``'s bundles.

    ``excluded_agent`` / ``excluded_bundle`` drop one vertex on either side.
    """
    if not partition.ground <= view.items:
        raise ValueError("partition covers items outside the view")
    left = tuple(sorted(a for a in view.agents if a != excluded_agent))
    right = tuple(j for j in range(len(partition)) if j != excluded_bundle)
    edges = frozenset(
        (a, j) for a in left for j in right if view.cost(a, partition[j]) <= 1
    )
    return FeasibilityGraph(left, right, edges)


def _max_matching(graph: FeasibilityGraph) -> dict[int, int]:
    """Kuhn's augmenting paths, agents and bundles tried in ascending order."""
    adj = {a: graph.neighbors(a) for a in graph.left}
    owner: dict[int, int] = {}

    def augment(a: int, seen: set) -> bool:
        # a free bundle first, so easy cases come out as the identity
        for j in adj[a]:
            if j not in owner and j not in seen:
                seen.add(j)
                owner[j] = a
                return True
        for j in adj[a]:
            if j in seen:
                continue
            seen.add(j)
            if j not in owner or augment(owner[j], seen):
                owner[j] = a
                return True
        return False

    for a in graph.left:
        augment(a, set())
    return {a: j for j, a in owner.items()}


def perfect_matching(graph: FeasibilityGraph) -> Optional[dict[int, int]]:
    """A matching saturating every agent, or ``None`` if there is none."""
    matching = _max_matching(graph)
    if len(matching) < len(graph.left):
        return None
    return dict(sorted(matching.items()))


def max_violator(graph: FeasibilityGraph) -> Optional[Violator]:
    """The largest agent set ``S`` with ``|S| > |L(S)|``; ``None`` iff a
    saturating matching exists.

    Subsets are scanned from largest to smallest, in lexicographic order within
    a size, so the answer is deterministic.
    """
    if perfect_matching(graph) is not None:
        return None
    left = graph.left
    if len(left) > VIOLATOR_BUDGET:
        raise OracleBudgetError(
            f"violator search budget exceeded: {len(left)} agents > {VIOLATOR_BUDGET}"
        )
    pos = {j: b for b, j in enumerate(graph.right)}
    masks = {a: 0 for a in left}
    for a, j in graph.edges:
        masks[a] |= 1 << pos[j]
    for size in range(len(left), 0, -1):
        for subset in combinations(left, size):
            nb = 0
            for a in subset:
                nb |= masks[a]
            if bin(nb).count("1") < size:
                return Violator(frozenset(subset), graph.neighborhood(subset))
    raise InvariantError("no saturating matching but no Hall violator either")


def complement_matching(graph: FeasibilityGraph, violator: Violator) -> dict[int, int]:
    """Match every agent outside ``violator`` to a bundle outside its neighborhood."""
    rest_left = [a for a in graph.left if a not in violator.agents]
    rest_right = [j for j in graph.right if j not in violator.neighborhood]
    sub = graph.restrict(rest_left, rest_right)
    matching = perfect_matching(sub)
    if matching is None:
        raise InvariantError(
            f"agents {rest_left} cannot be matched outside L(S*) = {sorted(violator.neighborhood)}"
        )
    return matching
