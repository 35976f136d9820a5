"""Exact-arithmetic domain model: instances, item sets, partitions, allocations.

Every cost is a :class:`fractions.Fraction`. Item sets are ``frozenset`` of item
indices; the MMS oracle and the matching code switch to integer bitmasks
internally where that pays off.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Rational = Fraction
ItemSet = frozenset


class AmmsError(Exception):
    """Base class for all errors raised by this package."""


class OracleBudgetError(AmmsError):
    """An exact search was asked to go beyond its configured size budget."""


class DegenerateInstanceError(AmmsError):
    """The instance cannot be normalized (zero MMS with positive cost)."""


class InvariantError(AmmsError):
    """A bound guaranteed by the underlying theory failed: an implementation bug."""


class AllocationError(AmmsError):
    """An allocation does not assign every item to exactly one agent."""


def parse_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Parse an int, a ``"p/q"`` string or an integer string into a Fraction.

    >>> parse_rational("3/8")
    Fraction(3, 8)
    >>> parse_rational(5)
    Fraction(5, 1)
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not costs")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"decimal strings are not accepted: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot parse {type(value).__name__} as a rational")


def format_rational(value: Fraction) -> str:
    """Render a Fraction as ``"p/q"`` (or ``"p"`` when integral)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _check_items(items: Iterable[int], m: int) -> None:
    for e in items:
        if not 0 <= e < m:
            raise IndexError(f"item {e} out of range for m={m}")


def _check_agent(agent: int, n: int) -> None:
    if not 0 <= agent < n:
        raise IndexError(f"agent {agent} out of range for n={n}")


def _row_cost(row: Sequence[Fraction], bundle: Iterable[int]) -> Fraction:
    return sum((row[e] for e in bundle), Fraction(0))


@dataclass(frozen=True)
class Instance:
    """Agents ``0..n-1``, items ``0..m-1`` and an ``n x m`` matrix of costs."""

    costs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(parse_rational(c) for c in row) for row in self.costs)
        if not rows:
            raise ValueError("an instance needs at least one agent")
        m = len(rows[0])
        if any(len(row) != m for row in rows):
            raise ValueError("cost matrix rows have different lengths")
        if any(c < 0 for row in rows for c in row):
            raise ValueError("costs must be nonnegative")
        object.__setattr__(self, "costs", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Union[int, str, Fraction]]]) -> "Instance":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.costs)

    @property
    def m(self) -> int:
        return len(self.costs[0])

    @property
    def items(self) -> ItemSet:
        return frozenset(range(self.m))

    def row(self, agent: int) -> tuple[Fraction, ...]:
        _check_agent(agent, self.n)
        return self.costs[agent]

    def cost(self, agent: int, bundle: Iterable[int]) -> Fraction:
        bundle = tuple(bundle)
        _check_items(bundle, self.m)
        return _row_cost(self.row(agent), bundle)

    def scaled(self, factors: Sequence[Fraction]) -> "Instance":
        """Multiply each agent's row by its own positive factor."""
        return Instance(tuple(tuple(c * f for c in row) for row, f in zip(self.costs, factors)))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "costs": [[format_rational(c) for c in row] for row in self.costs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Instance":
        inst = cls.from_rows(data["costs"])
        if "n" in data and data["n"] != inst.n:
            raise ValueError(f"declared n={data['n']} but got {inst.n} cost rows")
        if "m" in data and data["m"] != inst.m:
            raise ValueError(f"declared m={data['m']} but rows have {inst.m} items")
        return inst


@dataclass(frozen=True)
class Partition:
    """An ordered list of disjoint bundles whose union is ``ground``.

    Empty bundles are allowed.
    """

    bundles: tuple[ItemSet, ...]
    ground: ItemSet = None

    def __post_init__(self):
        bundles = tuple(frozenset(b) for b in self.bundles)
        union: set[int] = set()
        total = 0
        for b in bundles:
            union |= b
            total += len(b)
        if total != len(union):
            raise ValueError("partition bundles overlap")
        ground = frozenset(union) if self.ground is None else frozenset(self.ground)
        if ground != union:
            raise ValueError("partition bundles do not cover the ground set exactly")
        object.__setattr__(self, "bundles", bundles)
        object.__setattr__(self, "ground", ground)

    def __len__(self) -> int:
        return len(self.bundles)

    def __iter__(self):
        return iter(self.bundles)

    def __getitem__(self, j: int) -> ItemSet:
        return self.bundles[j]

    def costs(self, source, agent: int) -> list[Fraction]:
        return [source.cost(agent, b) for b in self.bundles]

    def to_json(self) -> list[list[int]]:
        return [sorted(b) for b in self.bundles]


@dataclass(frozen=True)
class NormalizedInstance:
    """An instance rescaled so that every agent's MMS value is 1.

    ``witnesses[i]`` is agent ``i``'s MMS partition of all items into ``n``
    bundles. Agents with MMS 0 have only zero costs; their normalized rows are
    all zero.
    """

    base: Instance
    mms: tuple[Fraction, ...]
    witnesses: tuple[Partition, ...]
    normalized_costs: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def items(self) -> ItemSet:
        return self.base.items

    def row(self, agent: int) -> tuple[Fraction, ...]:
        _check_agent(agent, self.n)
        return self.normalized_costs[agent]

    def cost(self, agent: int, bundle: Iterable[int]) -> Fraction:
        bundle = tuple(bundle)
        _check_items(bundle, self.m)
        return _row_cost(self.row(agent), bundle)

    def full_view(self) -> "ReducedInstanceView":
        return ReducedInstanceView(self, frozenset(range(self.n)), self.items)


@dataclass(frozen=True)
class ReducedInstanceView:
    """The agents and items still unallocated, priced with normalized costs."""

    normalized: NormalizedInstance
    agents: frozenset
    items: ItemSet

    def __post_init__(self):
        object.__setattr__(self, "agents", frozenset(self.agents))
        object.__setattr__(self, "items", frozenset(self.items))
        for a in self.agents:
            _check_agent(a, self.normalized.n)
        _check_items(self.items, self.normalized.m)

    @property
    def k(self) -> int:
        return len(self.agents)

    def row(self, agent: int) -> tuple[Fraction, ...]:
        return self.normalized.row(agent)

    def cost(self, agent: int, bundle: Iterable[int]) -> Fraction:
        return self.normalized.cost(agent, bundle)

    def is_valid(self) -> bool:
        """Every remaining agent's cost for the remaining items is at most ``k``."""
        return all(self.cost(i, self.items) <= self.k for i in self.agents)

    def shrink(self, agents: Iterable[int], items: Iterable[int]) -> "ReducedInstanceView":
        """Drop the given agents and items."""
        return ReducedInstanceView(
            self.normalized, self.agents - frozenset(agents), self.items - frozenset(items)
        )


@dataclass(frozen=True)
class Allocation:
    """One bundle per agent, with the guarantee the solver claims for it.

    ``ratios[i]`` is agent ``i``'s cost divided by her MMS value (0 when both
    are 0). Every agent other than ``flexible_agent`` has ratio at most 1; the
    flexible agent has ratio at most ``alpha``.
    """

    bundles: tuple[ItemSet, ...]
    alpha: Fraction
    flexible_agent: Optional[int] = None
    ratios: tuple[Fraction, ...] = ()
    case: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bundles", tuple(frozenset(b) for b in self.bundles))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "ratios", tuple(Fraction(r) for r in self.ratios))

    @property
    def n(self) -> int:
        return len(self.bundles)

    def check_complete(self, m: int) -> None:
        """Raise :class:`AllocationError` unless bundles partition ``0..m-1``."""
        seen: set[int] = set()
        for agent, bundle in enumerate(self.bundles):
            for e in bundle:
                if not 0 <= e < m:
                    raise AllocationError(f"agent {agent} holds unknown item {e}")
                if e in seen:
                    raise AllocationError(f"item {e} is allocated twice")
                seen.add(e)
        missing = set(range(m)) - seen
        if missing:
            raise AllocationError(f"items {sorted(missing)} are not allocated")

    def to_json(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "flexible_agent": self.flexible_agent,
            "bundles": [sorted(b) for b in self.bundles],
            "ratios": [format_rational(r) for r in self.ratios],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Allocation":
        return cls(
            bundles=tuple(frozenset(b) for b in data["bundles"]),
            alpha=parse_rational(data.get("alpha", 1)),
            flexible_agent=data.get("flexible_agent"),
            ratios=tuple(parse_rational(r) for r in data.get("ratios", ())),
        )


def bundle_cost(source, agent: int, bundle: Iterable[int]) -> Fraction:
    """Exact cost of ``bundle`` for ``agent``.

    ``source`` is an :class:`Instance` (raw costs) or a normalized instance or
    view (normalized costs).
    """
    return source.cost(agent, bundle)


def alpha_for(n: int) -> Fraction:
    """Guarantee for the flexible agent: 1, 1, 9/8, 4/3, then (n+1)^2/4n."""
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 2:
        return Fraction(1)
    if n == 3:
        return Fraction(9, 8)
    if n == 4:
        return Fraction(4, 3)
    return Fraction((n + 1) ** 2, 4 * n)
