from fractions import Fraction

import pytest
from hypothesis import settings

from amms import Instance, NormalizedInstance, Partition, ReducedInstanceView

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def _normalized(rows, witnesses=None):
    rows = [[Fraction(c) for c in row] for row in rows]
    n, m = len(rows), len(rows[0])
    if witnesses is None:
        witnesses = [[range(m)] + [()] * (n - 1)] * n
    return NormalizedInstance(
        base=Instance.from_rows(rows),
        mms=(Fraction(1),) * n,
        witnesses=tuple(Partition([frozenset(b) for b in w]) for w in witnesses),
        normalized_costs=tuple(tuple(r) for r in rows),
    )


@pytest.fixture
def make_view():
    """Build a view straight from already-normalized cost rows."""

    def build(rows, agents=None, items=None, witnesses=None):
        norm = _normalized(rows, witnesses)
        agents = range(norm.n) if agents is None else agents
        items = norm.items if items is None else items
        return ReducedInstanceView(norm, frozenset(agents), frozenset(items))

    return build
