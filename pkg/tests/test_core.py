from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from amms import (
    Allocation,
    AllocationError,
    Instance,
    Partition,
    alpha_for,
    format_rational,
    normalize,
    parse_rational,
)
from amms.core import bundle_cost
from amms.harness import tight_example

F = Fraction


@pytest.mark.parametrize("raw, want", [(3, F(3)), ("3/8", F(3, 8)), (" 6/4 ", F(3, 2)), (F(1, 3), F(1, 3)), ("7", F(7))])
def test_parse_rational(raw, want):
    assert parse_rational(raw) == want


@pytest.mark.parametrize("raw", ["0.5", 0.5, True, "1/0", "abc", None])
def test_parse_rational_rejects(raw):
    with pytest.raises((ValueError, TypeError, ZeroDivisionError)):
        parse_rational(raw)


@given(st.fractions())
def test_rational_round_trip(r):
    assert parse_rational(format_rational(r)) == r


def test_instance_validation():
    with pytest.raises(ValueError):
        Instance.from_rows([[1, 2], [3]])
    with pytest.raises(ValueError):
        Instance.from_rows([[1, -1]])
    with pytest.raises(ValueError):
        Instance.from_rows([])
    inst = Instance.from_rows([[], []])
    assert (inst.n, inst.m) == (2, 0)


def test_instance_json_round_trip():
    inst = tight_example()
    data = inst.to_json()
    assert data["costs"][0][0] == "3/8"
    assert Instance.from_json(data) == inst
    with pytest.raises(ValueError):
        Instance.from_json({**data, "n": 4})


def test_bundle_cost_examples():
    inst = tight_example()
    assert bundle_cost(inst, 2, {0, 1}) == 1
    assert bundle_cost(inst, 0, set()) == 0
    assert bundle_cost(inst, 0, {2, 3, 4}) == F(9, 8)
    with pytest.raises(IndexError):
        bundle_cost(inst, 3, {0})
    with pytest.raises(IndexError):
        bundle_cost(inst, 0, {8})


@given(st.lists(st.integers(0, 20), min_size=1, max_size=8), st.data())
def test_additivity(row, data):
    inst = Instance.from_rows([row])
    a = data.draw(st.sets(st.integers(0, len(row) - 1)))
    b = data.draw(st.sets(st.integers(0, len(row) - 1))) - a
    assert inst.cost(0, a | b) == inst.cost(0, a) + inst.cost(0, b)


def test_partition_invariants():
    p = Partition([{0, 1}, set(), {2}])
    assert len(p) == 3 and p.ground == {0, 1, 2}
    with pytest.raises(ValueError):
        Partition([{0, 1}, {1}])
    with pytest.raises(ValueError):
        Partition([{0}], ground={0, 1})
    inst = tight_example()
    assert sum(p.costs(inst, 0)) == inst.cost(0, p.ground)


def test_normalized_instance_invariants():
    norm = normalize(Instance.from_rows([[3, 6, 9, 1], [2, 2, 2, 2]]))
    for i in range(norm.n):
        assert all(c <= 1 for c in norm.row(i))
        assert norm.cost(i, norm.items) <= norm.n
        assert max(norm.witnesses[i].costs(norm, i)) == 1


def test_view_validity_and_shrink():
    norm = normalize(tight_example())
    view = norm.full_view()
    assert view.k == 3 and view.is_valid()
    smaller = view.shrink([2], {0, 1})
    assert smaller.agents == {0, 1} and smaller.items == frozenset(range(2, 8))
    # agent 0 would be left with 9/4 > 2
    assert not smaller.is_valid()
    assert view.shrink([2], {5, 6, 7}).is_valid()


def test_allocation_complete_and_json():
    alloc = Allocation(bundles=({0, 1}, {2}), alpha=F(9, 8), flexible_agent=1, ratios=(F(1), F(9, 8)))
    alloc.check_complete(3)
    with pytest.raises(AllocationError):
        alloc.check_complete(4)
    with pytest.raises(AllocationError):
        Allocation(bundles=({0, 1}, {1}), alpha=1).check_complete(2)
    data = alloc.to_json()
    assert data == {"alpha": "9/8", "flexible_agent": 1, "bundles": [[0, 1], [2]], "ratios": ["1", "9/8"]}
    assert Allocation.from_json(data) == alloc


@pytest.mark.parametrize("n, alpha", [(1, F(1)), (2, F(1)), (3, F(9, 8)), (4, F(4, 3)),
                                      (5, F(9, 5)), (6, F(49, 24)), (7, F(16, 7))])
def test_alpha_for(n, alpha):
    assert alpha_for(n) == alpha
