import random
from fractions import Fraction

import pytest

from amms import (
    Allocation,
    AllocationError,
    Instance,
    OracleBudgetError,
    Partition,
    alpha_for,
    brute_force_best_alpha,
    naive_mms,
    solve,
    verify_allocation,
)
from amms.harness import tight_example, gen_random
from amms.verify import verify_partition_shape

F = Fraction


def definitional_check(instance, bundles, alpha):
    """Independent re-check straight from the definition, no oracle code shared."""
    n = instance.n
    shares = [naive_mms(instance.costs[i], range(instance.m), n) for i in range(n)]
    ok_agents = [i for i in range(n) if sum(instance.costs[i][e] for e in bundles[i]) <= shares[i]]
    if len(ok_agents) == n:
        return True
    if len(ok_agents) < n - 1:
        return False
    (other,) = set(range(n)) - set(ok_agents)
    return sum(instance.costs[other][e] for e in bundles[other]) <= alpha * shares[other]


def test_tight_example_report():
    inst = tight_example()
    alloc, _ = solve(inst)
    report = verify_allocation(inst, alloc, F(9, 8))
    assert report.passed and report.ratios == (F(9, 8), F(3, 4), F(1))
    assert report.mms == (1, 1, 1) and report.n_within_mms == 2
    assert report.to_json()["ratios"] == ["9/8", "3/4", "1"]
    assert not verify_allocation(inst, alloc, 1).passed


def test_everything_to_one_agent_fails():
    inst = Instance.from_rows([[1, 1], [1, 1]])
    report = verify_allocation(inst, Allocation(({0, 1}, set()), alpha=1), 1)
    assert not report.passed and report.ratios == (2, 0)


def test_two_agents_over_fails():
    inst = Instance.from_rows([[1, 1, 1, 1, 1, 1]] * 3)
    alloc = Allocation(({0, 1, 2}, {3, 4, 5}, set()), alpha=F(9, 8))
    report = verify_allocation(inst, alloc, F(9, 8))
    assert not report.passed and "exceed" in report.reason


def test_incomplete_allocation_rejected():
    inst = Instance.from_rows([[1, 1], [1, 1]])
    with pytest.raises(AllocationError):
        verify_allocation(inst, Allocation(({0}, set()), alpha=1), 1)
    with pytest.raises(AllocationError):
        verify_allocation(inst, Allocation(({0}, {1}, set()), alpha=1), 1)


def test_agrees_with_definition_on_random_allocations():
    rng = random.Random(3)
    for _ in range(150):
        n, m = rng.randint(2, 3), rng.randint(1, 6)
        inst = Instance.from_rows([[rng.randint(0, 6) for _ in range(m)] for _ in range(n)])
        owners = [rng.randrange(n) for _ in range(m)]
        bundles = [frozenset(e for e in range(m) if owners[e] == i) for i in range(n)]
        alpha = rng.choice([F(1), F(9, 8), F(4, 3)])
        report = verify_allocation(inst, Allocation(tuple(bundles), alpha=alpha), alpha)
        assert report.passed == definitional_check(inst, bundles, alpha)


def test_partition_shape(make_view):
    view = make_view([[0, 0, 0]])
    assert verify_partition_shape(view, Partition([{0}, {1, 2}]), 0, 1)
    view = make_view([[F(3, 4)] * 4])
    assert not verify_partition_shape(view, Partition([{0, 1}, {2, 3}]), 0, 2)
    assert verify_partition_shape(view, Partition([{0, 1}, {2}, {3}]), 0, F(3, 2))
    assert not verify_partition_shape(view, Partition([{0, 1}, {2}, {3}]), 0, F(4, 3))


def test_best_alpha_tight_example():
    assert brute_force_best_alpha(tight_example()) <= F(9, 8)


@pytest.mark.parametrize("seed", range(10))
def test_best_alpha_two_agents(seed):
    assert brute_force_best_alpha(gen_random(2, 6, "uniform", seed)) == 1


def test_best_alpha_below_solver():
    for s in range(25):
        inst = gen_random(3, 3 + s % 5, ("uniform", "adversarial")[s % 2], s)
        alloc, _ = solve(inst)
        achieved = max(alloc.ratios)
        assert brute_force_best_alpha(inst) <= max(F(1), achieved)


def test_best_alpha_budget():
    with pytest.raises(OracleBudgetError):
        brute_force_best_alpha(gen_random(3, 20), budget=1000)
