import random
from fractions import Fraction

import pytest

from amms import Instance, Partition, alpha_for, normalize, solve, verify_allocation
from amms.harness import constructed_instances, tight_example, gen_random
from amms.matching import build_graph
from amms.solvers import (
    AtomicBundleMatrix,
    ReductionTrace,
    four_thirds_three_agents,
    solve_four,
    solve_general,
    solve_three,
    valid_reduction,
)

F = Fraction


def pairs(blocks):
    return Partition([frozenset({2 * j, 2 * j + 1}) for j in range(blocks)])


def test_one_agent_takes_everything():
    alloc, case = solve(Instance.from_rows([[3, 4, 0]]))
    assert case == "single" and alloc.bundles == (frozenset({0, 1, 2}),) and alloc.ratios == (1,)


def test_two_symmetric_agents():
    alloc, _ = solve(Instance.from_rows([[1, 1], [1, 1]]))
    assert sorted(len(b) for b in alloc.bundles) == [1, 1]
    assert max(alloc.ratios) <= 1


def test_tight_example_allocation():
    alloc, case = solve(tight_example())
    assert case == "direct"
    assert alloc.bundles[2] == {5, 6, 7}
    assert alloc.ratios == (F(9, 8), F(3, 4), F(1))
    assert alloc.flexible_agent == 0


def test_zero_items_four_agents():
    alloc, _ = solve(gen_random(4, 0))
    assert alloc.bundles == (frozenset(),) * 4 and alloc.ratios == (0, 0, 0, 0)


@pytest.mark.parametrize("name, inst", sorted(constructed_instances().items()))
def test_constructed_case_reached(name, inst):
    alloc, case = solve(inst)
    expected = name.split("/")[1]
    if expected == "s3-l1-beta-boundary":
        expected = "s3-l1-beta-low"
    assert case == expected
    assert verify_allocation(inst, alloc, alpha_for(inst.n)).passed


def test_beta_boundary_is_exactly_four_fifths():
    inst = constructed_instances()["four/s3-l1-beta-boundary"]
    norm = normalize(inst)
    assert norm.cost(0, range(4)) == F(4, 5)


def test_s2_split_goes_to_the_violator():
    inst = constructed_instances()["four/s2"]
    alloc, _ = solve(inst)
    assert alloc.ratios[2] <= 1 and alloc.ratios[3] <= 1
    assert alloc.flexible_agent in (0, 1)


def test_wrong_agent_count_rejected():
    norm = normalize(tight_example())
    with pytest.raises(ValueError):
        solve_four(norm)
    with pytest.raises(ValueError):
        solve_general(norm)
    with pytest.raises(ValueError):
        solve_three(normalize(Instance.from_rows([[1]] * 4)))


def test_four_thirds_matching_branch(make_view):
    rows = [[F(1, 2)] * 6,
            [1, 1, F(1, 2), F(1, 2), 1, 1],
            [1, 1, 1, 1, F(1, 2), F(1, 2)]]
    view = make_view(rows)
    assignment, flexible = four_thirds_three_agents(view, pairs(3), 0)
    assert assignment == {0: {0, 1}, 1: {2, 3}, 2: {4, 5}} and flexible == 0


def test_four_thirds_pick_and_split(make_view):
    other = [F(1, 4), F(1, 4), F(3, 5), F(3, 5), F(3, 5), F(3, 5)]
    view = make_view([[F(1, 2)] * 6, other, other])
    assignment, flexible = four_thirds_three_agents(view, pairs(3), 0)
    assert assignment[0] == {2, 3} and flexible == 1
    assert view.cost(1, assignment[1]) == F(17, 20)
    assert view.cost(2, assignment[2]) <= 1


def test_four_thirds_needs_three_agents(make_view):
    view = make_view([[0, 0]] * 2)
    with pytest.raises(ValueError):
        four_thirds_three_agents(view, Partition([{0}, {1}, set()]), 0)


def test_atomic_matrix_partitions_items():
    inst = constructed_instances()["four/s3-l1-beta-high"]
    norm = normalize(inst)
    atoms = AtomicBundleMatrix.of(norm.witnesses[0], norm.witnesses[3])
    cells = [c for row in atoms.cells for c in row]
    assert sum(len(c) for c in cells) == inst.m
    assert frozenset().union(*cells) == inst.items
    for j in range(4):
        assert frozenset().union(*atoms.column(j)) == norm.witnesses[3][j]
    with pytest.raises(ValueError):
        AtomicBundleMatrix.of(norm.witnesses[0], pairs(4))


def reduction_view(make_view, outsiders_like_all):
    liked = [F(1, 4)] * 2 + [F(3, 5)] * 6 + [F(1, 4)] * 2
    half = [F(1, 2)] * 10
    rows = [half, liked, liked, half if outsiders_like_all else liked, half if outsiders_like_all else liked]
    view = make_view(rows)
    P = pairs(5)
    graph = build_graph(view, P, excluded_agent=0, excluded_bundle=4)
    return view, P, graph


def test_valid_reduction_matches_outsiders(make_view):
    view, P, graph = reduction_view(make_view, True)
    red = valid_reduction(view, graph, 0, P)
    assert red.violator.agents == {1, 2} and red.violator.neighborhood == {0}
    assert red.matching == {3: 1, 4: 2}
    assert red.assignments[0] == P[3]
    assert red.view.agents == {1, 2}
    assert red.view.items == P[0] | P[4]
    assert red.view.is_valid()


def test_valid_reduction_only_pivot(make_view):
    view, P, graph = reduction_view(make_view, False)
    red = valid_reduction(view, graph, 0, P)
    assert red.matching == {} and set(red.assignments) == {0}
    assert red.assignments[0] == P[1]
    assert red.view.agents == {1, 2, 3, 4}


def test_valid_reduction_needs_a_deficient_graph(make_view):
    view = make_view([[0] * 4] * 3)
    P = Partition([{0}, {1}, {2}, {3}])
    graph = build_graph(view, P, excluded_agent=0, excluded_bundle=3)
    with pytest.raises(ValueError):
        valid_reduction(view, graph, 0, P)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_general_trace_is_valid(n):
    rng = random.Random(n)
    rounds = set()
    for s in range(25):
        inst = Instance.from_rows([[rng.randint(1, 9) for _ in range(2 * n)] for _ in range(n)])
        alloc, trace = solve(inst)
        assert isinstance(trace, ReductionTrace) and 1 <= len(trace.steps) <= n
        norm = normalize(inst)
        for step in trace.steps[:-1]:
            assert len(step.survivors) < len(step.agents)
            for i in step.survivors:
                assert norm.cost(i, step.remaining_items) <= len(step.survivors)
            for a, bundle in step.assigned.items():
                assert norm.cost(a, bundle) <= 1
        assert alloc.flexible_agent == trace.steps[-1].pivot
        rounds.add(len(trace.steps))
    assert max(rounds) > 1


@pytest.mark.parametrize("n", [3, 4, 5])
def test_solver_is_deterministic(n):
    inst = gen_random(n, 9, "adversarial", 11)
    a, _ = solve(inst)
    b, _ = solve(Instance.from_json(inst.to_json()))
    assert a == b and a.to_json() == b.to_json()


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_random_instances_verify(n):
    for s in range(15):
        model = ("uniform", "rational", "adversarial")[s % 3]
        inst = gen_random(n, 3 + s % 7, model, s)
        alloc, _ = solve(inst)
        report = verify_allocation(inst, alloc, alpha_for(n))
        assert report.passed, report.reason
        assert report.n_within_mms >= n - 1
