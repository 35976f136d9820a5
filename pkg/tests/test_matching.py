import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from amms import FeasibilityGraph, InvariantError, build_graph, max_violator, normalize, perfect_matching
from amms.harness import tight_example, hall_example
from amms.matching import Violator, complement_matching


def graph_of(n_left, n_right, edges):
    return FeasibilityGraph(range(n_left), range(n_right), frozenset(edges))


def brute_has_saturating(graph):
    right = list(graph.right)
    for image in permutations(right, len(graph.left)):
        if all((a, j) in graph.edges for a, j in zip(graph.left, image)):
            return True
    return False


def brute_max_violator_size(graph):
    best = 0
    for size in range(1, len(graph.left) + 1):
        for s in combinations(graph.left, size):
            if len(graph.neighborhood(s)) < size:
                best = size
    return best


random_graphs = st.integers(1, 5).flatmap(
    lambda n: st.integers(1, 5).flatmap(
        lambda r: st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, r - 1))).map(
            lambda e: graph_of(n, r, e))))


def test_tight_example_graph():
    norm = normalize(tight_example())
    graph = build_graph(norm.full_view(), norm.witnesses[2])
    assert graph.neighbors(2) == [0, 1, 2]
    assert graph.neighbors(0) == [0] and graph.neighbors(1) == [0]
    assert graph.neighborhood([0, 1]) == {0}
    assert perfect_matching(graph) is None


def test_zero_costs_give_complete_graph(make_view):
    view = make_view([[0] * 4] * 3)
    from amms import Partition
    graph = build_graph(view, Partition([{0}, {1, 2}, {3}]))
    assert len(graph.edges) == 9


def test_exclusions(make_view):
    from amms import Partition
    view = make_view([[0] * 3] * 3)
    graph = build_graph(view, Partition([{0}, {1}, {2}]), excluded_agent=1, excluded_bundle=2)
    assert graph.left == (0, 2) and graph.right == (0, 1)
    assert all(a != 1 and j != 2 for a, j in graph.edges)


def test_hall_example_as_drawn():
    inst, P = hall_example()
    graph = build_graph(normalize(inst).full_view(), P)
    assert graph.edges == {(0, 0), (1, 1), (2, 1), (3, 1), (3, 3)}
    # all four agents see only three bundles, so the whole side is the violator
    v = max_violator(graph)
    assert v.agents == {0, 1, 2, 3} and v.neighborhood == {0, 1, 3}
    assert complement_matching(graph, v) == {}
    assert perfect_matching(graph.restrict([3], [2, 3])) == {3: 3}


def test_hall_example_with_extra_edge():
    inst, P = hall_example(extra_edge=True)
    graph = build_graph(normalize(inst).full_view(), P)
    v = max_violator(graph)
    assert v.agents == {0, 1, 2} and v.neighborhood == {0, 1}
    m = complement_matching(graph, v)
    assert m == {3: 2}
    assert not set(m.values()) & v.neighborhood


def test_complete_graph_matches():
    graph = graph_of(4, 4, [(a, j) for a in range(4) for j in range(4)])
    assert perfect_matching(graph) == {0: 0, 1: 1, 2: 2, 3: 3}
    assert max_violator(graph) is None


def test_single_shared_bundle():
    graph = graph_of(4, 4, [(a, 0) for a in range(4)])
    v = max_violator(graph)
    assert v.agents == {0, 1, 2, 3} and v.neighborhood == {0}


def test_complement_matching_signals_bad_violator():
    graph = graph_of(3, 3, [(0, 0), (1, 0), (2, 0)])
    with pytest.raises(InvariantError):
        complement_matching(graph, Violator(frozenset({0, 1}), frozenset({0})))


@given(random_graphs)
def test_matching_against_brute_force(graph):
    m = perfect_matching(graph)
    assert (m is not None) == brute_has_saturating(graph)
    if m is not None:
        assert len(set(m.values())) == len(m) == len(graph.left)
        assert all(e in graph.edges for e in m.items())


@given(random_graphs)
def test_violator_is_maximum(graph):
    v = max_violator(graph)
    size = brute_max_violator_size(graph)
    if v is None:
        assert size == 0
        return
    assert len(v.agents) == size
    assert len(v.neighborhood) < len(v.agents)
    assert v.neighborhood == graph.neighborhood(v.agents)
    m = complement_matching(graph, v)
    assert set(m) == set(graph.left) - v.agents
    assert not set(m.values()) & v.neighborhood


def test_maximality_certificate_twelve_agents():
    rng = random.Random(12)
    for _ in range(20):
        edges = {(a, j) for a in range(12) for j in range(12) if rng.random() < 0.12}
        graph = graph_of(12, 12, edges)
        v = max_violator(graph)
        if v is None:
            continue
        rest = [a for a in graph.left if a not in v.agents]
        for size in range(1, len(rest) + 1):
            for extra in combinations(rest, size):
                bigger = v.agents | set(extra)
                assert len(graph.neighborhood(bigger)) >= len(bigger)
