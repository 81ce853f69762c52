import pytest
from hypothesis import given, strategies as st

from gst12 import DisjointSet, Instance, MetricGraph, connection_cost, is_valid_solution, propify, solution_cost
from gst12.instance import norm_pair


@pytest.fixture
def g():
    return MetricGraph(4, frozenset({(0, 1)}))


def test_connection_cost(g):
    assert connection_cost(g, 0, 1) == 1
    assert connection_cost(g, 1, 0) == 1
    assert connection_cost(g, 0, 2) == 2
    with pytest.raises(ValueError):
        connection_cost(g, 0, 0)
    with pytest.raises(ValueError):
        connection_cost(g, 0, 9)


def test_solution_cost(g):
    assert solution_cost(g, []) == 0
    assert solution_cost(g, [(0, 1), (0, 2), (2, 3)]) == 5
    assert solution_cost(g, [(1, 0)]) == 1


@pytest.mark.parametrize("family, expected", [
    ([[1, 2], [2, 3]], [{1, 2, 3}]),
    ([[1, 2], [3, 4]], [{1, 2}, {3, 4}]),
    ([[5]], []),
    ([[1, 2], [3, 4], [2, 3]], [{1, 2, 3, 4}]),
    ([], []),
])
def test_propify(family, expected):
    assert [set(x) for x in propify(family)] == expected


@given(st.lists(st.lists(st.integers(0, 9), max_size=5), max_size=6))
def test_propify_is_proper_and_idempotent(family):
    out = propify(family)
    assert propify(out) == out
    assert all(len(a) >= 2 for a in out)
    assert all(not (a & b) for i, a in enumerate(out) for b in out[i + 1:])
    covered = set().union(*out) if out else set()
    assert covered == {x for grp in family if len(set(grp)) >= 2 for x in grp}


def test_is_valid_solution():
    inst = Instance.build(4, [(0, 1)], [[0, 1]])
    assert is_valid_solution(inst, [(0, 1)])
    assert not is_valid_solution(inst, [])
    two = Instance.build(4, [], [[0, 1], [2, 3]])
    assert not is_valid_solution(two, [(0, 1)])
    assert is_valid_solution(two, [(0, 1), (2, 3)])


def test_graph_validation():
    with pytest.raises(ValueError):
        MetricGraph(3, frozenset({(0, 3)}))
    with pytest.raises(ValueError):
        MetricGraph(3, frozenset({(1, 1)}))
    g = Instance.build(3, [(2, 0)], []).graph
    assert g.edges == frozenset({(0, 2)})
    assert g.neighbors(2) == frozenset({0})


def test_instance_rejects_out_of_range_terminal():
    with pytest.raises(ValueError):
        Instance.build(3, [], [[0, 5]])


def test_instance_equality_after_propify():
    a = Instance.build(4, [(0, 1)], [[2, 3], [0, 1], [3]])
    b = Instance.build(4, [(1, 0)], [[1, 0], [3, 2]])
    assert a == b
    assert a.terminals == frozenset(range(4))


def test_norm_pair():
    assert norm_pair(3, 1) == (1, 3)
    with pytest.raises(ValueError):
        norm_pair(2, 2)


def test_disjoint_set_keeps_smallest_root():
    ds = DisjointSet(5)
    ds.union(4, 2)
    ds.union(2, 3)
    assert ds.find(4) == ds.find(3) == 2
    assert ds.classes() == {0: [0], 1: [1], 2: [2, 3, 4]}
