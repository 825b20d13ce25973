import pytest

from starflow.decomposition import (
    CycleFlow,
    aggregate,
    classify_cycle,
    decompose_circulation,
    format_cycle,
    is_closed,
    request_step,
    social_step,
    uses_existing_edges,
)
from starflow.errors import NotACirculation
from starflow.graph import Flow, build_graph
from starflow.solver import solve_max_utility


def test_g1_single_cycle(g1):
    sol = solve_max_utility(g1)
    (c,) = decompose_circulation(g1, sol.flow)
    assert c.value == 1
    assert [(s.kind, s.tail, s.head) for s in c.steps] == [("R", 1, 2), ("S", 2, 4), ("R", 4, 3), ("S", 3, 1)]
    assert classify_cycle(c) == "mixed"
    assert format_cycle(c) == "cycle value=1 class=mixed path=1-R->2-S->4-R->3-S->1"


def test_zero_flow(g1):
    assert decompose_circulation(g1, Flow()) == []


def test_two_disjoint_cycles():
    g = build_graph([1, 2, 3, 4], [(3, 4, 0, 1)], [(1, 2, 1, 1), (2, 1, 1, 1), (3, 4, 1, 1)])
    flow = Flow({0: 1, 1: 1, 2: 1}, {(3, 4): -1})
    cycles = decompose_circulation(g, flow)
    assert len(cycles) == 2
    assert aggregate(cycles).same_as(flow)
    assert sorted(classify_cycle(c) for c in cycles) == ["direct-reciprocity", "direct-social"]


def test_rejects_non_circulation(g1):
    with pytest.raises(NotACirculation):
        decompose_circulation(g1, Flow({0: 1}))


def test_classes(g2, g4):
    e12, e21 = g2.requests
    assert classify_cycle(CycleFlow((request_step(e12), request_step(e21)), 1)) == "direct-reciprocity"
    (e,) = g4.requests
    c = CycleFlow((request_step(e), social_step(2, 1)), 1)
    assert classify_cycle(c) == "direct-social"
    assert is_closed(c) and uses_existing_edges(g4, c)
    assert not uses_existing_edges(g4, CycleFlow((request_step(e), social_step(1, 2)), 1))
    three = build_graph([1, 2, 3], [], [(1, 2, 1, 1), (2, 3, 1, 1), (3, 1, 1, 1)])
    assert classify_cycle(CycleFlow(tuple(request_step(x) for x in three.requests), 1)) == "indirect-reciprocity"
    c = CycleFlow((request_step(e12), social_step(2, 3), social_step(3, 1)), 1)
    assert classify_cycle(c) == "indirect-social"


def test_opposite_social_directions_cancel():
    a = CycleFlow((social_step(1, 2), social_step(2, 1)), 1)
    assert aggregate([a]).same_as(Flow())
