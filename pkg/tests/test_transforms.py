from fractions import Fraction

import pytest

from conftest import make_g1
from starflow.errors import PrecisionExceeded
from starflow.graph import Flow, build_graph, validate_flow
from starflow.oracle import brute_force_optimum
from starflow.transforms import (
    build_extended_social_graph,
    iteration_bound,
    scale_to_integral,
    split_flow,
    split_provider_capacity,
    unsplit_flow,
)


def test_split_fan_out():
    g = build_graph([1, 2, 3], [], [(1, 2, 1, 1), (1, 3, 2, 1)], {1: 2})
    split, mapping = split_provider_capacity(g)
    (m,) = mapping
    assert m.original == 1 and m.virtual_node == 4
    virt = split.edge_index[m.virtual_edge_id]
    assert (virt.provider, virt.requester, virt.capacity, virt.utility_per_unit, virt.is_virtual) == (1, 4, 2, 0, True)
    assert all(split.edge_index[k].provider == 4 for k in (0, 1))
    assert split.provider_caps == {}


def test_split_identity_without_caps(g1):
    split, mapping = split_provider_capacity(g1)
    assert split is g1 and mapping == []


def test_split_zero_cap_kills_optimum():
    g = make_g1(caps={1: 0})
    split, mapping = split_provider_capacity(g)
    assert split.edge_index[mapping[0].virtual_edge_id].capacity == 0
    assert brute_force_optimum(split) == 0
    assert brute_force_optimum(g) == 0


def test_split_flow_round_trip():
    g = make_g1(caps={1: 1})
    flow = Flow({0: 1, 1: 1}, {(1, 3): -1, (2, 4): 1})
    split, mapping = split_provider_capacity(g)
    lifted = split_flow(g, flow, mapping)
    assert validate_flow(split, lifted).ok
    assert unsplit_flow(lifted, mapping).same_as(flow)


def test_extended_graph_g1(g1):
    ext = build_extended_social_graph(g1)
    assert ext.imbalance == {1: -1, 2: 1, 3: 1, 4: -1}
    assert ext.P == 2
    s, t = ext.source, ext.sink
    assert sorted(ext.surplus_arcs) == [(s, 2, 1), (s, 3, 1)]
    assert sorted(ext.deficit_arcs) == [(1, t, 1), (4, t, 1)]


def test_extended_graph_no_requests():
    ext = build_extended_social_graph(build_graph([1, 2], [(1, 2, 1, 1)], []))
    assert ext.P == 0 and ext.surplus_arcs == () and ext.deficit_arcs == ()
    assert set(ext.imbalance.values()) == {0}


def test_scaling_example():
    g = build_graph([1, 2, 3], [], [(1, 2, Fraction(1, 2), Fraction(5, 4)), (2, 3, Fraction(3, 2), Fraction(5, 4))])
    scaled, info = scale_to_integral(g, "divisible", precision=2)
    assert info.K == 4
    assert [e.capacity for e in scaled.requests] == [2, 6]
    assert {e.utility_per_unit for e in scaled.requests} == {5}
    assert info.unscale_flow(6) == Fraction(3, 2)
    assert info.unscale_utility(5 * 2) == Fraction(5, 8)


def test_scaling_integer_identity(g1):
    scaled, info = scale_to_integral(g1)
    assert info.K == 1 and scaled == g1


def test_indivisible_floors():
    g = build_graph([1, 2], [(1, 2, Fraction(5, 2), 0)], [(2, 1, Fraction(29, 10), Fraction(1, 2)), (1, 2, Fraction(1, 2), 1)])
    scaled, info = scale_to_integral(g, "indivisible")
    assert info.K == 2
    assert [e.capacity for e in scaled.requests] == [2]  # the 0.5 edge floors to nothing
    assert scaled.requests[0].utility_per_unit == 1
    assert scaled.social[0].cap_ij == 2


def test_precision_enforced():
    g = build_graph([1, 2], [], [(1, 2, 1, Fraction(1, 1000))])
    with pytest.raises(PrecisionExceeded):
        scale_to_integral(g, precision=2)


def test_iteration_bounds():
    g = build_graph([1, 2], [], [(1, 2, Fraction(5, 2), Fraction(1, 2)), (2, 1, 1, 1)])
    _, info = scale_to_integral(g, "divisible")
    assert info.K == 2
    assert iteration_bound(info, 2) == 20  # 2 edges * 2.5 * 1 * K^2
    _, info = scale_to_integral(g, "indivisible")
    assert iteration_bound(info, 2) == 8  # 2 edges * floor(2.5) * 1 * K
