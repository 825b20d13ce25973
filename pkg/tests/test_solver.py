from fractions import Fraction

import pytest

from conftest import make_g1
from starflow.errors import CapacityExceeded, InvalidFlow
from starflow.graph import Flow, build_graph, validate_flow
from starflow.solver import (
    Cycle,
    ResidualArc,
    augment_along_cycle,
    build_residual,
    cycle_residual_capacity,
    find_positive_cycle,
    solve,
    solve_max_service,
    solve_max_utility,
    trace_lines,
)

G1_OPT = Flow({0: 1, 1: 1}, {(1, 3): -1, (2, 4): 1})


def arcs_of(res):
    return sorted((a.kind, a.tail, a.head, a.capacity, a.weight) for a in res.arcs)


def test_residual_g1_zero(g1):
    assert arcs_of(build_residual(g1, Flow())) == [
        ("request-forward", 1, 2, 1, 1),
        ("request-forward", 4, 3, 1, 1),
        ("social", 2, 4, 1, 0),
        ("social", 3, 1, 1, 0),
    ]


def test_residual_g1_optimal(g1):
    assert arcs_of(build_residual(g1, G1_OPT)) == [
        ("request-backward", 2, 1, 1, -1),
        ("request-backward", 3, 4, 1, -1),
        ("social", 1, 3, 1, 0),
        ("social", 4, 2, 1, 0),
    ]


def test_residual_saturated_edge():
    g = build_graph([1, 2], [], [(1, 2, 2, 1)])
    res = build_residual(g, Flow({0: 2}), check=False)
    assert [(a.kind, a.tail, a.head, a.capacity) for a in res.arcs] == [("request-backward", 2, 1, 2)]


def test_residual_rejects_invalid(g1):
    with pytest.raises(InvalidFlow):
        build_residual(g1, Flow({0: 1}))


def test_residual_sorted_by_tail(g1):
    tails = [a.tail for a in build_residual(g1, Flow()).arcs]
    assert tails == sorted(tails)


def test_find_cycle_g1(g1):
    cycle = find_positive_cycle(build_residual(g1, Flow()))
    assert cycle.nodes == [1, 2, 4, 3, 1]
    assert [a.kind for a in cycle.arcs] == ["request-forward", "social", "request-forward", "social"]
    assert cycle.weight == 2 and cycle.residual_capacity == 1


def test_no_cycle_at_optimum(g1):
    assert find_positive_cycle(build_residual(g1, G1_OPT)) is None


def test_no_cycle_single_edge():
    g = build_graph([1, 2], [], [(1, 2, 1, 1)])
    assert find_positive_cycle(build_residual(g, Flow())) is None


def test_zero_weight_cycle_ignored():
    g = build_graph([1, 2], [(1, 2, 1, 0)], [(2, 1, 1, 0)])
    assert find_positive_cycle(build_residual(g, Flow())) is None


def _arc(cap):
    return ResidualArc("social", 0, 0, cap, 0, (0, 1))


def test_cycle_residual_capacity():
    assert cycle_residual_capacity([_arc(3), _arc(1), _arc(2)]) == 1
    assert cycle_residual_capacity([_arc(2), _arc(2)]) == 2
    with pytest.raises(ValueError):
        cycle_residual_capacity([])


def test_augment_g1(g1):
    cycle = find_positive_cycle(build_residual(g1, Flow()))
    f = augment_along_cycle(Flow(), cycle, 1)
    assert f.same_as(G1_OPT)


def test_augment_and_reverse_cancels(g1):
    cycle = find_positive_cycle(build_residual(g1, Flow()))
    f = augment_along_cycle(Flow(), cycle, 1)
    back = augment_along_cycle(f, cycle.reverse_arcs(), 1)
    assert back.nonzero().same_as(Flow())


def test_augment_g2(g2):
    res = build_residual(g2, Flow())
    cycle = Cycle.of([res.find("request-forward", 1, 2)[0], res.find("request-forward", 2, 1)[0]])
    f = augment_along_cycle(Flow(), cycle, 1)
    assert validate_flow(g2, f).ok
    assert solve_max_utility(g2).utility == 3


def test_augment_over_capacity(g1):
    cycle = find_positive_cycle(build_residual(g1, Flow()))
    with pytest.raises(CapacityExceeded):
        augment_along_cycle(Flow(), cycle, 2)


def test_solve_g1(g1):
    sol = solve_max_utility(g1)
    assert (sol.utility, sol.total_service, sol.iterations) == (2, 2, 1)
    assert sol.flow.same_as(G1_OPT)
    assert sol.scaled_utilities == [0, 2]


def test_solve_g1_without_s24():
    sol = solve_max_utility(make_g1(s24=0))
    assert sol.utility == 0 and sol.iterations == 0


def test_solve_no_requests():
    sol = solve_max_utility(build_graph([1, 2], [(1, 2, 1, 1)], []))
    assert sol.utility == 0 and sol.iterations == 0 and sol.flow.same_as(Flow())


def test_solve_max_service(g1, g2):
    assert solve_max_service(g1).total_service == 2
    assert solve_max_service(g2).total_service == 2
    assert solve_max_service(build_graph([1], [], [])).total_service == 0


def test_service_and_utility_objectives_differ():
    # node 1 can serve either 2 (one unit worth 5) or 3 (two units worth 1 each)
    g = build_graph(
        [1, 2, 3],
        [(1, 2, 0, 1), (1, 3, 0, 2)],
        [(1, 2, 1, 5), (1, 3, 2, 1)],
        {1: 2},
    )
    assert solve(g, objective="utility").utility == 6
    s = solve(g, objective="service")
    assert s.total_service == 2


def test_provider_cap_respected():
    g = make_g1(caps={1: 0})
    sol = solve_max_utility(g)
    assert sol.utility == 0
    assert validate_flow(g, sol.flow).ok


def test_fractional_solve():
    g = build_graph([1, 2], [(1, 2, 0, Fraction(3, 4))], [(1, 2, Fraction(1, 2), Fraction(3, 2))])
    sol = solve_max_utility(g)
    assert sol.flow.request_flow == {0: Fraction(1, 2)}
    assert sol.utility == Fraction(3, 4)
    assert validate_flow(g, sol.flow).ok


def test_indivisible_solve():
    g = build_graph([1, 2], [(1, 2, 0, Fraction(5, 2))], [(1, 2, Fraction(5, 2), 1)])
    assert solve_max_utility(g, "divisible").total_service == Fraction(5, 2)
    assert solve_max_utility(g, "indivisible").total_service == 2


def test_trace_lines(g1):
    assert trace_lines(solve_max_utility(g1)) == ["cycle 1 nodes=1->2->4->3->1 weight=2 r_c=1"]


def test_unknown_objective(g1):
    with pytest.raises(ValueError):
        solve(g1, objective="speed")
