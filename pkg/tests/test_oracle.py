import pytest

from conftest import make_g1
from starflow.errors import TooLarge
from starflow.graph import build_graph
from starflow.oracle import SmallInstanceLimits, brute_force_feasible, brute_force_optimum


def test_g1(g1):
    assert brute_force_optimum(g1) == 2
    assert brute_force_feasible(g1)


def test_g1_without_s24():
    g = make_g1(s24=0)
    assert brute_force_optimum(g) == 0
    assert not brute_force_feasible(g)


def test_g2(g2):
    assert brute_force_optimum(g2) == 3


def test_empty():
    g = build_graph([1, 2], [], [])
    assert brute_force_optimum(g) == 0
    assert brute_force_feasible(g)


def test_single_request():
    assert brute_force_optimum(build_graph([1, 2], [], [(1, 2, 3, 2)])) == 0


def test_provider_cap():
    g = build_graph([1, 2], [(1, 2, 0, 3)], [(1, 2, 3, 1)], {1: 2})
    assert brute_force_optimum(g) == 2
    assert not brute_force_feasible(g)


def test_limits():
    with pytest.raises(TooLarge):
        brute_force_optimum(build_graph(list(range(1, 7)), [], []))
    with pytest.raises(TooLarge):
        brute_force_optimum(build_graph([1, 2], [], [(1, 2, 4, 1)]))
    dense = build_graph(
        [1, 2, 3, 4, 5],
        [(i, j, 3, 3) for i in range(1, 6) for j in range(i + 1, 6)],
        [],
    )
    with pytest.raises(TooLarge):
        brute_force_optimum(dense, SmallInstanceLimits(max_states=1000))


def test_rejects_fractions():
    from fractions import Fraction

    with pytest.raises(ValueError):
        brute_force_optimum(build_graph([1, 2], [], [(1, 2, Fraction(1, 2), 1)]))
