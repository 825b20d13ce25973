import io
import math

import pytest

from starflow.errors import InsufficientNodes, MalformedLine
from starflow.instance_io import format_instance, parse_instance
from starflow.simgen import (
    ErParams,
    SpectrumParams,
    gen_er_instance,
    gen_er_social,
    gen_spectrum_instance,
    instance_rng,
    load_social_edge_list,
    with_values,
)


def test_er_empty():
    g = gen_er_instance(ErParams(N=6, P_S=0, P_R=0), instance_rng(0))
    assert g.nodes == tuple(range(1, 7)) and g.social == () and g.requests == ()


def test_er_zero_variance():
    p = ErParams(N=2, P_S=1, P_R=1, sigma2_S=0, sigma2_R=0, sigma2_U=0)
    g = gen_er_instance(p, instance_rng(5))
    assert [(e.provider, e.requester, e.capacity, e.utility_per_unit) for e in g.requests] == [
        (1, 2, 5, 10),
        (2, 1, 5, 10),
    ]
    (pair,) = g.social
    assert (pair.cap_ij, pair.cap_ji) == (5, 5)


def test_er_deterministic():
    a = gen_er_instance(ErParams(), instance_rng(3, 1, 2))
    b = gen_er_instance(ErParams(), instance_rng(3, 1, 2))
    c = gen_er_instance(ErParams(), instance_rng(3, 1, 3))
    assert a == b and a != c


def test_er_edge_frequency():
    p = ErParams(N=10, P_S=0.3, P_R=0.2)
    trials = 120
    n_social = n_req = 0
    for k in range(trials):
        g = gen_er_instance(p, instance_rng(9, k))
        n_social += sum((x.cap_ij > 0) + (x.cap_ji > 0) for x in g.social)
        n_req += len(g.requests)
    draws = trials * 90  # ordered pairs per instance
    for count, prob in ((n_social, 0.3), (n_req, 0.2)):
        se = math.sqrt(prob * (1 - prob) / draws)
        assert abs(count / draws - prob) < 3 * se


def test_er_per_user_override():
    p = with_values(ErParams(N=4, P_S=0, P_R=1, sigma2_U=0, sigma2_R=0), **{"user.2.mu_U": 20, "user.3.P_R": 0.0})
    g = gen_er_instance(p, instance_rng(0))
    for e in g.requests:
        assert e.provider != 3
        assert e.utility_per_unit == (20 if e.requester == 2 else 10)


def test_er_round_trips_through_text():
    g = gen_er_instance(ErParams(), instance_rng(1))
    assert parse_instance(format_instance(g)) == g


def test_er_params_validation():
    with pytest.raises(ValueError):
        ErParams(P_S=1.5)


def test_spectrum_basic():
    g = gen_spectrum_instance(SpectrumParams(N=20), instance_rng(4))
    assert len(g.nodes) == 20
    assert all(e.utility_per_unit > 0 and isinstance(e.capacity, int) for e in g.requests)
    per_user = {}
    for e in g.requests:
        per_user.setdefault(e.requester, []).append(e)
    assert max(len(v) for v in per_user.values()) <= 3
    assert g == gen_spectrum_instance(SpectrumParams(N=20), instance_rng(4))


def test_spectrum_single_user():
    assert gen_spectrum_instance(SpectrumParams(N=1), instance_rng(0)).requests == ()


def test_spectrum_insufficient_nodes():
    social = gen_er_social([1, 2], 0.5, 5, instance_rng(0))
    with pytest.raises(InsufficientNodes):
        gen_spectrum_instance(SpectrumParams(N=3), instance_rng(0), social)


def test_edge_list():
    g = load_social_edge_list(io.StringIO("1 2\n2 1\n"), None, 1, instance_rng(0))
    (p,) = g.social
    assert (p.i, p.j, p.cap_ij, p.cap_ji) == (1, 2, 1, 1)


def test_edge_list_empty_and_limit():
    assert load_social_edge_list(io.StringIO(""), None, 5, instance_rng(0)).nodes == ()
    g = load_social_edge_list(io.StringIO("1 2\n2 3\n3 1\n"), 2, 5, instance_rng(0))
    assert g.nodes == (1, 2)
    assert [(p.i, p.j) for p in g.social] == [(1, 2)]


def test_edge_list_malformed():
    with pytest.raises(MalformedLine):
        load_social_edge_list(io.StringIO("1\n"), None, 5, instance_rng(0))
