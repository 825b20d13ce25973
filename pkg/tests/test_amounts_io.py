from fractions import Fraction

import pytest

from starflow.amounts import format_amount, from_float, parse_amount
from starflow.errors import MalformedLine, PrecisionExceeded
from starflow.graph import Flow
from starflow.instance_io import format_flow, format_instance, parse_flow, parse_instance

G1_TEXT = """\
# two requests linked by social credit
node 1
node 2
node 3
node 4
social 1 3 0 1
social 2 4 1 0
request 1 2 1 1
request 4 3 1 1
"""


@pytest.mark.parametrize(
    "text, value",
    [("2", 2), ("0.5", Fraction(1, 2)), ("1.250", Fraction(5, 4)), ("-3", -3), ("0.000001", Fraction(1, 10**6))],
)
def test_parse_amount(text, value):
    assert parse_amount(text) == value


@pytest.mark.parametrize("text", ["1e3", "abc", "", "1/2", "nan"])
def test_parse_amount_rejects(text):
    with pytest.raises(ValueError):
        parse_amount(text)


def test_precision_limit():
    with pytest.raises(PrecisionExceeded):
        parse_amount("0.123", precision=2)
    assert parse_amount("0.1200", precision=2) == Fraction(3, 25)


def test_format_amount():
    assert format_amount(3) == "3"
    assert format_amount(Fraction(5, 4)) == "1.25"
    assert format_amount(Fraction(1, 3)) == "1/3"


def test_from_float():
    assert from_float(5.644, 2) == Fraction(141, 25)
    assert from_float(0.0049999, 3, round_down=True) == Fraction(4, 1000)


def test_instance_round_trip():
    g = parse_instance(G1_TEXT)
    assert len(g.social) == 2 and len(g.requests) == 2
    assert parse_instance(format_instance(g)) == g


def test_provider_cap_line():
    g = parse_instance("node 1\nnode 2\nrequest 1 2 2 1\nprovider_cap 1 0.5\n")
    assert g.provider_caps == {1: Fraction(1, 2)}


@pytest.mark.parametrize(
    "text, lineno",
    [("node 1\nedge 1 2\n", 2), ("node 1\nnode x\n", 2), ("node 1\nnode 2\nrequest 1 2 1\n", 3)],
)
def test_malformed_lines(text, lineno):
    with pytest.raises(MalformedLine) as info:
        parse_instance(text)
    assert info.value.lineno == lineno


def test_flow_round_trip():
    g = parse_instance(G1_TEXT)
    flow = Flow({0: 1, 1: 1}, {(1, 3): -1, (2, 4): 1})
    lines = format_flow(g, flow)
    assert "social_flow 1 3 -1" in lines
    text = "\n".join(lines) + "\nutility=2 service=2 iterations=1\n"
    assert parse_flow(text).same_as(flow)


def test_flow_reverse_direction_line():
    assert parse_flow("social_flow 3 1 1\n").social_flow == {(1, 3): -1}
