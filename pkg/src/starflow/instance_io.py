"""Line-oriented text formats for instances and flows.

Instance::

    # comment
    node <id>
    social <i> <j> <S_ij> <S_ji>
    request <i> <j> <R_ij> <U_ij>
    provider_cap <i> <C_i>

Request edges are numbered 0, 1, ... in file order. Flow::

    request_flow <i> <j> <edge_id> <value>
    social_flow <i> <j> <value>

Other lines in a flow file (summaries, traces) are ignored.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, TextIO

from .amounts import DEFAULT_PRECISION, format_amount, parse_amount
from .errors import MalformedLine, PrecisionExceeded
from .graph import Flow, SocialRequestGraph, build_graph, canonical_pair


def _lines(source: str | TextIO) -> Iterable[tuple[int, str, list[str]]]:
    text = source if isinstance(source, str) else source.read()
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, raw, body.split()


def parse_instance(source: str | TextIO, precision: int = DEFAULT_PRECISION) -> SocialRequestGraph:
    nodes: list[int] = []
    social: list[tuple] = []
    requests: list[tuple] = []
    caps: dict[int, object] = {}
    for lineno, raw, tok in _lines(source):
        kind, args = tok[0], tok[1:]
        arity = {"node": 1, "social": 4, "request": 4, "provider_cap": 2}.get(kind)
        if arity is None:
            raise MalformedLine(lineno, raw, f"unknown record {kind!r}")
        if len(args) != arity:
            raise MalformedLine(lineno, raw, f"{kind} takes {arity} fields")
        try:
            if kind == "node":
                nodes.append(int(args[0]))
            elif kind == "social":
                social.append((int(args[0]), int(args[1]), parse_amount(args[2], precision), parse_amount(args[3], precision)))
            elif kind == "request":
                requests.append((int(args[0]), int(args[1]), parse_amount(args[2], precision), parse_amount(args[3], precision)))
            else:
                caps[int(args[0])] = parse_amount(args[1], precision)
        except PrecisionExceeded:
            raise
        except ValueError as exc:
            raise MalformedLine(lineno, raw, str(exc)) from None
    return build_graph(nodes, social, requests, caps)


def load_instance(path: str | Path, precision: int = DEFAULT_PRECISION) -> SocialRequestGraph:
    return parse_instance(Path(path).read_text(), precision)


def format_instance(graph: SocialRequestGraph) -> str:
    """Serialize a graph. Real request edges must be numbered 0..n-1 to round-trip ids."""
    out = [f"node {n}" for n in graph.nodes]
    out += [f"social {p.i} {p.j} {format_amount(p.cap_ij)} {format_amount(p.cap_ji)}" for p in graph.social]
    out += [
        f"request {e.provider} {e.requester} {format_amount(e.capacity)} {format_amount(e.utility_per_unit)}"
        for e in graph.real_requests
    ]
    out += [f"provider_cap {n} {format_amount(c)}" for n, c in graph.provider_caps.items()]
    return "\n".join(out) + "\n"


def format_flow(graph: SocialRequestGraph, flow: Flow) -> list[str]:
    lines = []
    for e in graph.real_requests:
        v = flow.request(e.edge_id)
        if v:
            lines.append(f"request_flow {e.provider} {e.requester} {e.edge_id} {format_amount(v)}")
    for key, v in sorted(flow.social_flow.items()):
        if v:
            lines.append(f"social_flow {key[0]} {key[1]} {format_amount(v)}")
    return lines


def parse_flow(source: str | TextIO, precision: int = DEFAULT_PRECISION) -> Flow:
    flow = Flow()
    for lineno, raw, tok in _lines(source):
        try:
            if tok[0] == "request_flow" and len(tok) == 5:
                flow.request_flow[int(tok[3])] = parse_amount(tok[4], precision)
            elif tok[0] == "social_flow" and len(tok) == 4:
                i, j, v = int(tok[1]), int(tok[2]), parse_amount(tok[3], precision)
                key = canonical_pair(i, j)
                flow.social_flow[key] = v if (i, j) == key else -v
            elif tok[0] in ("request_flow", "social_flow"):
                raise MalformedLine(lineno, raw, "wrong field count")
        except ValueError as exc:
            if isinstance(exc, MalformedLine):
                raise
            raise MalformedLine(lineno, raw, str(exc)) from None
    return flow
