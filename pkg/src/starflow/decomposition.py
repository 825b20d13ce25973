"""Split a circulation into balanced flows along directed cycles of the graph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from .amounts import Amount, format_amount, normalize
from .errors import NotACirculation
from .graph import Flow, NodeId, PairKey, SocialRequestGraph, canonical_pair, validate_flow

CycleClass = Literal["direct-reciprocity", "indirect-reciprocity", "direct-social", "indirect-social", "mixed"]


@dataclass(frozen=True)
class CycleStep:
    kind: Literal["R", "S"]
    tail: NodeId
    head: NodeId
    ref: object  # request edge id, or canonical social pair


@dataclass(frozen=True)
class CycleFlow:
    steps: tuple[CycleStep, ...]
    value: Amount

    @property
    def nodes(self) -> list[NodeId]:
        return [s.tail for s in self.steps] + [self.steps[0].tail]

    def path(self) -> str:
        out = str(self.steps[0].tail)
        for s in self.steps:
            out += f"-{s.kind}->{s.head}"
        return out


def request_step(edge) -> CycleStep:
    return CycleStep("R", edge.provider, edge.requester, edge.edge_id)


def social_step(tail: NodeId, head: NodeId) -> CycleStep:
    return CycleStep("S", tail, head, canonical_pair(tail, head))


def decompose_circulation(graph: SocialRequestGraph, flow: Flow) -> list[CycleFlow]:
    """Peel cycles off a circulation until nothing is left.

    From the lowest node with positive outgoing flow, follow positive
    outgoing edges (request edges by id first, then social directions by head
    id) until a node repeats, subtract the minimum flow on the closed loop and
    repeat. Each extraction empties at least one edge.
    """
    report = validate_flow(graph, flow)
    if not report.ok:
        raise NotACirculation(f"flow is not a circulation: {list(report.violations[:3])}")

    # remaining positive flow per directed edge, in scan order per tail node
    remaining: dict[CycleStep, Amount] = {}
    out: dict[NodeId, list[CycleStep]] = {n: [] for n in graph.nodes}
    for e in graph.requests:
        f = flow.request(e.edge_id)
        if f > 0:
            st = request_step(e)
            remaining[st] = f
            out[e.provider].append(st)
    social_out: dict[NodeId, list[CycleStep]] = {n: [] for n in graph.nodes}
    for (i, j), f in sorted(flow.social_flow.items()):
        if f > 0:
            st = social_step(i, j)
        elif f < 0:
            st = social_step(j, i)
        else:
            continue
        remaining[st] = abs(f)
        social_out[st.tail].append(st)
    for n in graph.nodes:
        out[n].extend(sorted(social_out[n], key=lambda s: s.head))

    def next_step(n: NodeId) -> CycleStep | None:
        for st in out[n]:
            if remaining.get(st, 0) > 0:
                return st
        return None

    cycles: list[CycleFlow] = []
    while True:
        start = next((n for n in graph.nodes if next_step(n) is not None), None)
        if start is None:
            break
        seen: dict[NodeId, int] = {start: 0}
        walk: list[CycleStep] = []
        node = start
        while True:
            st = next_step(node)
            if st is None:  # only possible if conservation was broken
                raise NotACirculation(f"trace stuck at node {node}")
            walk.append(st)
            node = st.head
            if node in seen:
                loop = walk[seen[node]:]
                break
            seen[node] = len(walk)
        value = min(remaining[st] for st in loop)
        for st in loop:
            remaining[st] = normalize(remaining[st] - value)
            if remaining[st] == 0:
                del remaining[st]
        cycles.append(CycleFlow(tuple(loop), normalize(value)))
    return cycles


def aggregate(cycles: Iterable[CycleFlow]) -> Flow:
    """Sum balanced cycle flows; opposite social directions cancel."""
    req: dict[int, Amount] = {}
    soc: dict[PairKey, Amount] = {}
    for c in cycles:
        for st in c.steps:
            if st.kind == "R":
                req[st.ref] = req.get(st.ref, 0) + c.value
            else:
                sign = 1 if st.tail < st.head else -1
                soc[st.ref] = soc.get(st.ref, 0) + sign * c.value
    return Flow(req, soc).nonzero()


def is_closed(cycle: CycleFlow) -> bool:
    steps = cycle.steps
    return all(steps[k].head == steps[(k + 1) % len(steps)].tail for k in range(len(steps)))


def uses_existing_edges(graph: SocialRequestGraph, cycle: CycleFlow) -> bool:
    for st in cycle.steps:
        if st.kind == "R":
            e = graph.edge_index.get(st.ref)
            if e is None or (e.provider, e.requester) != (st.tail, st.head):
                return False
        elif graph.social_cap(st.tail, st.head) <= 0:
            return False
    return True


def classify_cycle(cycle: CycleFlow) -> CycleClass:
    r = sum(1 for s in cycle.steps if s.kind == "R")
    s = len(cycle.steps) - r
    if s == 0 and r == 2:
        return "direct-reciprocity"
    if s == 0 and r >= 3:
        return "indirect-reciprocity"
    if r == 1 and s == 1:
        return "direct-social"
    if r == 1 and s >= 2:
        return "indirect-social"
    return "mixed"


def format_cycle(cycle: CycleFlow) -> str:
    return f"cycle value={format_amount(cycle.value)} class={classify_cycle(cycle)} path={cycle.path()}"
