"""Max-utility circulation by cycle canceling on the residual graph.

The solve works on an integer copy of the instance (see
:func:`starflow.transforms.scale_to_integral`), starts from the empty flow and
repeatedly augments along a positive-weight residual cycle by the cycle's
bottleneck capacity. With integral data each augmentation raises the scaled
utility by at least one, which bounds the iteration count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from . import kernels
from .amounts import DEFAULT_PRECISION, Amount, format_amount, normalize
from .errors import CapacityExceeded, InvalidFlow, InvariantViolation
from .graph import (
    Flow,
    NodeId,
    RequestEdge,
    SocialRequestGraph,
    build_graph,
    flow_total_service,
    flow_utility,
    validate_flow,
)
from .transforms import (
    Mode,
    NodeSplitMapping,
    ScalingInfo,
    iteration_bound,
    scale_to_integral,
    split_provider_capacity,
    unsplit_flow,
)

ArcKind = Literal["request-forward", "request-backward", "social"]


@dataclass(frozen=True)
class ResidualArc:
    kind: ArcKind
    tail: NodeId
    head: NodeId
    capacity: Amount
    weight: Amount
    origin: object  # edge id for request arcs, canonical pair for social arcs


@dataclass(frozen=True)
class ResidualGraph:
    nodes: tuple[NodeId, ...]
    arcs: tuple[ResidualArc, ...]

    def find(self, kind: str, tail: NodeId, head: NodeId) -> list[ResidualArc]:
        return [a for a in self.arcs if a.kind == kind and a.tail == tail and a.head == head]


def build_residual(graph: SocialRequestGraph, flow: Flow, *, check: bool = True) -> ResidualGraph:
    """Residual multigraph of `flow`; zero-capacity arcs are left out.

    Arcs are ordered by tail node, then by construction order (request
    edges by id, forward before backward, then social pairs), which fixes the
    relaxation order of the cycle search.
    """
    if check:
        report = validate_flow(graph, flow)
        if not report.ok:
            raise InvalidFlow(f"not a circulation: {report.violations[:3]}")
    arcs: list[ResidualArc] = []
    for e in graph.requests:
        f = flow.request(e.edge_id)
        if e.capacity - f > 0:
            arcs.append(ResidualArc("request-forward", e.provider, e.requester, e.capacity - f, e.utility_per_unit, e.edge_id))
        if f > 0:
            arcs.append(ResidualArc("request-backward", e.requester, e.provider, f, -e.utility_per_unit, e.edge_id))
    for p in graph.social:
        f = flow.social_flow.get(p.key, 0)
        if p.cap_ij - f > 0:
            arcs.append(ResidualArc("social", p.i, p.j, p.cap_ij - f, 0, p.key))
        if p.cap_ji + f > 0:
            arcs.append(ResidualArc("social", p.j, p.i, p.cap_ji + f, 0, p.key))
    arcs.sort(key=lambda a: a.tail)  # stable
    return ResidualGraph(graph.nodes, tuple(arcs))


@dataclass(frozen=True)
class Cycle:
    arcs: tuple[ResidualArc, ...]
    weight: Amount
    residual_capacity: Amount

    @classmethod
    def of(cls, arcs) -> "Cycle":
        arcs = tuple(arcs)
        if not arcs:
            raise ValueError("empty cycle")
        return cls(arcs, normalize(sum(a.weight for a in arcs)), cycle_residual_capacity(arcs))

    @property
    def nodes(self) -> list[NodeId]:
        return [a.tail for a in self.arcs] + [self.arcs[0].tail]

    def reverse_arcs(self) -> tuple[ResidualArc, ...]:
        """Arcs of the opposite cycle; capacities are placeholders."""
        flip = {"request-forward": "request-backward", "request-backward": "request-forward", "social": "social"}
        return tuple(
            ResidualArc(flip[a.kind], a.head, a.tail, a.capacity, -a.weight, a.origin) for a in reversed(self.arcs)
        )


def cycle_residual_capacity(arcs) -> Amount:
    arcs = arcs.arcs if isinstance(arcs, Cycle) else tuple(arcs)
    if not arcs:
        raise ValueError("empty cycle")
    return min(a.capacity for a in arcs)


def find_positive_cycle(residual: ResidualGraph) -> Cycle | None:
    index = {n: k for k, n in enumerate(residual.nodes)}
    tails = [index[a.tail] for a in residual.arcs]
    heads = [index[a.head] for a in residual.arcs]
    weights = [a.weight for a in residual.arcs]
    if any(not isinstance(w, int) for w in weights):
        raise TypeError("cycle search needs integer weights; scale the instance first")
    found = kernels.find_cycle(len(index), tails, heads, weights)
    if found is None:
        return None
    cycle = Cycle.of(residual.arcs[a] for a in found)
    if cycle.weight <= 0:
        raise InvariantViolation(f"cycle search returned non-positive weight {cycle.weight}")
    return cycle


def augment_along_cycle(flow: Flow, cycle: Cycle | tuple[ResidualArc, ...], value: Amount) -> Flow:
    """Push a balanced flow of `value` around `cycle`; returns a new Flow."""
    arcs = cycle.arcs if isinstance(cycle, Cycle) else tuple(cycle)
    if value <= 0:
        raise CapacityExceeded(f"augmentation value must be positive, got {value}")
    if isinstance(cycle, Cycle) and value > cycle.residual_capacity:
        raise CapacityExceeded(f"value {value} exceeds residual capacity {cycle.residual_capacity}")
    out = flow.copy()
    for a in arcs:
        if a.kind == "request-forward":
            out.request_flow[a.origin] = normalize(out.request(a.origin) + value)
        elif a.kind == "request-backward":
            out.request_flow[a.origin] = normalize(out.request(a.origin) - value)
        else:
            sign = 1 if a.tail < a.head else -1
            out.social_flow[a.origin] = normalize(out.social_flow.get(a.origin, 0) + sign * value)
    return out


@dataclass
class Solution:
    flow: Flow
    utility: Amount
    total_service: Amount
    iterations: int
    cycles_used: list[tuple[Cycle, int]]
    scaling: ScalingInfo
    scaled_utilities: list[int] = field(default_factory=list)
    iteration_bound: int = 0


@dataclass
class _ScaledRun:
    flow: Flow
    utility: int
    cycles: list[tuple[Cycle, int]]
    trace: list[int]


def cancel_cycles(graph: SocialRequestGraph, *, bound: int | None = None, validate: bool = False) -> _ScaledRun:
    """Cycle canceling on an integer graph without provider caps."""
    flow = Flow()
    utility = 0
    cycles: list[tuple[Cycle, int]] = []
    trace = [0]
    while True:
        cycle = find_positive_cycle(build_residual(graph, flow, check=validate))
        if cycle is None:
            break
        value = cycle.residual_capacity
        flow = augment_along_cycle(flow, cycle, value)
        gained = value * cycle.weight
        if gained < 1:
            raise InvariantViolation(f"scaled utility rose by {gained} < 1")
        utility += gained
        cycles.append((cycle, value))
        trace.append(utility)
        if bound is not None and len(cycles) > bound:
            raise InvariantViolation(f"{len(cycles)} iterations exceed the bound {bound}")
    return _ScaledRun(flow, utility, cycles, trace)


def solve_max_utility(
    graph: SocialRequestGraph, mode: Mode = "divisible", precision: int = DEFAULT_PRECISION
) -> Solution:
    """Optimal circulation for the utility objective.

    Returns the flow on the caller's graph together with the canceled cycles
    (on the scaled, capacity-split graph) and scaling metadata.
    """
    split, mapping = split_provider_capacity(graph)
    scaled, info = scale_to_integral(split, mode, precision)
    bound = iteration_bound(info, len(split.requests))
    run = cancel_cycles(scaled, bound=bound)
    return _finish(graph, mapping, info, run, bound)


def _finish(
    graph: SocialRequestGraph, mapping: list[NodeSplitMapping], info: ScalingInfo, run: _ScaledRun, bound: int
) -> Solution:
    flow = unsplit_flow(run.flow.map_values(info.unscale_flow), mapping).nonzero()
    utility = flow_utility(graph, flow)
    if utility != info.unscale_utility(run.utility):
        raise InvariantViolation("unscaled utility does not match the scaled objective")
    return Solution(
        flow=flow,
        utility=utility,
        total_service=flow_total_service(graph, flow),
        iterations=len(run.cycles),
        cycles_used=run.cycles,
        scaling=info,
        scaled_utilities=run.trace,
        iteration_bound=bound,
    )


def with_unit_utilities(graph: SocialRequestGraph) -> SocialRequestGraph:
    edges = [
        RequestEdge(e.edge_id, e.provider, e.requester, e.capacity, 0 if e.is_virtual else 1, e.is_virtual)
        for e in graph.requests
    ]
    return build_graph(graph.nodes, graph.social, edges, graph.provider_caps)


def solve_max_service(
    graph: SocialRequestGraph, mode: Mode = "divisible", precision: int = DEFAULT_PRECISION
) -> Solution:
    """Maximize total service: the utility objective with unit utilities.

    The returned ``utility`` is measured with the graph's own utilities.
    """
    sol = solve_max_utility(with_unit_utilities(graph), mode, precision)
    sol.utility = flow_utility(graph, sol.flow)
    return sol


def solve(graph: SocialRequestGraph, mode: Mode = "divisible", objective: str = "utility", precision: int = DEFAULT_PRECISION) -> Solution:
    if objective == "utility":
        return solve_max_utility(graph, mode, precision)
    if objective == "service":
        return solve_max_service(graph, mode, precision)
    raise ValueError(f"unknown objective {objective!r}")


def trace_lines(sol: Solution) -> list[str]:
    """One line per canceled cycle, in original units."""
    lines = []
    for k, (cycle, value) in enumerate(sol.cycles_used, 1):
        path = "->".join(str(n) for n in cycle.nodes)
        w = format_amount(normalize(Fraction(cycle.weight, sol.scaling.utility_scale)))
        r = format_amount(sol.scaling.unscale_flow(value))
        lines.append(f"cycle {k} nodes={path} weight={w} r_c={r}")
    return lines

