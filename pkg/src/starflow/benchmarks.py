"""Comparison mechanisms: reciprocity only (RP) and social trust only (ST).

RP may use only cycles made of request edges; it is solved exactly by
running the cycle canceler with every social pair deleted.

ST may use only cycles made of one request edge plus a social return path.
It is solved greedily, in the way a credit network processes transactions:
take the unsaturated request edge with the highest utility (lowest edge id on
ties) whose requester can route credit back to the provider along a
shortest-hop path of existing social edges with spare capacity, push as much
as the request, the provider cap and the path allow, and start over. The
result is a lower bound on the best ST value, hence ``exactness="heuristic"``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .amounts import DEFAULT_PRECISION
from .decomposition import CycleFlow, aggregate, classify_cycle, request_step, social_step
from .graph import Flow, NodeId, SocialRequestGraph, build_graph, flow_total_service, flow_utility
from .solver import Solution, solve, with_unit_utilities
from .transforms import Mode, iteration_bound, scale_to_integral

MECHANISMS = ("star", "st", "rp")


@dataclass
class BenchmarkSolution(Solution):
    mechanism: str = "star"
    exactness: str = "exact"
    cycle_flows: list[CycleFlow] = field(default_factory=list)


def _tag(sol: Solution, mechanism: str) -> BenchmarkSolution:
    return BenchmarkSolution(**vars(sol), mechanism=mechanism, exactness="exact")


def solve_star(graph: SocialRequestGraph, mode: Mode = "divisible", objective: str = "utility", precision: int = DEFAULT_PRECISION) -> BenchmarkSolution:
    return _tag(solve(graph, mode, objective, precision), "star")


def solve_rp(graph: SocialRequestGraph, mode: Mode = "divisible", objective: str = "utility", precision: int = DEFAULT_PRECISION) -> BenchmarkSolution:
    request_only = build_graph(graph.nodes, (), graph.requests, graph.provider_caps)
    sol = solve(request_only, mode, objective, precision)
    # measure utility on the caller's graph so both objectives report the same quantity
    sol.utility = flow_utility(graph, sol.flow)
    return _tag(sol, "rp")


def _social_out(graph: SocialRequestGraph) -> dict[NodeId, list[tuple[NodeId, int]]]:
    """Existing social directions per tail node, heads in ascending id order."""
    out: dict[NodeId, list[tuple[NodeId, int]]] = {n: [] for n in graph.nodes}
    for p in graph.social:
        if p.cap_ij > 0:
            out[p.i].append((p.j, p.cap_ij))
        if p.cap_ji > 0:
            out[p.j].append((p.i, p.cap_ji))
    for lst in out.values():
        lst.sort()
    return out


def _social_path(
    adj: dict[NodeId, list[tuple[NodeId, int]]], social: dict, start: NodeId, goal: NodeId
) -> list[tuple[NodeId, NodeId, int]] | None:
    """Shortest-hop path of existing social edges with spare capacity (BFS, ascending ids)."""
    prev: dict[NodeId, tuple[NodeId, int]] = {start: (start, 0)}
    q = deque([start])
    while q:
        u = q.popleft()
        if u == goal:
            break
        for v, cap in adj[u]:
            if v in prev:
                continue
            used = social.get((u, v), 0) if u < v else -social.get((v, u), 0)
            spare = cap - used
            if spare > 0:
                prev[v] = (u, spare)
                q.append(v)
    if goal not in prev:
        return None
    path = []
    v = goal
    while v != start:
        u, spare = prev[v]
        path.append((u, v, spare))
        v = u
    path.reverse()
    return path


def greedy_st(graph: SocialRequestGraph) -> tuple[Flow, list[CycleFlow]]:
    """Greedy single-request-edge cycle canceling on an integer graph."""
    req: dict[int, int] = {}
    social: dict[tuple[int, int], int] = {}
    provided: dict[NodeId, int] = {}
    caps = graph.provider_caps
    order = sorted(graph.real_requests, key=lambda e: (-e.utility_per_unit, e.edge_id))
    adj = _social_out(graph)
    cycles: list[CycleFlow] = []
    while True:
        for e in order:
            room = e.capacity - req.get(e.edge_id, 0)
            if e.provider in caps:
                room = min(room, caps[e.provider] - provided.get(e.provider, 0))
            if room <= 0:
                continue
            path = _social_path(adj, social, e.requester, e.provider)
            if path is None:
                continue
            value = min([room] + [spare for _, _, spare in path])
            req[e.edge_id] = req.get(e.edge_id, 0) + value
            provided[e.provider] = provided.get(e.provider, 0) + value
            for u, v, _ in path:
                key, sign = ((u, v), 1) if u < v else ((v, u), -1)
                social[key] = social.get(key, 0) + sign * value
            steps = (request_step(e),) + tuple(social_step(u, v) for u, v, _ in path)
            cycles.append(CycleFlow(steps, value))
            break
        else:
            break
    return Flow(req, social).nonzero(), cycles


def solve_st(graph: SocialRequestGraph, mode: Mode = "divisible", objective: str = "utility", precision: int = DEFAULT_PRECISION) -> BenchmarkSolution:
    work = with_unit_utilities(graph) if objective == "service" else graph
    scaled, info = scale_to_integral(work, mode, precision)
    scaled_flow, scaled_cycles = greedy_st(scaled)

    def unscale(v):
        return info.unscale_flow(v)

    flow = scaled_flow.map_values(unscale).nonzero()
    cycle_flows = [CycleFlow(c.steps, unscale(c.value)) for c in scaled_cycles]
    utility = flow_utility(graph, flow)
    trace = [0]
    for c in scaled_cycles:
        trace.append(trace[-1] + c.value * scaled.edge_index[c.steps[0].ref].utility_per_unit)
    return BenchmarkSolution(
        flow=flow,
        utility=utility,
        total_service=flow_total_service(graph, flow),
        iterations=len(cycle_flows),
        cycles_used=[],
        scaling=info,
        scaled_utilities=trace,
        iteration_bound=iteration_bound(info, len(work.requests)),
        mechanism="st",
        exactness="heuristic",
        cycle_flows=cycle_flows,
    )


def run_mechanism(graph: SocialRequestGraph, mechanism: str, mode: Mode = "divisible", objective: str = "utility", precision: int = DEFAULT_PRECISION) -> BenchmarkSolution:
    fn = {"star": solve_star, "st": solve_st, "rp": solve_rp}.get(mechanism)
    if fn is None:
        raise ValueError(f"unknown mechanism {mechanism!r}")
    return fn(graph, mode, objective, precision)


def st_cycles_consistent(graph: SocialRequestGraph, sol: BenchmarkSolution) -> bool:
    """ST flow equals the sum of its recorded cycles, each with one request edge."""
    if any(classify_cycle(c) not in ("direct-social", "indirect-social") for c in sol.cycle_flows):
        return False
    return aggregate(sol.cycle_flows).same_as(sol.flow)

