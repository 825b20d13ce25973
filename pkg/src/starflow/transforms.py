"""Graph rewrites: provider-capacity split, extended social graph, integral scaling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .amounts import DEFAULT_PRECISION, Amount, check_precision, normalize
from .graph import Flow, NodeId, RequestEdge, SocialRequestGraph, build_graph

Mode = Literal["divisible", "indivisible"]
MODES = ("divisible", "indivisible")


@dataclass(frozen=True)
class NodeSplitMapping:
    original: NodeId
    virtual_node: NodeId
    virtual_edge_id: int


def split_provider_capacity(graph: SocialRequestGraph) -> tuple[SocialRequestGraph, list[NodeSplitMapping]]:
    """Turn provider caps into ordinary request edges.

    Each capped node ``i`` gets a twin ``i'`` that takes over every outgoing
    request edge of ``i``, and a zero-utility virtual edge ``i -> i'`` with
    capacity ``C_i``. Edge ids of re-sourced edges are preserved so flows map
    back one-to-one; capacity-0 virtual edges are kept for the same reason.
    """
    if not graph.provider_caps:
        return graph, []

    next_node = max(graph.nodes) + 1
    next_edge = max((e.edge_id for e in graph.requests), default=-1) + 1
    mapping: list[NodeSplitMapping] = []
    twin: dict[NodeId, NodeId] = {}
    for n in sorted(graph.provider_caps):
        twin[n] = next_node
        mapping.append(NodeSplitMapping(n, next_node, next_edge))
        next_node += 1
        next_edge += 1

    edges: list[RequestEdge] = []
    for e in graph.requests:
        if e.provider in twin and not e.is_virtual:
            e = RequestEdge(e.edge_id, twin[e.provider], e.requester, e.capacity, e.utility_per_unit, e.is_virtual)
        edges.append(e)
    for m in mapping:
        edges.append(RequestEdge(m.virtual_edge_id, m.original, m.virtual_node, graph.provider_caps[m.original], 0, True))

    split = build_graph(
        nodes=list(graph.nodes) + [m.virtual_node for m in mapping],
        social_pairs=graph.social,
        request_edges=edges,
        provider_caps={},
    )
    return split, mapping


def unsplit_flow(flow: Flow, mapping: list[NodeSplitMapping]) -> Flow:
    """Drop the virtual edges of a split-graph flow; everything else keeps its key."""
    virtual = {m.virtual_edge_id for m in mapping}
    return Flow(
        {k: v for k, v in flow.request_flow.items() if k not in virtual},
        dict(flow.social_flow),
    )


def split_flow(graph: SocialRequestGraph, flow: Flow, mapping: list[NodeSplitMapping]) -> Flow:
    """Lift a flow on the original graph to the split graph (fills virtual edges)."""
    out = flow.copy()
    for m in mapping:
        total = sum(
            (flow.request(e.edge_id) for e in graph.requests if e.provider == m.original and not e.is_virtual), 0
        )
        out.request_flow[m.virtual_edge_id] = normalize(total)
    return out


@dataclass(frozen=True)
class ExtendedSocialGraph:
    social: tuple
    source: NodeId
    sink: NodeId
    surplus_arcs: tuple[tuple[NodeId, NodeId, Amount], ...]
    deficit_arcs: tuple[tuple[NodeId, NodeId, Amount], ...]
    P: Amount
    imbalance: dict[NodeId, Amount]


def request_imbalance(graph: SocialRequestGraph) -> dict[NodeId, Amount]:
    """Service a node requests minus the service requested from it."""
    bal: dict[NodeId, Amount] = {n: 0 for n in graph.nodes}
    for e in graph.requests:
        bal[e.requester] += e.capacity
        bal[e.provider] -= e.capacity
    return {n: normalize(v) for n, v in bal.items()}


def build_extended_social_graph(graph: SocialRequestGraph) -> ExtendedSocialGraph:
    imbalance = request_imbalance(graph)
    top = max(graph.nodes, default=0)
    s, t = top + 1, top + 2
    surplus = tuple((s, n, p) for n, p in imbalance.items() if p > 0)
    deficit = tuple((n, t, -p) for n, p in imbalance.items() if p < 0)
    P = normalize(sum((c for _, _, c in surplus), 0))
    return ExtendedSocialGraph(graph.social, s, t, surplus, deficit, P, imbalance)


@dataclass(frozen=True)
class ScalingInfo:
    K: int
    mode: str
    Rbar: Amount
    Ubar: Amount

    @property
    def capacity_scale(self) -> int:
        return self.K if self.mode == "divisible" else 1

    @property
    def utility_scale(self) -> int:
        return self.K

    @property
    def objective_scale(self) -> int:
        """Factor between scaled and original objective values."""
        return self.capacity_scale * self.utility_scale

    def unscale_flow(self, value: int) -> Amount:
        return normalize(Fraction(value, self.capacity_scale))

    def unscale_utility(self, value: int) -> Amount:
        return normalize(Fraction(value, self.objective_scale))


def _reduced_multiplier(values: list[Amount], precision: int) -> int:
    base = 10**precision
    g = base
    for v in values:
        g = math.gcd(g, int(v * base))
    return base // g


def scale_to_integral(
    graph: SocialRequestGraph, mode: Mode = "divisible", precision: int = DEFAULT_PRECISION
) -> tuple[SocialRequestGraph, ScalingInfo]:
    """Rewrite all amounts as integers.

    divisible: every capacity and utility is multiplied by one ``K``, the
    smallest divisor of ``10**precision`` that clears all denominators.
    indivisible: capacities are floored, utilities multiplied by ``K``
    computed over utilities only.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    caps = [e.capacity for e in graph.requests]
    caps += [c for p in graph.social for c in (p.cap_ij, p.cap_ji)]
    caps += list(graph.provider_caps.values())
    utils = [e.utility_per_unit for e in graph.requests]
    for v in utils + (caps if mode == "divisible" else []):
        check_precision(v, precision)

    Rbar = max((e.capacity for e in graph.requests), default=0)
    Ubar = max(utils, default=0)

    if mode == "divisible":
        K = _reduced_multiplier(caps + utils, precision)

        def cap_fn(x):
            return int(x * K)
    else:
        K = _reduced_multiplier(utils, precision)

        def cap_fn(x):
            return math.floor(x)

    edges = [
        RequestEdge(e.edge_id, e.provider, e.requester, cap_fn(e.capacity), int(e.utility_per_unit * K), e.is_virtual)
        for e in graph.requests
    ]
    scaled = build_graph(
        nodes=graph.nodes,
        social_pairs=[(p.i, p.j, cap_fn(p.cap_ij), cap_fn(p.cap_ji)) for p in graph.social],
        request_edges=_drop_floored(edges),
        provider_caps={n: cap_fn(c) for n, c in graph.provider_caps.items()},
    )
    return scaled, ScalingInfo(K, mode, Rbar, Ubar)


def _drop_floored(edges: list[RequestEdge]) -> list[RequestEdge]:
    # a real edge floored to capacity 0 can carry nothing, and build_graph rejects it
    return [e for e in edges if e.capacity > 0 or e.is_virtual]


def iteration_bound(info: ScalingInfo, n_request_edges: int) -> int:
    """Upper bound on cycle-canceling iterations for the scaled problem."""
    if info.mode == "divisible":
        b = n_request_edges * Fraction(info.Rbar) * Fraction(info.Ubar) * info.K**2
    else:
        b = n_request_edges * math.floor(info.Rbar) * Fraction(info.Ubar) * info.K
    return math.floor(b)
