"""Can every request be served? Max-flow on the extended social graph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .amounts import DEFAULT_PRECISION, Amount, normalize
from .graph import Flow, NodeId, SocialRequestGraph
from .transforms import (
    build_extended_social_graph,
    scale_to_integral,
    split_provider_capacity,
    unsplit_flow,
)


@dataclass
class StNetwork:
    """Directed network with nonnegative integer arc capacities."""

    nodes: list[NodeId]
    arcs: list[tuple[NodeId, NodeId, int]] = field(default_factory=list)

    def add_arc(self, tail: NodeId, head: NodeId, cap: int) -> int:
        self.arcs.append((tail, head, cap))
        return len(self.arcs) - 1


def max_flow(network: StNetwork, s: NodeId, t: NodeId) -> tuple[int, list[int]]:
    """Dinic's algorithm on integer capacities.

    Returns the flow value and an integral flow per input arc. Flow on
    opposite arcs between the same two nodes is netted, so at most one of
    them carries flow.
    """
    index = {n: k for k, n in enumerate(network.nodes)}
    n = len(index)
    # residual arcs: to, cap, rev; arc 2k is input arc k, 2k+1 its reverse
    head: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v, c in network.arcs:
        iu, iv = index[u], index[v]
        adj[iu].append(len(head))
        head.append(iv)
        cap.append(c)
        adj[iv].append(len(head))
        head.append(iu)
        cap.append(0)

    src, dst = index[s], index[t]
    value = 0
    while True:
        level = [-1] * n
        level[src] = 0
        q = deque([src])
        while q:
            u = q.popleft()
            for a in adj[u]:
                if cap[a] > 0 and level[head[a]] < 0:
                    level[head[a]] = level[u] + 1
                    q.append(head[a])
        if level[dst] < 0:
            break
        it = [0] * n

        def push(u: int, limit: int) -> int:
            if u == dst:
                return limit
            while it[u] < len(adj[u]):
                a = adj[u][it[u]]
                v = head[a]
                if cap[a] > 0 and level[v] == level[u] + 1:
                    got = push(v, min(limit, cap[a]))
                    if got:
                        cap[a] -= got
                        cap[a ^ 1] += got
                        return got
                it[u] += 1
            return 0

        while True:
            pushed = push(src, float("inf"))
            if not pushed:
                break
            value += pushed

    flows = [cap[2 * k + 1] for k in range(len(network.arcs))]
    _net_opposing(network.arcs, flows)
    return value, flows


def _net_opposing(arcs: list[tuple[NodeId, NodeId, int]], flows: list[int]) -> None:
    by_dir: dict[tuple[NodeId, NodeId], list[int]] = {}
    for k, (u, v, _) in enumerate(arcs):
        by_dir.setdefault((u, v), []).append(k)
    for (u, v), fwd in by_dir.items():
        if u > v:
            continue
        back = by_dir.get((v, u), [])
        for a in fwd:
            for b in back:
                d = min(flows[a], flows[b])
                flows[a] -= d
                flows[b] -= d


@dataclass(frozen=True)
class FeasibilityResult:
    satisfiable: bool
    P: Amount
    max_flow_value: Amount
    witness_flow: Flow | None


def all_requests_satisfiable(graph: SocialRequestGraph, precision: int = DEFAULT_PRECISION) -> FeasibilityResult:
    """Decide whether a circulation can saturate every (non-virtual) request edge.

    Provider caps are handled by splitting with each virtual edge clipped to
    the total requested from that provider: saturating all requests then means
    saturating every edge of the split graph.
    """
    work = graph
    mapping = []
    if graph.provider_caps:
        outgoing: dict[NodeId, Amount] = {}
        for e in graph.real_requests:
            outgoing[e.provider] = outgoing.get(e.provider, 0) + e.capacity
        clipped = {n: min(c, outgoing.get(n, 0)) for n, c in graph.provider_caps.items()}
        work, mapping = split_provider_capacity(graph.replace(provider_caps=clipped))

    scaled, info = scale_to_integral(work, "divisible", precision)
    ext = build_extended_social_graph(scaled)

    net = StNetwork(list(scaled.nodes) + [ext.source, ext.sink])
    social_arcs: list[tuple[tuple[int, int], int, int]] = []  # (pair key, sign, arc index)
    for p in ext.social:
        if p.cap_ij > 0:
            social_arcs.append((p.key, 1, net.add_arc(p.i, p.j, p.cap_ij)))
        if p.cap_ji > 0:
            social_arcs.append((p.key, -1, net.add_arc(p.j, p.i, p.cap_ji)))
    for u, v, c in ext.surplus_arcs + ext.deficit_arcs:
        net.add_arc(u, v, c)

    value, flows = max_flow(net, ext.source, ext.sink)
    k = info.capacity_scale
    P = normalize(Fraction(ext.P, k))
    mf = normalize(Fraction(value, k))
    if value != ext.P:
        return FeasibilityResult(False, P, mf, None)

    social: dict[tuple[int, int], int] = {}
    for key, sign, a in social_arcs:
        social[key] = social.get(key, 0) + sign * flows[a]
    witness = Flow(
        {e.edge_id: normalize(Fraction(e.capacity, k)) for e in scaled.requests},
        {key: normalize(Fraction(v, k)) for key, v in social.items() if v != 0},
    )
    return FeasibilityResult(True, P, mf, unsplit_flow(witness, mapping))

