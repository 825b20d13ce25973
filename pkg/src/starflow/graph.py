"""Combined social-request multigraph, flows on it, and circulation checks.

Conventions
-----------
A request edge ``provider -> requester`` carries service from the provider to
the requester; its flow lies in ``[0, capacity]``.

A social pair ``{i, j}`` (stored with ``i < j``) has two directional credit
limits, ``cap_ij`` for credit moving ``i -> j`` and ``cap_ji`` for the reverse.
Its flow is one signed number, the net credit moved ``i -> j``, bounded by
``-cap_ji <= f <= cap_ij``. Storing one number per pair makes the two
directional flows antisymmetric by construction.

A flow is a circulation when, at every node, outgoing service plus net
outgoing credit equals incoming service.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .amounts import Amount, normalize
from .errors import (
    DuplicateSocialPair,
    KeyMismatch,
    NegativeUtility,
    NonpositiveCapacity,
    UnknownConfiguration,
    UnknownNode,
)

NodeId = int
PairKey = tuple[int, int]


@dataclass(frozen=True)
class SocialPair:
    i: NodeId
    j: NodeId
    cap_ij: Amount
    cap_ji: Amount

    @property
    def key(self) -> PairKey:
        return (self.i, self.j)

    def cap(self, tail: NodeId, head: NodeId) -> Amount:
        """Credit limit for the direction ``tail -> head``."""
        if (tail, head) == (self.i, self.j):
            return self.cap_ij
        if (tail, head) == (self.j, self.i):
            return self.cap_ji
        raise KeyError((tail, head))


@dataclass(frozen=True)
class RequestEdge:
    edge_id: int
    provider: NodeId
    requester: NodeId
    capacity: Amount
    utility_per_unit: Amount
    is_virtual: bool = False


@dataclass(frozen=True)
class SocialRequestGraph:
    """Immutable instance. Build it through :func:`build_graph`."""

    nodes: tuple[NodeId, ...]
    social: tuple[SocialPair, ...]
    requests: tuple[RequestEdge, ...]
    provider_caps: Mapping[NodeId, Amount] = field(default_factory=dict)

    @cached_property
    def pair_index(self) -> dict[PairKey, SocialPair]:
        return {p.key: p for p in self.social}

    @cached_property
    def edge_index(self) -> dict[int, RequestEdge]:
        return {e.edge_id: e for e in self.requests}

    @cached_property
    def node_set(self) -> frozenset[NodeId]:
        return frozenset(self.nodes)

    def pair(self, a: NodeId, b: NodeId) -> SocialPair | None:
        return self.pair_index.get(canonical_pair(a, b))

    def social_cap(self, tail: NodeId, head: NodeId) -> Amount:
        p = self.pair(tail, head)
        return 0 if p is None else p.cap(tail, head)

    @property
    def real_requests(self) -> tuple[RequestEdge, ...]:
        return tuple(e for e in self.requests if not e.is_virtual)

    def total_requested(self) -> Amount:
        return normalize(sum((e.capacity for e in self.real_requests), 0))

    def replace(self, **changes) -> "SocialRequestGraph":
        """Copy with some fields swapped, re-validated."""
        kwargs = dict(
            nodes=self.nodes,
            social_pairs=[(p.i, p.j, p.cap_ij, p.cap_ji) for p in self.social],
            request_edges=self.requests,
            provider_caps=self.provider_caps,
        )
        kwargs.update(changes)
        return build_graph(**kwargs)


def canonical_pair(a: NodeId, b: NodeId) -> PairKey:
    return (a, b) if a < b else (b, a)


def build_graph(
    nodes: Iterable[NodeId],
    social_pairs: Iterable = (),
    request_edges: Iterable = (),
    provider_caps: Mapping[NodeId, Amount] | None = None,
) -> SocialRequestGraph:
    """Validate raw records and return an immutable graph.

    `social_pairs` items are ``(i, j, cap_ij, cap_ji)`` tuples or SocialPair;
    they are canonicalised so that ``i < j``. `request_edges` items are
    RequestEdge or ``(provider, requester, capacity, utility)`` tuples, the
    latter numbered in input order.
    """
    node_tuple = tuple(sorted(set(nodes)))
    known = set(node_tuple)

    pairs: dict[PairKey, SocialPair] = {}
    for raw in social_pairs:
        if isinstance(raw, SocialPair):
            a, b, cab, cba = raw.i, raw.j, raw.cap_ij, raw.cap_ji
        else:
            a, b, cab, cba = raw
        for n in (a, b):
            if n not in known:
                raise UnknownNode(f"social pair references unknown node {n}")
        if a == b:
            raise UnknownConfiguration(f"social pair on a single node {a}")
        if cab < 0 or cba < 0:
            raise NonpositiveCapacity(f"negative credit limit on social pair {{{a}, {b}}}")
        if a > b:
            a, b, cab, cba = b, a, cba, cab
        if (a, b) in pairs:
            raise DuplicateSocialPair(f"social pair {{{a}, {b}}} given twice")
        pairs[(a, b)] = SocialPair(a, b, normalize(cab), normalize(cba))

    edges: dict[int, RequestEdge] = {}
    for k, raw in enumerate(request_edges):
        if not isinstance(raw, RequestEdge):
            provider, requester, cap, util = raw
            raw = RequestEdge(k, provider, requester, cap, util)
        e = RequestEdge(
            raw.edge_id, raw.provider, raw.requester, normalize(raw.capacity), normalize(raw.utility_per_unit), raw.is_virtual
        )
        for n in (e.provider, e.requester):
            if n not in known:
                raise UnknownNode(f"request edge {e.edge_id} references unknown node {n}")
        if e.edge_id in edges:
            raise UnknownConfiguration(f"request edge id {e.edge_id} used twice")
        if e.provider == e.requester:
            raise UnknownConfiguration(f"self-request on node {e.provider} (edge {e.edge_id})")
        if e.utility_per_unit < 0:
            raise NegativeUtility(f"request edge {e.edge_id} has negative utility")
        # capacity-split edges may legitimately have capacity 0
        if e.capacity < 0 or (e.capacity == 0 and not e.is_virtual):
            raise NonpositiveCapacity(f"request edge {e.edge_id} has capacity {e.capacity}")
        edges[e.edge_id] = e

    caps: dict[NodeId, Amount] = {}
    for n, c in (provider_caps or {}).items():
        if n not in known:
            raise UnknownNode(f"provider cap on unknown node {n}")
        if c < 0:
            raise NonpositiveCapacity(f"negative provider cap on node {n}")
        caps[n] = normalize(c)

    return SocialRequestGraph(
        nodes=node_tuple,
        social=tuple(pairs[k] for k in sorted(pairs)),
        requests=tuple(edges[k] for k in sorted(edges)),
        provider_caps=dict(sorted(caps.items())),
    )


@dataclass
class Flow:
    """Service per request edge and signed net credit per canonical social pair.

    Missing keys mean zero.
    """

    request_flow: dict[int, Amount] = field(default_factory=dict)
    social_flow: dict[PairKey, Amount] = field(default_factory=dict)

    def request(self, edge_id: int) -> Amount:
        return self.request_flow.get(edge_id, 0)

    def social(self, tail: NodeId, head: NodeId) -> Amount:
        """Net credit moved ``tail -> head`` (negative if it moves the other way)."""
        v = self.social_flow.get(canonical_pair(tail, head), 0)
        return v if tail < head else -v

    def copy(self) -> "Flow":
        return Flow(dict(self.request_flow), dict(self.social_flow))

    def nonzero(self) -> "Flow":
        return Flow(
            {k: normalize(v) for k, v in sorted(self.request_flow.items()) if v != 0},
            {k: normalize(v) for k, v in sorted(self.social_flow.items()) if v != 0},
        )

    def same_as(self, other: "Flow") -> bool:
        """Equality up to explicit zero entries."""
        return self.nonzero() == other.nonzero()

    def map_values(self, fn) -> "Flow":
        return Flow(
            {k: normalize(fn(v)) for k, v in self.request_flow.items()},
            {k: normalize(fn(v)) for k, v in self.social_flow.items()},
        )


@dataclass(frozen=True)
class Violation:
    kind: str  # request_capacity | social_capacity | provider_capacity | conservation
    location: object
    magnitude: Amount


@dataclass(frozen=True)
class ValidationReport:
    capacity_ok: bool
    conservation_ok: bool
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return self.capacity_ok and self.conservation_ok


def node_imbalance(graph: SocialRequestGraph, flow: Flow) -> dict[NodeId, Amount]:
    """Per node: outgoing service + net outgoing credit - incoming service."""
    bal: dict[NodeId, Amount] = {n: 0 for n in graph.nodes}
    for e in graph.requests:
        f = flow.request(e.edge_id)
        bal[e.provider] += f
        bal[e.requester] -= f
    for (i, j), f in flow.social_flow.items():
        bal[i] += f
        bal[j] -= f
    return bal


def check_keys(graph: SocialRequestGraph, flow: Flow) -> None:
    bad_edges = [k for k in flow.request_flow if k not in graph.edge_index]
    bad_pairs = [k for k in flow.social_flow if k not in graph.pair_index]
    if bad_edges or bad_pairs:
        raise KeyMismatch(f"flow references unknown request edges {bad_edges} / social pairs {bad_pairs}")


def validate_flow(graph: SocialRequestGraph, flow: Flow) -> ValidationReport:
    """Check capacity bounds and per-node conservation exactly.

    Provider caps, when the graph carries them, are checked together with
    the edge capacity bounds.
    """
    check_keys(graph, flow)
    violations: list[Violation] = []

    for e in graph.requests:
        f = flow.request(e.edge_id)
        if f < 0:
            violations.append(Violation("request_capacity", e.edge_id, -f))
        elif f > e.capacity:
            violations.append(Violation("request_capacity", e.edge_id, f - e.capacity))
    for p in graph.social:
        f = flow.social_flow.get(p.key, 0)
        if f > p.cap_ij:
            violations.append(Violation("social_capacity", p.key, f - p.cap_ij))
        elif f < -p.cap_ji:
            violations.append(Violation("social_capacity", p.key, -p.cap_ji - f))
    if graph.provider_caps:
        out: dict[NodeId, Amount] = defaultdict(int)
        for e in graph.requests:
            if not e.is_virtual:
                out[e.provider] += flow.request(e.edge_id)
        for n, c in graph.provider_caps.items():
            if out[n] > c:
                violations.append(Violation("provider_capacity", n, out[n] - c))
    capacity_ok = not violations

    unbalanced = [Violation("conservation", n, abs(b)) for n, b in node_imbalance(graph, flow).items() if b != 0]
    violations.extend(unbalanced)
    conservation_ok = not unbalanced

    return ValidationReport(capacity_ok, conservation_ok, tuple(violations))


def flow_utility(graph: SocialRequestGraph, flow: Flow) -> Amount:
    """Sum of utility-per-unit times service over request edges.

    Social credit carries no utility.
    """
    return normalize(sum((e.utility_per_unit * flow.request(e.edge_id) for e in graph.requests), 0))


def flow_total_service(graph: SocialRequestGraph, flow: Flow) -> Amount:
    return normalize(sum((flow.request(e.edge_id) for e in graph.requests if not e.is_virtual), 0))


def received_service(graph: SocialRequestGraph, flow: Flow) -> dict[NodeId, Amount]:
    got: dict[NodeId, Amount] = {n: 0 for n in graph.nodes}
    for e in graph.real_requests:
        got[e.requester] += flow.request(e.edge_id)
    return {n: normalize(v) for n, v in got.items()}


def zero_flow() -> Flow:
    return Flow()
