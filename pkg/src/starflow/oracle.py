"""Exhaustive reference answers for tiny integer instances.

Every integer assignment of request flows (within ``[0, R]``, honoring
provider caps) and social flows (within ``[-S_ji, S_ij]``) is enumerated.
Assignments are grouped by the per-node balance vector they induce and only
the best utility per vector is carried forward, which keeps the enumeration
exhaustive while bounding memory. A circulation is an assignment whose
total balance vector is zero. Nothing here shares code with the solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import TooLarge
from .graph import SocialRequestGraph


@dataclass(frozen=True)
class SmallInstanceLimits:
    max_nodes: int = 5
    max_capacity: int = 3
    max_states: int = 10**7


def _check(graph: SocialRequestGraph, limits: SmallInstanceLimits) -> None:
    if len(graph.nodes) > limits.max_nodes:
        raise TooLarge(f"{len(graph.nodes)} nodes > {limits.max_nodes}")
    amounts = [e.capacity for e in graph.requests] + [c for p in graph.social for c in (p.cap_ij, p.cap_ji)]
    amounts += [e.utility_per_unit for e in graph.requests] + list(graph.provider_caps.values())
    if any(int(a) != a for a in amounts):
        raise ValueError("oracle needs an integer instance")
    caps = [e.capacity for e in graph.requests] + [c for p in graph.social for c in (p.cap_ij, p.cap_ji)]
    if any(c > limits.max_capacity for c in caps):
        raise TooLarge(f"edge capacity above {limits.max_capacity}")


class _Budget:
    def __init__(self, limit: int) -> None:
        self.left = limit

    def spend(self, n: int) -> None:
        self.left -= n
        if self.left < 0:
            raise TooLarge("enumeration exceeds the state budget")


def _request_groups(graph: SocialRequestGraph):
    groups: dict[int, list] = {}
    for e in graph.requests:
        groups.setdefault(e.provider, []).append(e)
    return [groups[k] for k in sorted(groups)]


def _social_states(graph, index, budget, start):
    states = start
    for p in graph.social:
        nxt: dict = {}
        options = range(-int(p.cap_ji), int(p.cap_ij) + 1)
        budget.spend(len(states) * len(options))
        i, j = index[p.i], index[p.j]
        for bal, util in states.items():
            for f in options:
                b = list(bal)
                b[i] += f
                b[j] -= f
                key = tuple(b)
                if util > nxt.get(key, -1):
                    nxt[key] = util
        states = nxt
    return states


def brute_force_optimum(graph: SocialRequestGraph, limits: SmallInstanceLimits = SmallInstanceLimits()) -> int:
    """Largest utility of an integer circulation."""
    _check(graph, limits)
    index = {n: k for k, n in enumerate(graph.nodes)}
    zero = (0,) * len(index)
    budget = _Budget(limits.max_states)
    states: dict[tuple[int, ...], int] = {zero: 0}
    for group in _request_groups(graph):
        provider = group[0].provider
        cap = graph.provider_caps.get(provider)
        choices = []
        for flows in product(*(range(int(e.capacity) + 1) for e in group)):
            if cap is not None and sum(f for f, e in zip(flows, group) if not e.is_virtual) > cap:
                continue
            choices.append(flows)
        budget.spend(len(states) * len(choices))
        nxt: dict[tuple[int, ...], int] = {}
        for bal, util in states.items():
            for flows in choices:
                b = list(bal)
                u = util
                for f, e in zip(flows, group):
                    b[index[e.provider]] += f
                    b[index[e.requester]] -= f
                    u += int(e.utility_per_unit) * f
                key = tuple(b)
                if u > nxt.get(key, -1):
                    nxt[key] = u
        states = nxt
    states = _social_states(graph, index, budget, states)
    return states[zero]


def brute_force_feasible(graph: SocialRequestGraph, limits: SmallInstanceLimits = SmallInstanceLimits()) -> bool:
    """Is there an integer circulation saturating every non-virtual request edge?"""
    _check(graph, limits)
    index = {n: k for k, n in enumerate(graph.nodes)}
    budget = _Budget(limits.max_states)
    bal = [0] * len(index)
    for group in _request_groups(graph):
        real = [e for e in group if not e.is_virtual]
        cap = graph.provider_caps.get(group[0].provider)
        if cap is not None and sum(e.capacity for e in real) > cap:
            return False
        for e in real:
            bal[index[e.provider]] += int(e.capacity)
            bal[index[e.requester]] -= int(e.capacity)
    # virtual edges may carry anything in range; enumerate them like social pairs
    states: dict[tuple[int, ...], int] = {tuple(bal): 0}
    for e in graph.requests:
        if not e.is_virtual:
            continue
        nxt = {}
        budget.spend(len(states) * (int(e.capacity) + 1))
        for b0 in states:
            for f in range(int(e.capacity) + 1):
                b = list(b0)
                b[index[e.provider]] += f
                b[index[e.requester]] -= f
                nxt[tuple(b)] = 0
        states = nxt
    states = _social_states(graph, index, budget, states)
    return (0,) * len(index) in states
