"""Instance generators: Erdos-Renyi random setting and spectrum crowdsensing.

Randomness comes from ``numpy.random.Generator``; :func:`instance_rng` derives
an independent stream per ``(master seed, index...)`` so batches are
reproducible regardless of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, TextIO

import numpy as np

from .amounts import from_float
from .errors import InsufficientNodes, MalformedLine
from .graph import SocialRequestGraph, build_graph

TRUNCATION_FLOOR = 0.01


def instance_rng(master_seed: int, *index: int) -> np.random.Generator:
    return np.random.default_rng([master_seed, *index])


@dataclass(frozen=True)
class ErParams:
    """Random-setting parameters.

    ``overrides`` maps a user id to per-user values of ``P_S``, ``mu_S``,
    ``sigma2_S`` (social edges into that user), ``P_R``, ``mu_R``,
    ``sigma2_R`` (requests that user is asked to serve) and ``mu_U``,
    ``sigma2_U`` (utility of service that user receives).
    """

    N: int = 10
    P_S: float = 0.2
    P_R: float = 0.2
    mu_S: float = 5.0
    sigma2_S: float = 1.0
    mu_R: float = 5.0
    sigma2_R: float = 1.0
    mu_U: float = 10.0
    sigma2_U: float = 2.0
    decimals: int = 2
    overrides: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("P_S", "P_R"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        for name in ("sigma2_S", "sigma2_R", "sigma2_U"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.N < 0:
            raise ValueError("N must be nonnegative")

    def user(self, node: int, name: str) -> float:
        return self.overrides.get(node, {}).get(name, getattr(self, name))


def _normal(rng: np.random.Generator, mu: float, var: float, decimals: int):
    x = mu if var == 0 else rng.normal(mu, math.sqrt(var))
    return from_float(max(x, TRUNCATION_FLOOR), decimals)


def gen_er_instance(params: ErParams, rng: np.random.Generator) -> SocialRequestGraph:
    """Directed ER draws over ordered pairs ``(a, b)``, ``a != b``, in lexicographic order.

    A social edge ``a -> b`` (credit from a to b) and a request edge ``a -> b``
    (a serves b) are independent Bernoulli draws.
    """
    nodes = list(range(1, params.N + 1))
    social: dict[tuple[int, int], object] = {}
    requests = []
    for a in nodes:
        for b in nodes:
            if a == b:
                continue
            if rng.random() < params.user(b, "P_S"):
                social[(a, b)] = _normal(rng, params.user(b, "mu_S"), params.user(b, "sigma2_S"), params.decimals)
            if rng.random() < params.user(a, "P_R"):
                R = _normal(rng, params.user(a, "mu_R"), params.user(a, "sigma2_R"), params.decimals)
                U = _normal(rng, params.user(b, "mu_U"), params.user(b, "sigma2_U"), params.decimals)
                requests.append((a, b, R, U))
    return build_graph(nodes, _pairs(social), requests)


def _pairs(directed: dict[tuple[int, int], object]) -> list[tuple]:
    out = []
    for (a, b), cap in sorted(directed.items()):
        if a < b:
            out.append((a, b, cap, directed.get((b, a), 0)))
        elif (b, a) not in directed:
            out.append((b, a, 0, cap))
    return out


@dataclass(frozen=True)
class SpectrumParams:
    N: int = 20
    T: int = 5
    area: float = 1000.0
    max_providers: int = 3
    N_S: int = 5
    N_R: int = 5
    P_S: float = 0.2  # social edge probability when no dataset is supplied
    precision: int = 6

    def __post_init__(self) -> None:
        if self.N < 0 or self.T < 1 or self.area <= 0 or self.max_providers < 0:
            raise ValueError("spectrum dimensions must be positive")
        if self.N_S < 1 or self.N_R < 1:
            raise ValueError("N_S and N_R must be at least 1")


def gen_er_social(nodes: list[int], p: float, N_S: int, rng: np.random.Generator) -> SocialRequestGraph:
    """Directed ER social graph with integer credit limits uniform in ``1..N_S``."""
    directed = {}
    for a in nodes:
        for b in nodes:
            if a != b and rng.random() < p:
                directed[(a, b)] = int(rng.integers(1, N_S + 1))
    return build_graph(nodes, _pairs(directed))


def gen_spectrum_instance(
    params: SpectrumParams, rng: np.random.Generator, social: SocialRequestGraph | None = None
) -> SocialRequestGraph:
    """Requests from sensing geometry on top of a social graph.

    Users choose a channel; candidate providers are the users strictly
    closer to that channel's transmitter; up to ``max_providers`` are sampled.
    Utility per unit is the inverse provider-to-transmitter distance, rounded
    down to ``precision`` decimals.
    """
    if social is None:
        social = gen_er_social(list(range(1, params.N + 1)), params.P_S, params.N_S, rng)
    if len(social.nodes) < params.N:
        raise InsufficientNodes(f"social graph has {len(social.nodes)} nodes, need {params.N}")
    users = list(social.nodes[: params.N])
    keep = set(users)

    tx = rng.uniform(0, params.area, size=(params.T, 2))
    pos = rng.uniform(0, params.area, size=(len(users), 2))
    channel = rng.integers(0, params.T, size=len(users))
    dist = np.linalg.norm(pos[:, None, :] - tx[None, :, :], axis=2)  # user x transmitter

    requests = []
    for u in range(len(users)):
        k = channel[u]
        better = [v for v in range(len(users)) if v != u and dist[v, k] < dist[u, k]]
        if not better:
            continue
        pick = rng.choice(len(better), size=min(params.max_providers, len(better)), replace=False)
        for idx in sorted(pick):
            v = better[idx]
            R = int(rng.integers(1, params.N_R + 1))
            U = from_float(1.0 / float(dist[v, k]), params.precision, round_down=True)
            if U <= 0:
                continue
            requests.append((users[v], users[u], R, U))

    pairs = [p for p in social.social if p.i in keep and p.j in keep]
    return build_graph(users, pairs, requests)


def load_social_edge_list(
    stream: TextIO | Iterable[str], limit: int | None, N_S: int, rng: np.random.Generator
) -> SocialRequestGraph:
    """Read ``u v`` lines (u followed by v) into a social graph.

    An edge ``u v`` means v trusts u: credit may flow ``u -> v`` with a limit
    uniform in ``1..N_S``. Only the first `limit` distinct ids met in file
    order are kept; edges touching any other id are dropped.
    """
    kept: list[int] = []
    seen: set[int] = set()
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(stream, 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        tok = body.split()
        if len(tok) < 2:
            raise MalformedLine(lineno, raw, "expected 'u v'")
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise MalformedLine(lineno, raw, "ids must be integers") from None
        for n in (u, v):
            if n not in seen and (limit is None or len(kept) < limit):
                seen.add(n)
                kept.append(n)
        if u != v and u in seen and v in seen:
            edges.append((u, v))
    directed: dict[tuple[int, int], int] = {}
    for u, v in edges:
        if (u, v) not in directed:
            directed[(u, v)] = int(rng.integers(1, N_S + 1))
    return build_graph(kept, _pairs(directed))


def with_values(params, **changes):
    """``dataclasses.replace`` that also understands ``user.<id>.<field>`` keys."""
    plain = {}
    overrides = {k: dict(v) for k, v in getattr(params, "overrides", {}).items()}
    for key, value in changes.items():
        if key.startswith("user."):
            _, node, name = key.split(".", 2)
            overrides.setdefault(int(node), {})[name] = value
        else:
            plain[key] = value
    if overrides:
        plain["overrides"] = overrides
    return replace(params, **plain)
