"""Random small instances shared by property and acceptance tests."""

import numpy as np

from starflow.graph import build_graph


def random_small_instance(rng: np.random.Generator, max_nodes=5, max_cap=3, max_util=3, p_s=0.5, p_r=0.5, with_caps=False):
    n = int(rng.integers(2, max_nodes + 1))
    nodes = list(range(1, n + 1))
    directed = {}
    requests = []
    for a in nodes:
        for b in nodes:
            if a == b:
                continue
            if rng.random() < p_s:
                directed[(a, b)] = int(rng.integers(1, max_cap + 1))
            if rng.random() < p_r:
                requests.append((a, b, int(rng.integers(1, max_cap + 1)), int(rng.integers(0, max_util + 1))))
    social = []
    for (a, b), c in sorted(directed.items()):
        if a < b:
            social.append((a, b, c, directed.get((b, a), 0)))
        elif (b, a) not in directed:
            social.append((b, a, 0, c))
    caps = {}
    if with_caps:
        for v in nodes:
            if rng.random() < 0.3:
                caps[v] = int(rng.integers(0, max_cap + 1))
    return build_graph(nodes, social, requests, caps)
