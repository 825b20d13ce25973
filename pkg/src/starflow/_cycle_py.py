"""Pure-Python positive-cycle search (fallback for the compiled kernel).

Arcs are given as parallel sequences and must already be in relaxation
order. Node labels start at 0 everywhere, which acts as a virtual source
joined to every node by a zero-weight arc. After ``n - 1`` max-relaxation
rounds, the first arc that still improves its head proves a positive cycle;
walking ``n`` predecessor arcs back from that head lands on the cycle, which
is then read off the predecessor chain. Predecessors are stored per arc so
parallel arcs stay distinct.
"""

from __future__ import annotations

from typing import Sequence


def find_cycle(n: int, tails: Sequence[int], heads: Sequence[int], weights: Sequence[int]) -> list[int] | None:
    """Return arc indices of a positive-weight cycle in traversal order, or None."""
    m = len(tails)
    label = [0] * n
    pred = [-1] * n
    for _ in range(n - 1):
        changed = False
        for a in range(m):
            cand = label[tails[a]] + weights[a]
            v = heads[a]
            if cand > label[v]:
                label[v] = cand
                pred[v] = a
                changed = True
        if not changed:
            return None

    x = -1
    for a in range(m):
        cand = label[tails[a]] + weights[a]
        v = heads[a]
        if cand > label[v]:
            label[v] = cand
            pred[v] = a
            x = v
            break
    if x < 0:
        return None

    for _ in range(n):
        x = tails[pred[x]]
    cycle = []
    y = x
    while True:
        a = pred[y]
        cycle.append(a)
        y = tails[a]
        if y == x:
            break
    cycle.reverse()
    return cycle
