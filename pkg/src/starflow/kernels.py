"""Select the cycle-search kernel at import time.

The compiled extension is used when it imports and ``STARFLOW_PURE_PYTHON``
is unset. Weights that could overflow 64-bit labels always go to the Python
kernel, whose integers are unbounded.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from . import _cycle_py

try:
    from . import _cycle_ext
except ImportError:  # not built
    _cycle_ext = None

if os.environ.get("STARFLOW_PURE_PYTHON") == "1":
    _cycle_ext = None

BACKEND = "cython" if _cycle_ext is not None else "python"

_LABEL_LIMIT = 2**62


def find_cycle_python(n, tails, heads, weights):
    return _cycle_py.find_cycle(n, tails, heads, weights)


def find_cycle_compiled(n, tails, heads, weights):
    if _cycle_ext is None:
        raise RuntimeError("compiled kernel is not available")
    return _cycle_ext.find_cycle(
        n,
        np.ascontiguousarray(tails, dtype=np.int64),
        np.ascontiguousarray(heads, dtype=np.int64),
        np.ascontiguousarray(weights, dtype=np.int64),
    )


def find_cycle(n: int, tails: Sequence[int], heads: Sequence[int], weights: Sequence[int]) -> list[int] | None:
    if _cycle_ext is not None and weights:
        wmax = max(abs(min(weights)), abs(max(weights)))
        # labels are walk weights; a walk gains at most m arcs per round
        if wmax * (len(weights) + 1) * (n + 1) < _LABEL_LIMIT:
            return find_cycle_compiled(n, tails, heads, weights)
    return find_cycle_python(n, tails, heads, weights)
