# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled positive-cycle search. Same contract and arc order as _cycle_py."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


def find_cycle(Py_ssize_t n, const int64_t[::1] tails, const int64_t[::1] heads, const int64_t[::1] weights):
    cdef Py_ssize_t m = tails.shape[0]
    cdef Py_ssize_t a, r, k, v, x, y
    cdef int64_t cand
    cdef bint changed
    if n <= 0:
        return None
    cdef int64_t* label = <int64_t*> malloc(n * sizeof(int64_t))
    cdef Py_ssize_t* pred = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    if label == NULL or pred == NULL:
        free(label)
        free(pred)
        raise MemoryError()
    try:
        for k in range(n):
            label[k] = 0
            pred[k] = -1
        for r in range(n - 1):
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

        for k in range(n):
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
    finally:
        free(label)
        free(pred)
