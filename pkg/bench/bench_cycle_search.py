"""Time the compiled and pure-Python cycle-search kernels.

Two measurements per instance size:
  search  one positive-cycle search on the zero-flow residual graph
  solve   a full max-utility solve with the kernel pinned

Writes a CSV (stdout by default) and checks both kernels return the same cycles.
"""

import argparse
import csv
import statistics
import sys
import time
from contextlib import contextmanager

from starflow import kernels
from starflow.graph import Flow
from starflow.simgen import SpectrumParams, gen_spectrum_instance, instance_rng
from starflow.solver import build_residual, solve_max_utility
from starflow.transforms import scale_to_integral, split_provider_capacity


@contextmanager
def pinned(backend):
    saved = kernels._cycle_ext
    if backend == "python":
        kernels._cycle_ext = None
    try:
        yield
    finally:
        kernels._cycle_ext = saved


def residual_arrays(graph):
    split, _ = split_provider_capacity(graph)
    scaled, _ = scale_to_integral(split, "indivisible")
    res = build_residual(scaled, Flow())
    idx = {n: k for k, n in enumerate(res.nodes)}
    return (
        scaled,
        len(idx),
        [idx[a.tail] for a in res.arcs],
        [idx[a.head] for a in res.arcs],
        [a.weight for a in res.arcs],
    )


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", nargs="+", type=int, default=[10, 20, 40, 80])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-o", "--output", help="CSV path (stdout if omitted)")
    args = ap.parse_args(argv)

    if kernels.BACKEND != "cython":
        print("compiled kernel not built; only the Python kernel will be timed", file=sys.stderr)
    backends = ["python"] + (["cython"] if kernels._cycle_ext is not None else [])

    rows = []
    for n in args.sizes:
        graph = gen_spectrum_instance(SpectrumParams(N=n), instance_rng(args.seed, n))
        _, nn, tails, heads, weights = residual_arrays(graph)
        found = {}
        for b in backends:
            fn = kernels.find_cycle_python if b == "python" else kernels.find_cycle_compiled
            found[b] = fn(nn, tails, heads, weights)
            best, med = best_of(lambda: fn(nn, tails, heads, weights), args.repeat)
            rows.append(dict(nodes=n, arcs=len(tails), backend=b, task="search", best_s=best, median_s=med))
            with pinned(b):
                best, med = best_of(lambda: solve_max_utility(graph, "indivisible"), max(1, args.repeat // 2))
            rows.append(dict(nodes=n, arcs=len(tails), backend=b, task="solve", best_s=best, median_s=med))
        if len(set(map(str, found.values()))) > 1:
            print(f"kernels disagree at N={n}: {found}", file=sys.stderr)
            return 1

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.DictWriter(out, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if args.output:
        out.close()

    by = {(r["nodes"], r["backend"], r["task"]): r["best_s"] for r in rows}
    if "cython" in backends:
        for n in args.sizes:
            for task in ("search", "solve"):
                print(f"N={n} {task}: speedup x{by[(n, 'python', task)] / by[(n, 'cython', task)]:.1f}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
