"""Command line entry point: ``starflow <command> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .amounts import DEFAULT_PRECISION, format_amount
from .benchmarks import MECHANISMS, run_mechanism
from .decomposition import decompose_circulation, format_cycle
from .errors import StarflowError
from .experiment import emit_results, load_config, run_experiment
from .feasibility import all_requests_satisfiable
from .instance_io import format_flow, format_instance, load_instance, parse_flow
from .oracle import brute_force_feasible, brute_force_optimum
from .simgen import (
    ErParams,
    SpectrumParams,
    gen_er_instance,
    gen_spectrum_instance,
    instance_rng,
    load_social_edge_list,
    with_values,
)
from .solver import solve, trace_lines
from .transforms import scale_to_integral

log = logging.getLogger("starflow")


def _emit(lines: list[str], output: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _summary(sol) -> str:
    return f"utility={format_amount(sol.utility)} service={format_amount(sol.total_service)} iterations={sol.iterations}"


def cmd_solve(args) -> int:
    graph = load_instance(args.instance, args.precision)
    sol = solve(graph, args.mode, args.objective, args.precision)
    lines = format_flow(graph, sol.flow) + [_summary(sol)]
    if args.trace:
        lines += trace_lines(sol)
    _emit(lines, args.output)
    return 0


def cmd_benchmark(args) -> int:
    graph = load_instance(args.instance, args.precision)
    sol = run_mechanism(graph, args.mechanism, args.mode, args.objective, args.precision)
    lines = format_flow(graph, sol.flow)
    lines.append(f"{_summary(sol)} mechanism={sol.mechanism} exactness={sol.exactness}")
    if args.trace and sol.mechanism != "st":
        lines += trace_lines(sol)
    _emit(lines, args.output)
    return 0


def cmd_feasibility(args) -> int:
    graph = load_instance(args.instance, args.precision)
    res = all_requests_satisfiable(graph, args.precision)
    lines = [
        f"satisfiable {'true' if res.satisfiable else 'false'}",
        f"P {format_amount(res.P)}",
        f"maxflow {format_amount(res.max_flow_value)}",
    ]
    if res.witness_flow is not None:
        lines += format_flow(graph, res.witness_flow)
    _emit(lines, args.output)
    return 0


def cmd_decompose(args) -> int:
    graph = load_instance(args.instance, args.precision)
    flow = parse_flow(Path(args.flow).read_text(), args.precision)
    _emit([format_cycle(c) for c in decompose_circulation(graph, flow)], args.output)
    return 0


def cmd_oracle_check(args) -> int:
    graph = load_instance(args.instance, args.precision)
    scaled, info = scale_to_integral(graph, "divisible", args.precision)
    oracle_opt = info.unscale_utility(brute_force_optimum(scaled))
    oracle_feas = brute_force_feasible(scaled)
    solver_opt = solve(graph, "divisible", "utility", args.precision).utility
    solver_feas = all_requests_satisfiable(graph, args.precision).satisfiable
    match = oracle_opt == solver_opt and oracle_feas == solver_feas
    _emit(
        [
            f"oracle_optimum {format_amount(oracle_opt)}",
            f"solver_optimum {format_amount(solver_opt)}",
            f"oracle_feasible {str(oracle_feas).lower()}",
            f"solver_feasible {str(solver_feas).lower()}",
            "MATCH" if match else "MISMATCH",
        ],
        args.output,
    )
    return 0 if match else 1


def _assignments(items: list[str]) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise SystemExit(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = int(v)
        except ValueError:
            out[k] = float(v)
    return out


def cmd_generate(args) -> int:
    rng = instance_rng(args.seed, args.index)
    changes = _assignments(args.set)
    if args.setting == "er":
        graph = gen_er_instance(with_values(ErParams(), **changes), rng)
    else:
        params = with_values(SpectrumParams(), **changes)
        social = None
        if args.dataset:
            with open(args.dataset) as fh:
                social = load_social_edge_list(fh, params.N, params.N_S, rng)
        graph = gen_spectrum_instance(params, rng, social)
    text = format_instance(graph)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    overrides = {}
    if args.dataset:
        overrides["dataset"] = args.dataset
    if args.output:
        overrides["output"] = args.output
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        config = type(config)(**{**vars(config), **overrides})
    result = run_experiment(config, jobs=args.jobs)
    for path in emit_results(result, config.output, per_user=config.per_user):
        print(f"wrote {path}")
    if result.failures:
        log.error("%d replications failed", result.failures)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starflow", description="Max-utility circulations on social/request graphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, solver_opts=True):
        p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="max decimal places in amounts")
        p.add_argument("-o", "--output", help="write to this file instead of stdout")
        if solver_opts:
            p.add_argument("--mode", choices=("divisible", "indivisible"), default="divisible")
            p.add_argument("--objective", choices=("utility", "service"), default="utility")
            p.add_argument("--trace", action="store_true", help="append one line per canceled cycle")

    p = sub.add_parser("solve", help="optimal circulation")
    p.add_argument("instance")
    common(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("benchmark", help="run STAR, ST or RP")
    p.add_argument("instance")
    p.add_argument("--mechanism", choices=MECHANISMS, default="star")
    common(p)
    p.set_defaults(fn=cmd_benchmark)

    p = sub.add_parser("feasibility", help="can every request be satisfied")
    p.add_argument("instance")
    common(p, solver_opts=False)
    p.set_defaults(fn=cmd_feasibility)

    p = sub.add_parser("decompose", help="split a circulation into balanced cycles")
    p.add_argument("instance")
    p.add_argument("flow")
    common(p, solver_opts=False)
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("oracle-check", help="compare the solver against exhaustive search")
    p.add_argument("instance")
    common(p, solver_opts=False)
    p.set_defaults(fn=cmd_oracle_check)

    p = sub.add_parser("generate", help="write one random instance")
    p.add_argument("--setting", choices=("er", "spectrum"), default="er")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--index", type=int, default=0, help="instance index under the seed")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="generator parameter")
    p.add_argument("--dataset", help="social edge list for the spectrum setting")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("simulate", help="run a parameter sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dataset")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", help="results CSV (overrides the config)")
    p.set_defaults(fn=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except (StarflowError, ValueError, OSError) as exc:
        print(f"starflow: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
