"""Batch sweeps over generator parameters with STAR, ST and RP side by side."""

from __future__ import annotations

import csv
import io
import logging
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

from .amounts import DEFAULT_PRECISION
from .benchmarks import MECHANISMS, run_mechanism
from .graph import SocialRequestGraph, received_service
from .instance_io import load_instance
from .simgen import (
    ErParams,
    SpectrumParams,
    gen_er_instance,
    gen_spectrum_instance,
    instance_rng,
    load_social_edge_list,
    with_values,
)

log = logging.getLogger(__name__)

METRICS = (
    "total_service",
    "total_utility",
    "completion_ratio",
    "iterations",
    "normalized_service",
    "normalized_utility",
    "rp_zero",
)
CSV_HEADER = ["param", "value", "mechanism", "metric", "mean", "stderr", "n"]
USER_HEADER = ["user_id", "mechanism", "received_service"]


@dataclass
class ExperimentConfig:
    setting: str = "er"
    param: str = "P_S"
    values: list = field(default_factory=lambda: [0.2])
    replications: int = 50
    mechanisms: tuple[str, ...] = MECHANISMS
    objective: str = "service"
    seed: int = 0
    output: str = "results.csv"
    per_user: bool = False
    timing: bool = False
    dataset: str | None = None
    instance: str | None = None  # fixed instance file replacing the generator
    precision: int = DEFAULT_PRECISION
    base: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("parameter grid is empty")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if self.setting not in ("er", "spectrum"):
            raise ValueError(f"unknown setting {self.setting!r}")
        if self.objective not in ("utility", "service"):
            raise ValueError(f"unknown objective {self.objective!r}")
        for m in self.mechanisms:
            if m not in MECHANISMS:
                raise ValueError(f"unknown mechanism {m!r}")

    @property
    def mode(self) -> str:
        return "divisible" if self.setting == "er" else "indivisible"

    def params_at(self, value):
        cls = ErParams if self.setting == "er" else SpectrumParams
        return with_values(cls(), **{**self.base, self.param: value})


def _coerce(text: str, like):
    if isinstance(like, bool):
        return text.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(like, int):
        return int(text)
    if isinstance(like, float):
        return float(text)
    if isinstance(like, str) or like is None:
        return text
    return _number(text)


def _number(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_config(text: str) -> ExperimentConfig:
    """``key = value`` lines; generator fields (``N``, ``P_R``, ``user.3.mu_U``, ...) set the base point."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ValueError(f"config line {lineno}: expected key = value")
        k, v = body.split("=", 1)
        raw[k.strip()] = v.strip()

    defaults = ExperimentConfig()
    kwargs: dict = {}
    base: dict = {}
    own = {f.name for f in fields(ExperimentConfig)}
    setting = raw.get("setting", defaults.setting)
    gen_defaults = ErParams() if setting == "er" else SpectrumParams()
    for k, v in raw.items():
        if k == "values":
            kwargs[k] = [_number(x) for x in v.split(",") if x.strip()]
        elif k == "mechanisms":
            kwargs[k] = tuple(x.strip() for x in v.split(",") if x.strip())
        elif k in ("dataset", "instance"):
            kwargs[k] = v or None
        elif k in own and k != "base":
            kwargs[k] = _coerce(v, getattr(defaults, k))
        elif k.startswith("user.") or hasattr(gen_defaults, k):
            like = getattr(gen_defaults, k, 0.0)
            base[k] = _coerce(v, like)
        else:
            raise ValueError(f"unknown config key {k!r}")
    kwargs["base"] = base
    return ExperimentConfig(**kwargs)


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


@dataclass(frozen=True)
class Stat:
    mean: float | None
    stderr: float | None
    n: int


@dataclass
class MetricsRow:
    param: str
    value: object
    mechanism: str
    stats: dict[str, Stat]


@dataclass
class ExperimentResult:
    rows: list[MetricsRow]
    per_user: list[dict[tuple[int, str], float]]  # one table per grid point
    failures: int = 0


def _summarize(xs: list[float]) -> Stat:
    if not xs:
        return Stat(None, None, 0)
    mean = math.fsum(xs) / len(xs)
    se = statistics.stdev(xs) / math.sqrt(len(xs)) if len(xs) > 1 else 0.0
    return Stat(mean, se, len(xs))


def make_instance(config: ExperimentConfig, point: int, rep: int) -> SocialRequestGraph:
    if config.instance:
        return load_instance(config.instance, config.precision)
    params = config.params_at(config.values[point])
    rng = instance_rng(config.seed, point, rep)
    if config.setting == "er":
        return gen_er_instance(params, rng)
    social = None
    if config.dataset:
        with open(config.dataset) as fh:
            social = load_social_edge_list(fh, params.N, params.N_S, rng)
    return gen_spectrum_instance(params, rng, social)


def run_replication(config: ExperimentConfig, point: int, rep: int) -> dict:
    """Metrics for every mechanism on one generated instance."""
    graph = make_instance(config, point, rep)
    requested = float(graph.total_requested())
    out: dict[str, dict] = {}
    users: dict[str, dict[int, float]] = {}
    mechanisms = list(config.mechanisms)
    if "rp" not in mechanisms:
        mechanisms.append("rp")  # normalization reference
    for mech in mechanisms:
        t0 = time.perf_counter()
        sol = run_mechanism(graph, mech, config.mode, config.objective, config.precision)
        elapsed = time.perf_counter() - t0
        out[mech] = {
            "total_service": float(sol.total_service),
            "total_utility": float(sol.utility),
            "completion_ratio": float(sol.total_service) / requested if requested else 1.0,
            "iterations": float(sol.iterations),
            "wall_time": elapsed,
        }
        users[mech] = {n: float(v) for n, v in received_service(graph, sol.flow).items()}
    rp = out["rp"]
    for mech in mechanisms:
        m = out[mech]
        # normalized values are None (excluded from the mean) when RP is zero; rp_zero counts those
        m["rp_zero"] = 1.0 if rp["total_service"] == 0 else 0.0
        m["normalized_service"] = m["total_service"] / rp["total_service"] if rp["total_service"] else None
        m["normalized_utility"] = m["total_utility"] / rp["total_utility"] if rp["total_utility"] else None
    return {"point": point, "rep": rep, "metrics": out, "users": users}


def _safe_replication(args) -> dict:
    config, point, rep = args
    try:
        return run_replication(config, point, rep)
    except Exception as exc:  # surfaced through the failure count and the log
        log.error("replication point=%d rep=%d failed: %s", point, rep, exc)
        return {"point": point, "rep": rep, "error": repr(exc)}


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    tasks = [(config, p, r) for p in range(len(config.values)) for r in range(config.replications)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_safe_replication, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_safe_replication(t) for t in tasks]
    results.sort(key=lambda r: (r["point"], r["rep"]))

    metric_names = METRICS + (("wall_time",) if config.timing else ())
    rows: list[MetricsRow] = []
    per_user: list[dict[tuple[int, str], float]] = []
    failures = 0
    for p, value in enumerate(config.values):
        done = [r for r in results if r["point"] == p and "error" not in r]
        failures += sum(1 for r in results if r["point"] == p and "error" in r)
        table: dict[tuple[int, str], float] = {}
        for mech in config.mechanisms:
            stats = {}
            for name in metric_names:
                xs = [r["metrics"][mech][name] for r in done]
                stats[name] = _summarize([x for x in xs if x is not None])
            rows.append(MetricsRow(config.param, value, mech, stats))
            if done:
                for node in sorted(done[0]["users"][mech]):
                    xs = [r["users"][mech].get(node, 0.0) for r in done]
                    table[(node, mech)] = math.fsum(xs) / len(xs)
        per_user.append(table)
    return ExperimentResult(rows, per_user, failures)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def results_csv(rows: list[MetricsRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        for name, st in row.stats.items():
            w.writerow([row.param, _fmt(row.value), row.mechanism, name, _fmt(st.mean), _fmt(st.stderr), st.n])
    return buf.getvalue()


def per_user_csv(table: dict[tuple[int, str], float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(USER_HEADER)
    for (node, mech), v in table.items():
        w.writerow([node, mech, repr(v)])
    return buf.getvalue()


def parse_results_csv(text: str) -> list[MetricsRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected header {header}")
    rows: list[MetricsRow] = []
    for param, value, mech, metric, mean, se, n in reader:
        v = _number(value)
        if not rows or (rows[-1].param, rows[-1].value, rows[-1].mechanism) != (param, v, mech):
            rows.append(MetricsRow(param, v, mech, {}))
        rows[-1].stats[metric] = Stat(float(mean) if mean else None, float(se) if se else None, int(n))
    return rows


def emit_results(result: ExperimentResult | list[MetricsRow], output: str | Path, per_user: bool = False) -> list[Path]:
    """Write the long-format CSV, plus one per-user CSV per grid point if asked."""
    rows = result.rows if isinstance(result, ExperimentResult) else result
    if not rows:
        raise ValueError("nothing to emit")
    out = Path(output)
    out.write_text(results_csv(rows))
    written = [out]
    if per_user and isinstance(result, ExperimentResult):
        for k, table in enumerate(result.per_user):
            path = out.with_name(f"{out.stem}_users_{k}{out.suffix}")
            path.write_text(per_user_csv(table))
            written.append(path)
    return written
