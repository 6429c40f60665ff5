"""Experiment configuration, orchestration, and CSV emission.

The runner sweeps a grid of reporting probabilities, simulating one cascade
per (q, run) cell, sampling reports, reconstructing with each configured
algorithm, and evaluating the four measures.  Every random draw derives from
the master seed, so a config re-run reproduces its output byte for byte
(wall-clock timing is opt-in via ``measure_runtime`` precisely to keep that
guarantee).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .graph import Graph, ReportSet, load_edge_list
from .metrics import evaluate
from .reconstruct import (
    InfeasibleInstanceError,
    ReconstructedTree,
    closure,
    delayed_bfs,
    greedy,
    steiner_baseline,
)
from .simulate import (
    Cascade,
    RngSeed,
    RunFailed,
    calibrate_ic,
    sample_reports,
    simulate_ct,
    simulate_ic,
    simulate_si,
    simulate_sp,
)


class ConfigError(ValueError):
    """Invalid experiment configuration."""


MODELS = ("si", "ic", "ct", "sp")

ALGORITHMS: dict[str, Callable[[Graph, ReportSet], ReconstructedTree]] = {
    "closure": closure,
    "greedy": greedy,
    "delayed-bfs": delayed_bfs,
    "steiner": steiner_baseline,
}

# reporting-probability grid used throughout the evaluation protocol
DEFAULT_REPORT_PROBABILITIES = tuple(0.001 * 2 ** i for i in range(9))

# run_index values reserved for non-grid streams of a master seed
GRAPH_STREAM = 2 ** 32 - 1
CALIBRATION_STREAM = 2 ** 32 - 2

CSV_HEADER = "graph,model,algo,q,run,tree_size,precision,recall,order_accuracy,runtime_ms"


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment grid: a graph (from file or synthetic), a cascade
    model with its parameters, reporting probabilities, algorithms, and the
    master seed."""

    model: str
    graph_path: str | None = None
    ba_nodes: int | None = None
    ba_attach: int | None = None
    p: float | None = None            # si/ic transmission probability
    beta: float = 1.0                 # ct delay rate
    stop_fraction: float = 0.5
    q_list: tuple[float, ...] = DEFAULT_REPORT_PROBABILITIES
    algorithms: tuple[str, ...] = ("closure", "greedy", "delayed-bfs", "steiner")
    runs: int = 100
    master_seed: int = 0
    output_path: str | None = None
    measure_runtime: bool = False
    calibration_trials: int = 200

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}, expected one of {MODELS}")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ConfigError(
                    f"unknown algorithm {algo!r}, expected one of {tuple(ALGORITHMS)}")
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if not self.q_list:
            raise ConfigError("q_list must be non-empty")
        for q in self.q_list:
            if not 0.0 < q <= 1.0:
                raise ConfigError(f"reporting probability {q} outside (0, 1]")
        if (self.graph_path is None) == (self.ba_nodes is None):
            raise ConfigError("exactly one of graph_path or ba_nodes is required")
        if self.graph_path is not None and not Path(self.graph_path).exists():
            raise ConfigError(f"graph file not found: {self.graph_path}")
        if self.ba_nodes is not None:
            attach = self.ba_attach or 0
            if attach < 1 or self.ba_nodes <= attach:
                raise ConfigError("ba graph needs attach >= 1 and nodes > attach")
        if self.model in ("si",) and self.p is None:
            raise ConfigError("model 'si' requires p")
        if self.model == "ic" and self.p is None and not self.stop_fraction < 1.0:
            raise ConfigError(
                "model 'ic' without p calibrates to stop_fraction, which must be < 1")
        if len(self.q_list) * self.runs >= CALIBRATION_STREAM:
            raise ConfigError("grid too large for the seed-derivation scheme")

    @property
    def graph_name(self) -> str:
        if self.graph_path is not None:
            return Path(self.graph_path).stem
        return f"ba{self.ba_nodes}-{self.ba_attach}"

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(data)
        if "q_list" in kwargs:
            kwargs["q_list"] = tuple(float(q) for q in kwargs["q_list"])
        if "algorithms" in kwargs:
            kwargs["algorithms"] = tuple(kwargs["algorithms"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a flat JSON object")
        return cls.from_mapping(data)

    def override(self, **changes) -> "ExperimentConfig":
        changes = {k: v for k, v in changes.items() if v is not None}
        if "q_list" in changes:
            changes["q_list"] = tuple(float(q) for q in changes["q_list"])
        if "algorithms" in changes:
            changes["algorithms"] = tuple(changes["algorithms"])
        return replace(self, **changes)


@dataclass(frozen=True)
class RunRecord:
    graph: str
    model: str
    algo: str
    q: float
    run: int
    tree_size: int
    precision: float
    recall: float
    order_accuracy: float | None
    runtime_ms: float


@dataclass(frozen=True)
class FailureRecord:
    q: float
    run: int
    algo: str  # "*" when the cascade or the sample failed
    reason: str


@dataclass
class ExperimentResult:
    rows: list[RunRecord] = field(default_factory=list)
    failures: list[FailureRecord] = field(default_factory=list)


# ---------------------------------------------------------------------------
# synthetic graphs

def generate_ba_graph(nodes: int, attach: int, rng: np.random.Generator) -> Graph:
    """Preferential-attachment graph: a star seed on ``attach + 1`` nodes,
    then each new node links to ``attach`` distinct existing nodes chosen
    with probability proportional to degree.  Edge count is
    ``attach * (nodes - attach)``."""
    if attach < 1:
        raise ValueError("attach must be >= 1")
    if nodes <= attach:
        raise ValueError("nodes must exceed attach")
    edges = [(0, i) for i in range(1, attach + 1)]
    repeated = [0] * attach + list(range(1, attach + 1))
    for src in range(attach + 1, nodes):
        targets: set[int] = set()
        while len(targets) < attach:
            targets.add(repeated[int(rng.integers(len(repeated)))])
        for tgt in sorted(targets):
            edges.append((src, tgt))
            repeated.append(tgt)
        repeated.extend([src] * attach)
    return Graph.from_edges(nodes, edges)


# ---------------------------------------------------------------------------
# the runner

def _simulate(cfg: ExperimentConfig, g: Graph, source: int, p: float | None,
              rng: np.random.Generator) -> Cascade:
    if cfg.model == "si":
        return simulate_si(g, source, p, cfg.stop_fraction, rng)
    if cfg.model == "ic":
        return simulate_ic(g, source, p, rng)
    if cfg.model == "ct":
        return simulate_ct(g, source, cfg.beta, cfg.stop_fraction, rng)
    return simulate_sp(g, source, cfg.stop_fraction)


def load_experiment_graph(cfg: ExperimentConfig) -> Graph:
    if cfg.graph_path is not None:
        return load_edge_list(cfg.graph_path)
    rng = RngSeed(cfg.master_seed, GRAPH_STREAM).generator()
    return generate_ba_graph(cfg.ba_nodes, cfg.ba_attach, rng)


def run_experiment(cfg: ExperimentConfig, graph: Graph | None = None) -> ExperimentResult:
    """Execute the whole grid; rows come out ordered by (q, run, algorithm).

    Failed runs (stop fraction unreachable, empty samples, infeasible
    algorithm instances) land in the failure log instead of the rows.
    """
    cfg.validate()
    g = graph if graph is not None else load_experiment_graph(cfg)

    p = cfg.p
    if cfg.model == "ic" and p is None:
        rng = RngSeed(cfg.master_seed, CALIBRATION_STREAM).generator()
        p = calibrate_ic(g, cfg.stop_fraction, cfg.calibration_trials, rng).probability

    result = ExperimentResult()
    for qi, q in enumerate(cfg.q_list):
        for run in range(cfg.runs):
            rng = RngSeed(cfg.master_seed, qi * cfg.runs + run).generator()
            source = int(rng.integers(g.node_count))
            try:
                cascade = _simulate(cfg, g, source, p, rng)
                reports = sample_reports(cascade, q, rng)
            except RunFailed as exc:
                result.failures.append(FailureRecord(q, run, "*", str(exc)))
                continue
            for algo in cfg.algorithms:
                fn = ALGORITHMS[algo]
                started = time.perf_counter()
                try:
                    tree = fn(g, reports)
                except InfeasibleInstanceError as exc:
                    result.failures.append(FailureRecord(q, run, algo, str(exc)))
                    continue
                elapsed_ms = (time.perf_counter() - started) * 1000.0
                rec = evaluate(tree, cascade,
                               elapsed_ms if cfg.measure_runtime else 0.0)
                result.rows.append(RunRecord(
                    graph=cfg.graph_name, model=cfg.model, algo=algo,
                    q=q, run=run, tree_size=rec.tree_size,
                    precision=rec.precision, recall=rec.recall,
                    order_accuracy=rec.order_accuracy,
                    runtime_ms=rec.runtime_ms))
    return result


# ---------------------------------------------------------------------------
# CSV emission

def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.6f}"


def emit_csv(rows: Sequence[RunRecord], f) -> None:
    """Write rows with the fixed header; reals carry 6 decimal digits."""
    f.write(CSV_HEADER + "\n")
    for r in rows:
        f.write(",".join([
            r.graph, r.model, r.algo, _fmt(r.q), str(r.run), str(r.tree_size),
            _fmt(r.precision), _fmt(r.recall), _fmt(r.order_accuracy),
            _fmt(r.runtime_ms),
        ]) + "\n")


def write_csv(rows: Sequence[RunRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        emit_csv(rows, f)
