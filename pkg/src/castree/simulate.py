"""Ground-truth cascade simulators and partial-observation sampling.

Four propagation models are provided: discrete susceptible-infected rounds,
independent cascade, continuous-time diffusion over exponential edge delays,
and deterministic shortest-path spread.  All randomness flows through an
explicit ``numpy.random.Generator`` so that a ``(master_seed, run_index)``
pair reproduces a run exactly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from .graph import UNREACHED, Graph, ReportSet, _concat_ranges, bfs_distances

log = logging.getLogger(__name__)


class RunFailed(RuntimeError):
    """A simulation run could not produce usable output (cascade cannot reach
    the stop fraction, or report sampling stayed empty)."""


@dataclass(frozen=True)
class RngSeed:
    """Addressable random stream: (master_seed, run_index) fully determines
    every draw made in one run."""

    master_seed: int
    run_index: int

    def __post_init__(self):
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must fit in 64 bits")
        if not 0 <= self.run_index < 2 ** 32:
            raise ValueError("run_index must fit in 32 bits")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.run_index,))
        return np.random.default_rng(seq)


@dataclass(frozen=True, eq=False)
class Cascade:
    """Simulation output: the seed node and per-node infection times
    (``inf`` marks nodes the cascade never reached)."""

    source: int
    times: np.ndarray  # (n,) float64

    @property
    def node_count(self) -> int:
        return len(self.times)

    @cached_property
    def infected(self) -> np.ndarray:
        """Infected node ids, ascending."""
        return np.flatnonzero(np.isfinite(self.times))

    @property
    def infected_count(self) -> int:
        return int(np.isfinite(self.times).sum())

    def is_infected(self, u: int) -> bool:
        return bool(np.isfinite(self.times[u]))

    def time_of(self, u: int) -> float:
        return float(self.times[u])

    def as_dict(self) -> dict[int, float]:
        return {int(u): float(self.times[u]) for u in self.infected}


def causality_violations(c: Cascade, g: Graph) -> list[int]:
    """Infected non-source nodes with no infected neighbor of strictly
    smaller infection time; empty list for any well-formed cascade."""
    bad = []
    for u in c.infected:
        u = int(u)
        if u == c.source:
            continue
        nbr_times = c.times[g.neighbors(u)]
        if not (nbr_times < c.times[u]).any():
            bad.append(u)
    return bad


def _neighbor_multiset(g: Graph, nodes: np.ndarray) -> np.ndarray:
    # neighbors of `nodes` with multiplicity, in (node, ascending-neighbor) order
    starts = g.indptr[nodes]
    counts = g.indptr[nodes + 1] - starts
    return g.indices[_concat_ranges(starts, counts)]


def _stop_target(stop_fraction: float, n: int) -> int:
    return int(math.ceil(stop_fraction * n - 1e-12))


# ---------------------------------------------------------------------------
# models

def simulate_si(
    g: Graph, source: int, p: float, stop_fraction: float,
    rng: np.random.Generator,
) -> Cascade:
    """Discrete susceptible-infected rounds: every infected node attempts each
    susceptible neighbor independently with probability ``p`` each round.

    Stops at the first round where the infected count reaches
    ``stop_fraction * n``.  Raises :class:`RunFailed` when the cascade can no
    longer grow (component exhausted, or ``p == 0``) before the target.
    """
    _check_probability(p, "p")
    _check_stop_fraction(stop_fraction)
    n = g.node_count
    times = np.full(n, np.inf)
    times[source] = 0.0
    target = stop_fraction * n
    count = 1
    if count >= target:
        return Cascade(source, times)
    round_no = 0
    while True:
        round_no += 1
        infected = np.flatnonzero(np.isfinite(times))
        cand = _neighbor_multiset(g, infected)
        cand = cand[np.isinf(times[cand])]
        if cand.size == 0:
            raise RunFailed(
                f"cascade exhausted after {count} infections, "
                f"stop target {target:.1f} unreachable")
        hits = cand[rng.random(cand.size) < p]
        new = np.unique(hits)
        if new.size == 0:
            if p == 0.0:
                raise RunFailed("p=0 cannot reach the stop fraction")
            continue
        times[new] = float(round_no)
        count += new.size
        if count >= target:
            return Cascade(source, times)


def simulate_ic(
    g: Graph, source: int, p: float, rng: np.random.Generator
) -> Cascade:
    """Independent cascade: each node gets one chance, in the round after its
    own infection, to infect each susceptible neighbor with probability
    ``p``; one time unit per transmission."""
    _check_probability(p, "p")
    n = g.node_count
    times = np.full(n, np.inf)
    times[source] = 0.0
    frontier = np.array([source], dtype=np.int64)
    round_no = 0
    while frontier.size:
        round_no += 1
        cand = _neighbor_multiset(g, frontier)
        cand = cand[np.isinf(times[cand])]
        hits = cand[rng.random(cand.size) < p] if cand.size else cand
        new = np.unique(hits)
        times[new] = float(round_no)
        frontier = new
    return Cascade(source, times)


@dataclass(frozen=True)
class CalibrationResult:
    probability: float
    target_reached: bool


def calibrate_ic(
    g: Graph, target_fraction: float, trials: int,
    rng: np.random.Generator,
) -> CalibrationResult:
    """Binary search, to a resolution of 1/256, for the smallest probed
    activation probability whose Monte Carlo estimate of the expected
    infected fraction (over uniformly random sources) reaches
    ``target_fraction``.

    If even p=1 falls short (disconnected graph) the result carries
    ``target_reached=False`` with probability 1.
    """
    if not 0.0 < target_fraction < 1.0:
        raise ValueError("target_fraction must lie strictly between 0 and 1")
    if trials < 1:
        raise ValueError("trials must be positive")
    n = g.node_count

    def estimate(p: float) -> float:
        sources = rng.integers(0, n, size=trials)
        total = sum(simulate_ic(g, int(s), p, rng).infected_count
                    for s in sources)
        return total / (trials * n)

    if estimate(0.0) >= target_fraction:
        return CalibrationResult(0.0, True)
    if estimate(1.0) < target_fraction:
        log.warning(
            "IC calibration target %.3f unreachable even at p=1",
            target_fraction)
        return CalibrationResult(1.0, False)
    lo, hi = 0, 256
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if estimate(mid / 256) >= target_fraction:
            hi = mid
        else:
            lo = mid
    return CalibrationResult(hi / 256, True)


def simulate_ct(
    g: Graph, source: int, beta: float, stop_fraction: float, rng
) -> Cascade:
    """Continuous-time diffusion: each edge draws an independent transmission
    delay from Exponential(rate=beta); a node's infection time is its
    earliest-arrival time from the source over those delays.

    Arrivals beyond the stop-fraction quantile are truncated to uninfected.
    ``rng`` only needs an ``exponential(scale, size)`` method, so tests can
    stub the delays.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    _check_stop_fraction(stop_fraction)
    n = g.node_count
    delays = np.asarray(rng.exponential(1.0 / beta, size=g.edge_count), dtype=float)
    if g.edge_count:
        u, v = g.edges[:, 0], g.edges[:, 1]
        weights = sp.csr_matrix(
            (np.concatenate([delays, delays]),
             (np.concatenate([u, v]), np.concatenate([v, u]))),
            shape=(n, n))
        dist = dijkstra(weights, indices=source)
    else:
        dist = np.full(n, np.inf)
        dist[source] = 0.0
    reachable = int(np.isfinite(dist).sum())
    keep_n = min(_stop_target(stop_fraction, n), reachable)
    order = np.lexsort((np.arange(n), dist))
    kept = order[:keep_n]
    times = np.full(n, np.inf)
    times[kept] = dist[kept]
    return Cascade(source, times)


def simulate_sp(g: Graph, source: int, stop_fraction: float) -> Cascade:
    """Shortest-path spread: infection time equals BFS hop distance, layers
    included whole until the stop fraction is reached."""
    _check_stop_fraction(stop_fraction)
    n = g.node_count
    dist = bfs_distances(g, source)
    reachable = dist != UNREACHED
    target = _stop_target(stop_fraction, n)
    per_layer = np.bincount(dist[reachable])
    cum = np.cumsum(per_layer)
    cut = int(np.searchsorted(cum, target))
    if cut >= len(cum):
        cut = len(cum) - 1  # fewer reachable nodes than the target: keep all
    included = reachable & (dist <= cut)
    times = np.full(n, np.inf)
    times[included] = dist[included].astype(float)
    return Cascade(source, times)


# ---------------------------------------------------------------------------
# observation sampling

def sample_reports(
    c: Cascade, q: float, rng: np.random.Generator, max_attempts: int = 100
) -> ReportSet:
    """Report each infected node independently with probability ``q``,
    carrying its true infection time.

    An empty draw is retried with fresh randomness up to ``max_attempts``
    times before the run is declared failed.
    """
    if not 0.0 < q <= 1.0:
        raise ValueError("q must lie in (0, 1]")
    infected = c.infected
    for _ in range(max_attempts):
        mask = rng.random(infected.size) < q
        if mask.any():
            return ReportSet.of(
                (int(u), float(c.times[u])) for u in infected[mask])
    raise RunFailed(
        f"report sample stayed empty after {max_attempts} attempts (q={q})")


# ---------------------------------------------------------------------------
# cascade files

def write_cascade(c: Cascade, f) -> None:
    f.write(f"source\t{c.source}\n")
    for u in c.infected:
        f.write(f"{int(u)}\t{float(c.times[u])!r}\n")


def read_cascade(text: str, node_count: int) -> Cascade:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("source\t"):
        raise ValueError("cascade dump must start with a 'source\\t<id>' header")
    source = int(lines[0].split("\t")[1])
    times = np.full(node_count, np.inf)
    for ln in lines[1:]:
        node, t = ln.split("\t")
        times[int(node)] = float(t)
    return Cascade(source, times)


def _check_probability(p: float, name: str) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1]")


def _check_stop_fraction(stop_fraction: float) -> None:
    if not 0.0 < stop_fraction <= 1.0:
        raise ValueError("stop_fraction must lie in (0, 1]")
