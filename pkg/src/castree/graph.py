"""Undirected graph storage, edge-list parsing, and constrained shortest paths.

The graph is immutable after construction and stores adjacency in CSR form
(``indptr``/``indices``) with neighbor lists sorted ascending.  All shortest
path queries are breadth-first searches that scan neighbors in ascending node
id, which makes every path returned by this module (and everything built on
top of it) deterministic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

log = logging.getLogger(__name__)

UNREACHED = -1


class ParseError(ValueError):
    """Malformed input file; carries the 1-based line number when known."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected graph over dense node ids ``[0, n)``.

    ``edges`` holds each undirected edge once as ``(u, v)`` with ``u < v``,
    sorted lexicographically.  No self-loops, no duplicates.
    """

    node_count: int
    edges: np.ndarray    # (m, 2) int64
    indptr: np.ndarray   # (n + 1,) int64 CSR offsets
    indices: np.ndarray  # (2m,) int64 neighbor ids, ascending per node

    @classmethod
    def from_edges(cls, node_count: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph, silently dropping self-loops and duplicate edges."""
        g, _, _ = build_graph(node_count, pairs)
        return g

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < len(nbrs) and nbrs[i] == v)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}


def build_graph(
    node_count: int, pairs: Iterable[tuple[int, int]]
) -> tuple[Graph, int, int]:
    """Construct a :class:`Graph`, returning it with the counts of dropped
    duplicate edges and self-loops."""
    arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    if arr.size and (arr.min() < 0 or arr.max() >= node_count):
        raise ValueError(
            f"edge endpoint out of range for node_count={node_count}"
        )
    loops = arr[:, 0] == arr[:, 1]
    self_loops = int(loops.sum())
    arr = arr[~loops]
    arr = np.sort(arr, axis=1)
    if len(arr):
        uniq = np.unique(arr, axis=0)
    else:
        uniq = arr.reshape(0, 2)
    duplicates = len(arr) - len(uniq)
    # CSR over both directions
    both = np.concatenate([uniq, uniq[:, ::-1]]) if len(uniq) else uniq.reshape(0, 2)
    order = np.lexsort((both[:, 1], both[:, 0])) if len(both) else np.array([], dtype=np.int64)
    both = both[order]
    indptr = np.zeros(node_count + 1, dtype=np.int64)
    if len(both):
        np.add.at(indptr, both[:, 0] + 1, 1)
    indptr = np.cumsum(indptr)
    g = Graph(node_count=node_count, edges=uniq, indptr=indptr,
              indices=both[:, 1].copy() if len(both) else np.array([], dtype=np.int64))
    return g, duplicates, self_loops


# ---------------------------------------------------------------------------
# file parsing

def parse_edge_list_with_stats(text: str | Iterable[str]) -> tuple[Graph, int, int]:
    """Parse edge-list text, returning (graph, duplicates_dropped, loops_dropped).

    Format: one edge per line ``"u v"``, ``#``-prefixed comment lines, and an
    optional header ``# nodes: N`` that fixes the node count.  Without the
    header the node count is ``1 + max id``.
    """
    lines: Iterator[str] = iter(text.splitlines()) if isinstance(text, str) else iter(text)
    pairs: list[tuple[int, int]] = []
    header_n: int | None = None
    max_id = -1
    saw_line = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        saw_line = True
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("nodes:"):
                try:
                    header_n = int(body.split(":", 1)[1])
                except ValueError:
                    raise ParseError(f"bad node-count header {line!r}", lineno) from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two node ids, got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative node id in {line!r}", lineno)
        pairs.append((u, v))
        max_id = max(max_id, u, v)
    if not saw_line:
        raise ParseError("empty edge-list input")
    n = header_n if header_n is not None else max_id + 1
    if max_id >= n:
        raise ParseError(f"node id {max_id} exceeds declared node count {n}")
    g, dups, loops = build_graph(n, pairs)
    return g, dups, loops


def parse_edge_list(text: str | Iterable[str]) -> Graph:
    """Parse edge-list text into a :class:`Graph`.

    Duplicate edges and self-loops are dropped; the counts are logged.
    """
    g, dups, loops = parse_edge_list_with_stats(text)
    if dups or loops:
        log.info("dropped %d duplicate edges and %d self-loops", dups, loops)
    return g


def load_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return parse_edge_list(f.read())


def parse_labeled_edge_list(text: str | Iterable[str]) -> tuple[Graph, list[str]]:
    """Parse an edge list with arbitrary (possibly sparse or non-numeric)
    labels, remapping them to dense ids.

    Returns the graph and the label list, where ``labels[i]`` is the original
    label of node ``i``.  Labels are assigned dense ids in first-seen order.
    """
    lines: Iterator[str] = iter(text.splitlines()) if isinstance(text, str) else iter(text)
    ids: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    saw_line = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        saw_line = True
        if line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two node labels, got {line!r}", lineno)
        uv = []
        for lab in parts:
            if lab not in ids:
                ids[lab] = len(ids)
            uv.append(ids[lab])
        pairs.append((uv[0], uv[1]))
    if not saw_line:
        raise ParseError("empty edge-list input")
    g, dups, loops = build_graph(len(ids), pairs)
    if dups or loops:
        log.info("dropped %d duplicate edges and %d self-loops", dups, loops)
    return g, list(ids)


def write_edge_list(g: Graph, f) -> None:
    f.write(f"# nodes: {g.node_count}\n")
    for u, v in g.edges:
        f.write(f"{u} {v}\n")


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True, eq=True)
class ReportSet:
    """Timestamped infection reports ``{(node, time)}``.

    Node ids must be distinct and the set non-empty; timestamps are arbitrary
    reals.  Derived views (earliest timestamp, chronological order, lookup by
    node) are cached.
    """

    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("report set must be non-empty")
        nodes = [u for u, _ in self.entries]
        if len(set(nodes)) != len(nodes):
            raise ValueError("report set contains duplicate node ids")
        if min(nodes) < 0:
            raise ValueError("report set contains negative node ids")

    @classmethod
    def of(cls, entries: Iterable[tuple[int, float]]) -> "ReportSet":
        return cls(tuple((int(u), float(t)) for u, t in entries))

    @property
    def k(self) -> int:
        return len(self.entries)

    @cached_property
    def t0(self) -> float:
        return min(t for _, t in self.entries)

    @cached_property
    def time_of(self) -> dict[int, float]:
        return {u: t for u, t in self.entries}

    @cached_property
    def node_set(self) -> frozenset[int]:
        return frozenset(u for u, _ in self.entries)

    def nodes_at(self, t: float) -> frozenset[int]:
        return frozenset(u for u, tu in self.entries if tu == t)

    def chronological(self) -> list[int]:
        """Reported nodes sorted by (timestamp, node id)."""
        return [u for u, _ in sorted(self.entries, key=lambda e: (e[1], e[0]))]

    def node_mask(self, n: int) -> np.ndarray:
        mask = np.zeros(n, dtype=bool)
        mask[[u for u, _ in self.entries]] = True
        return mask

    def times_array(self, n: int) -> np.ndarray:
        """Per-node timestamps, ``nan`` for unreported nodes."""
        arr = np.full(n, np.nan)
        for u, t in self.entries:
            arr[u] = t
        return arr

    def validate_for(self, g: Graph) -> None:
        top = max(u for u, _ in self.entries)
        if top >= g.node_count:
            raise ValueError(f"reported node {top} not in graph of size {g.node_count}")


def parse_report_file(text: str | Iterable[str]) -> ReportSet:
    """Parse lines of ``node<TAB>time`` into a :class:`ReportSet`."""
    lines: Iterator[str] = iter(text.splitlines()) if isinstance(text, str) else iter(text)
    entries = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'node<TAB>time', got {line!r}", lineno)
        try:
            entries.append((int(parts[0]), float(parts[1])))
        except ValueError:
            raise ParseError(f"bad report entry {line!r}", lineno) from None
    if not entries:
        raise ParseError("empty report input")
    return ReportSet.of(entries)


def write_report_file(r: ReportSet, f) -> None:
    for u, t in r.entries:
        f.write(f"{u}\t{t!r}\n")


# ---------------------------------------------------------------------------
# BFS kernel

def _concat_ranges(starts: np.ndarray, counts: np.ndarray) -> np.ndarray:
    # indices [s0..s0+c0) ++ [s1..s1+c1) ++ ... as one flat array
    total = int(counts.sum())
    if total == 0:
        return np.array([], dtype=np.int64)
    ends = np.cumsum(counts)
    offsets = np.repeat(starts - np.concatenate(([0], ends[:-1])), counts)
    return np.arange(total, dtype=np.int64) + offsets


def bfs_forest(
    g: Graph,
    sources: Sequence[int] | np.ndarray,
    expandable: np.ndarray | None = None,
    stop_mask: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Breadth-first search from ``sources``; each layer is scanned in
    ascending node id, so among equal-length paths the smallest-id
    predecessor becomes the parent.

    ``expandable`` marks nodes allowed to propagate the search (sources always
    expand); non-expandable nodes still receive a distance and parent when
    reached.  If ``stop_mask`` is given the search stops after completing the
    first layer that touches it.  Returns ``(dist, parent)`` arrays with
    ``UNREACHED`` (-1) for untouched nodes.
    """
    n = g.node_count
    dist = np.full(n, UNREACHED, dtype=np.int64)
    parent = np.full(n, UNREACHED, dtype=np.int64)
    frontier = np.unique(np.asarray(sources, dtype=np.int64))
    dist[frontier] = 0
    if stop_mask is not None and stop_mask[frontier].any():
        return dist, parent
    d = 0
    while frontier.size:
        starts = g.indptr[frontier]
        counts = g.indptr[frontier + 1] - starts
        cand = g.indices[_concat_ranges(starts, counts)]
        src = np.repeat(frontier, counts)
        fresh = dist[cand] == UNREACHED
        cand, src = cand[fresh], src[fresh]
        if not cand.size:
            break
        d += 1
        dist[cand] = d
        # reversed scatter: the first occurrence in scan order wins
        parent[cand[::-1]] = src[::-1]
        uniq = np.unique(cand)
        if stop_mask is not None and stop_mask[uniq].any():
            break
        frontier = uniq[expandable[uniq]] if expandable is not None else uniq
    return dist, parent


def bfs_matrix(
    g: Graph,
    sources: Sequence[int] | np.ndarray,
    expandable: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Independent BFS from every source at once.

    Returns ``(dist, parent)`` of shape ``(len(sources), n)``; row ``i``
    equals ``bfs_forest(g, [sources[i]], expandable)``.  Batching the layers
    across sources keeps the per-layer work in a handful of array operations
    instead of one BFS loop per source.
    """
    n = g.node_count
    sources = np.asarray(sources, dtype=np.int64)
    s = len(sources)
    dist = np.full((s, n), UNREACHED, dtype=np.int64)
    parent = np.full((s, n), UNREACHED, dtype=np.int64)
    dflat = dist.ravel()
    pflat = parent.ravel()
    rows = np.arange(s, dtype=np.int64)
    dflat[rows * n + sources] = 0
    f_row, f_node = rows, sources.copy()
    d = 0
    while f_node.size:
        starts = g.indptr[f_node]
        counts = g.indptr[f_node + 1] - starts
        cand = g.indices[_concat_ranges(starts, counts)]
        crow = np.repeat(f_row, counts)
        csrc = np.repeat(f_node, counts)
        key = crow * n + cand
        fresh = dflat[key] == UNREACHED
        key, csrc = key[fresh], csrc[fresh]
        if not key.size:
            break
        d += 1
        dflat[key] = d
        # reversed scatter: the first occurrence in scan order wins
        pflat[key[::-1]] = csrc[::-1]
        uniq_key = np.unique(key)
        # ascending keys = (row, node) ascending: the sorted next layer
        new_row = uniq_key // n
        new_node = uniq_key - new_row * n
        if expandable is not None:
            # a (s, n) mask restricts expansion per source row
            keep = (expandable[new_row, new_node] if expandable.ndim == 2
                    else expandable[new_node])
            new_row, new_node = new_row[keep], new_node[keep]
        f_row, f_node = new_row, new_node
    return dist, parent


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Plain hop distances from ``source`` (UNREACHED for other components)."""
    dist, _ = bfs_forest(g, [source])
    return dist


def trace_path(parent: np.ndarray, endpoint: int) -> list[int]:
    """Follow parent pointers from ``endpoint`` back to the BFS source."""
    path = [int(endpoint)]
    while parent[path[-1]] != UNREACHED:
        path.append(int(parent[path[-1]]))
    return path


# ---------------------------------------------------------------------------
# constrained shortest paths

def excluding_shortest_path(
    g: Graph, r: ReportSet, u: int, v: int
) -> list[int] | None:
    """Shortest u-v path whose interior avoids every other reported node.

    Both endpoints must be reported and distinct.  Returns the node sequence
    from ``u`` to ``v``, or ``None`` when no such path exists.  Ties are
    broken by the ascending-id BFS scan.
    """
    if u not in r.node_set or v not in r.node_set:
        raise ValueError(f"excluding path endpoints must be reported: got ({u}, {v})")
    if u == v:
        raise ValueError("excluding path endpoints must be distinct")
    r.validate_for(g)
    expandable = ~r.node_mask(g.node_count)
    dist, parent = bfs_forest(g, [u], expandable=expandable)
    if dist[v] == UNREACHED:
        return None
    return trace_path(parent, v)[::-1]


def extended_excluding_shortest_path(
    g: Graph, r: ReportSet, v: int, u: int
) -> list[int] | None:
    """Shortest v-u path whose interior avoids reported nodes except those
    sharing u's timestamp.

    ``u`` must be reported; ``v`` may be any node.  Returns the node sequence
    from ``v`` to ``u`` or ``None``.
    """
    if u not in r.node_set:
        raise ValueError(f"extended excluding path target {u} is not reported")
    r.validate_for(g)
    if not (0 <= v < g.node_count):
        raise ValueError(f"node {v} not in graph")
    if v == u:
        return [u]
    times = r.times_array(g.node_count)
    expandable = ~r.node_mask(g.node_count)
    expandable |= times == r.time_of[u]
    dist, parent = bfs_forest(g, [v], expandable=expandable)
    if dist[u] == UNREACHED:
        return None
    return trace_path(parent, u)[::-1]
