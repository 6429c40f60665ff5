"""Cascade-tree reconstruction algorithms and exact small-instance oracles.

Given an undirected graph and timestamped reports, each algorithm returns a
tree rooted at the earliest reported node that spans every reported node and
whose root-to-node paths never visit a reported node after a later-stamped
one.  Three heuristics are provided (metric-closure arborescence, greedy path
attachment, delayed breadth-first search) plus an order-oblivious baseline and
brute-force oracles for verifying them on small instances.

All chronological ties are broken by ascending node id so that every
algorithm is a pure, deterministic function of its inputs.
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph import (
    bfs_matrix,
    UNREACHED,
    Graph,
    ReportSet,
    _concat_ranges,
    bfs_distances,
    bfs_forest,
    trace_path,
)


class InfeasibleInstanceError(RuntimeError):
    """No tree satisfying the ordering constraints exists (or is findable by
    the algorithm that raised); carries the blocking terminal when known."""

    def __init__(self, message: str, terminal: int | None = None):
        super().__init__(message)
        self.terminal = terminal


def pick_root(r: ReportSet) -> int:
    """The reported node with the earliest timestamp, smallest id on ties."""
    return min((t, u) for u, t in r.entries)[1]


def chronological_terminals(r: ReportSet) -> list[int]:
    return r.chronological()


@dataclass(frozen=True)
class ReconstructedTree:
    """Rooted tree over a subset of graph nodes, stored as a parent map.

    The root has no entry in ``parent``; every other tree node maps to its
    parent.  Edge count equals ``len(parent)``.
    """

    root: int
    parent: dict[int, int]

    @cached_property
    def node_set(self) -> frozenset[int]:
        nodes = {self.root}
        nodes.update(self.parent)
        nodes.update(self.parent.values())
        return frozenset(nodes)

    @property
    def edge_count(self) -> int:
        return len(self.parent)

    def edges(self) -> set[tuple[int, int]]:
        """Undirected edge set, each pair normalized as (min, max)."""
        return {(min(c, p), max(c, p)) for c, p in self.parent.items()}

    def path_to_root(self, u: int) -> list[int]:
        path = [u]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path


def write_tree(t: ReconstructedTree, f) -> None:
    f.write(f"root\t{t.root}\n")
    for child in sorted(t.parent):
        f.write(f"{child}\t{t.parent[child]}\n")


def read_tree(text: str) -> ReconstructedTree:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("root\t"):
        raise ValueError("tree dump must start with a 'root\\t<id>' header")
    root = int(lines[0].split("\t")[1])
    parent = {}
    for ln in lines[1:]:
        c, p = ln.split("\t")
        parent[int(c)] = int(p)
    return ReconstructedTree(root, parent)


# ---------------------------------------------------------------------------
# metric closure and arborescence

@dataclass(frozen=True, eq=False)
class ClosureGraph:
    """Directed closure over the terminals: an arc (u, v) with t(u) <= t(v)
    weighted by the excluding shortest-path length d(u, v), falling back to
    the extended excluding path when no excluding path exists.

    ``path(u, v)`` realizes the node sequence behind an arc.
    """

    root: int
    terminals: tuple[int, ...]          # chronological (time, id) order
    arcs: dict[tuple[int, int], int]
    fallback_arcs: frozenset[tuple[int, int]]
    _plain_parents: dict[int, np.ndarray]
    _fallback_parents: dict[int, np.ndarray]

    def path(self, u: int, v: int) -> list[int]:
        """The stored u -> v node sequence realizing arc (u, v)."""
        if (u, v) not in self.arcs:
            raise KeyError(f"no arc ({u}, {v}) in closure graph")
        if (u, v) in self.fallback_arcs:
            return trace_path(self._fallback_parents[v], u)
        return trace_path(self._plain_parents[u], v)[::-1]


def build_closure_graph(g: Graph, r: ReportSet, root: int) -> ClosureGraph:
    """Construct the weighted directed terminal closure used by ``closure``.

    One BFS per terminal computes all excluding distances; ordered pairs with
    no excluding path fall back to the extended variant (flagged).  Raises
    :class:`InfeasibleInstanceError` if some terminal stays unreachable from
    the root within the closure.
    """
    r.validate_for(g)
    if root != pick_root(r):
        raise ValueError(f"closure root must be the earliest reported node, got {root}")
    n = g.node_count
    terms = chronological_terminals(r)
    tof = r.time_of
    is_rep = r.node_mask(n)
    times = r.times_array(n)
    terms_arr = np.array(terms, dtype=np.int64)
    k = len(terms)

    dist_mat, par_mat = bfs_matrix(g, terms_arr, expandable=~is_rep)
    plain_parents = {u: par_mat[i] for i, u in enumerate(terms)}

    # ordered pairs (u, v) with t(u) <= t(v), u != v, v != root
    tvals = np.array([tof[u] for u in terms])
    dist_tt = dist_mat[:, terms_arr]  # (k, k) terminal-to-terminal
    wanted = tvals[:, None] <= tvals[None, :]
    np.fill_diagonal(wanted, False)
    wanted[:, terms.index(root)] = False
    present = wanted & (dist_tt != UNREACHED)
    ui, vi = np.nonzero(present)
    arcs = {(terms[i], terms[j]): int(dist_tt[i, j])
            for i, j in zip(ui.tolist(), vi.tolist())}

    fallback: set[tuple[int, int]] = set()
    fallback_parents: dict[int, np.ndarray] = {}
    gap = wanted & ~present
    cols = np.flatnonzero(gap.any(axis=0))
    if cols.size:
        # one batched BFS: row j expands non-terminals plus terminals that
        # share the target's timestamp
        masks = (~is_rep)[None, :] | (times[None, :] == tvals[cols][:, None])
        dist_f, par_f = bfs_matrix(g, terms_arr[cols], expandable=masks)
        for row, j in enumerate(cols.tolist()):
            v = terms[j]
            hit = False
            for i in np.flatnonzero(gap[:, j]).tolist():
                u = terms[i]
                if dist_f[row, u] != UNREACHED:
                    arcs[(u, v)] = int(dist_f[row, u])
                    fallback.add((u, v))
                    hit = True
            if hit:
                fallback_parents[v] = par_f[row]

    # every terminal must be reachable from the root within the closure
    out: dict[int, list[int]] = {u: [] for u in terms}
    for (u, v) in arcs:
        out[u].append(v)
    seen = {root}
    stack = [root]
    while stack:
        for v in out[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) < len(terms):
        blocked = min((tof[u], u) for u in terms if u not in seen)[1]
        raise InfeasibleInstanceError(
            f"terminal {blocked} unreachable from root {root} in the closure graph",
            terminal=blocked,
        )
    return ClosureGraph(
        root=root,
        terminals=tuple(terms),
        arcs=arcs,
        fallback_arcs=frozenset(fallback),
        _plain_parents=plain_parents,
        _fallback_parents=fallback_parents,
    )


@dataclass(frozen=True)
class Arborescence:
    """Minimum-weight spanning tree of the closure graph, arcs directed away
    from the root."""

    root: int
    parent: dict[int, int]
    total_weight: int


def directed_mst(h: ClosureGraph, root: int) -> Arborescence:
    """Minimum spanning arborescence of the closure graph (Chu-Liu/Edmonds).

    Deterministic: equal-weight in-arcs are resolved by the smallest tail id,
    parallel arcs after contraction by lexicographic (weight, tail, head).
    """
    if root != h.root:
        raise ValueError("arborescence root must match the closure root")
    nodes = list(h.terminals)
    if len(nodes) == 1:
        return Arborescence(root, {}, 0)
    parent = _min_arborescence(nodes, root, h.arcs)
    total = sum(h.arcs[(p, c)] for c, p in parent.items())
    return Arborescence(root, parent, total)


def _min_arborescence(
    nodes: list[int], root: int, arcs: dict[tuple[int, int], int]
) -> dict[int, int]:
    # recursive cycle contraction over flat arc arrays; returns {head: tail}
    items = sorted(arcs.items())
    tails = np.array([t for (t, _), _ in items], dtype=np.int64)
    heads = np.array([h for (_, h), _ in items], dtype=np.int64)
    weights = np.array([w for _, w in items], dtype=np.int64)
    keep = (heads != root) & (tails != heads)
    tails, heads, weights = tails[keep], heads[keep], weights[keep]
    # position in the (tail, head)-sorted arc list; the deterministic
    # tie-break for equal weights at every contraction level
    tie = np.arange(len(tails), dtype=np.int64)
    chosen = _edmonds_level(list(nodes), root, tails, heads, weights, tie,
                            base=max(nodes) + 1 if nodes else 0)
    return {int(h): int(tails[i]) for h, i in chosen.items()}


def _find_cycles(active, root, parent_of):
    # node-disjoint cycles of the best-in-arc functional graph
    color = {v: 0 for v in active}
    color[root] = 2
    cycles = []
    for v in active:
        if color[v]:
            continue
        path = []
        x = v
        while color[x] == 0:
            color[x] = 1
            path.append(x)
            x = parent_of[x]
        if color[x] == 1:
            cycles.append(path[path.index(x):])
        for y in path:
            color[y] = 2
    return cycles


def _edmonds_level(active, root, tails, heads, weights, tie, base):
    # one contraction level (all disjoint cycles contracted at once);
    # returns head -> index into the TOP-level arc arrays
    order = np.lexsort((tie, weights, heads))
    uh, first = np.unique(heads[order], return_index=True)
    sel = order[first]
    chosen = dict(zip(uh.tolist(), sel.tolist()))
    missing = [v for v in active if v != root and v not in chosen]
    if missing:
        v = missing[0]
        raise InfeasibleInstanceError(
            f"terminal {v} has no incoming arc",
            terminal=v if v < base else None)

    parent_of = {h: int(tails[i]) for h, i in chosen.items()}
    cycles = _find_cycles(active, root, parent_of)
    if not cycles:
        return {h: int(tie[i]) for h, i in chosen.items()}

    max_id = max(active)
    cids = []
    member_of: dict[int, int] = {}
    for cyc in cycles:
        max_id += 1
        cids.append(max_id)
        for c in cyc:
            member_of[c] = max_id
    remap = np.arange(max_id + 1, dtype=np.int64)
    adjust = np.zeros(max_id + 1, dtype=np.int64)
    for cyc, cid in zip(cycles, cids):
        for c in cyc:
            remap[c] = cid
            adjust[c] = weights[chosen[c]]
    new_tails = remap[tails]
    new_heads = remap[heads]
    w_adj = weights - adjust[heads]
    keep = new_tails != new_heads
    sub_active = [v for v in active if v not in member_of] + cids
    sub = _edmonds_level(sub_active, root, new_tails[keep], new_heads[keep],
                         w_adj[keep], tie[keep], base)

    # sub returned top-level tie ranks; tie is ascending at every level, so a
    # binary search maps a rank back to this level's arc index.  Expand each
    # supernode at the member its entering arc points to.
    result: dict[int, int] = {}
    entered: dict[int, int] = {}
    for h2, rank in sub.items():
        local = int(np.searchsorted(tie, rank))
        h_orig = int(heads[local])
        result[h_orig] = rank
        if h2 != h_orig:
            entered[h2] = h_orig
    for cyc, cid in zip(cycles, cids):
        skip = entered.get(cid)
        for c in cyc:
            if c != skip:
                result[c] = int(tie[chosen[c]])
    return result


# ---------------------------------------------------------------------------
# the three ordering-aware algorithms

def closure(g: Graph, r: ReportSet) -> ReconstructedTree:
    """Metric-closure reconstruction: build the terminal closure, take its
    minimum arborescence, then graft the realized paths terminal by terminal
    in chronological order.

    When a grafted path re-enters the partial tree it is truncated at the last
    node already present, which keeps the result a tree.
    """
    root = pick_root(r)
    r.validate_for(g)
    if r.k == 1:
        return ReconstructedTree(root, {})
    h = build_closure_graph(g, r, root)
    arb = directed_mst(h, root)

    in_tree = {root}
    parent: dict[int, int] = {}
    for u in chronological_terminals(r):
        if u in in_tree:
            continue
        chain = [u]
        while chain[-1] not in in_tree:
            chain.append(arb.parent[chain[-1]])
        chain.reverse()  # nearest tree ancestor first, u last
        seq = list(h.path(chain[0], chain[1]))
        for a, b in zip(chain[1:], chain[2:]):
            seq.extend(h.path(a, b)[1:])
        # the concatenated walk may revisit the tree (or itself, when stored
        # paths share interior nodes); on every such re-entry the attachment
        # resumes from the revisited node, keeping T a tree
        cur = seq[0]
        for b in seq[1:]:
            if b in in_tree:
                cur = b
                continue
            parent[b] = cur
            in_tree.add(b)
            cur = b
    return ReconstructedTree(root, parent)


def greedy(g: Graph, r: ReportSet) -> ReconstructedTree:
    """Attach each terminal, in chronological order, by the shortest extended
    excluding path from any node already in the tree.

    Ties on path length are broken by the smallest attaching-node id, then by
    the ascending-id BFS scan.  Per-terminal searches reuse an epoch-stamped
    scratch array and stop at the first layer touching the tree, so the cost
    scales with the explored region, not the graph.
    """
    root = pick_root(r)
    r.validate_for(g)
    n = g.node_count
    is_rep = r.node_mask(n)
    times = r.times_array(n)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[root] = True
    parent: dict[int, int] = {}
    stamp = np.full(n, -1, dtype=np.int64)
    par = np.zeros(n, dtype=np.int64)
    for epoch, u in enumerate(chronological_terminals(r)):
        if in_tree[u]:
            continue
        t_u = r.time_of[u]
        stamp[u] = epoch
        frontier = np.array([u], dtype=np.int64)
        attach = -1
        while frontier.size:
            starts = g.indptr[frontier]
            counts = g.indptr[frontier + 1] - starts
            cand = g.indices[_concat_ranges(starts, counts)]
            src = np.repeat(frontier, counts)
            fresh = stamp[cand] != epoch
            cand, src = cand[fresh], src[fresh]
            if not cand.size:
                break
            stamp[cand] = epoch
            par[cand[::-1]] = src[::-1]
            uniq = np.unique(cand)
            hits = uniq[in_tree[uniq]]
            if hits.size:
                attach = int(hits[0])  # smallest id at minimum distance
                break
            # interiors: non-reported nodes, or reports sharing u's timestamp
            frontier = uniq[~is_rep[uniq] | (times[uniq] == t_u)]
        if attach < 0:
            raise InfeasibleInstanceError(
                f"terminal {u} unreachable from the partial tree", terminal=u)
        node = attach
        while node != u:
            nxt = int(par[node])  # one hop closer to u
            parent[nxt] = node
            in_tree[nxt] = True
            node = nxt
    return ReconstructedTree(root, parent)


def delayed_bfs(g: Graph, r: ReportSet) -> ReconstructedTree:
    """Single BFS from the root that parks any terminal encountered before
    all earlier-stamped terminals have been expanded, releasing parked
    terminals chronologically; branches without a terminal are pruned."""
    tree, _ = _delayed_bfs_traced(g, r)
    return tree


def _delayed_bfs_traced(
    g: Graph, r: ReportSet
) -> tuple[ReconstructedTree, list[int]]:
    root = pick_root(r)
    r.validate_for(g)
    n = g.node_count
    is_term = r.node_mask(n)
    tof = r.time_of

    counts = Counter(t for _, t in r.entries)
    counts[tof[root]] -= 1
    class_times = sorted(counts)
    ti = 0

    def current_time() -> float:
        nonlocal ti
        while ti < len(class_times) and counts[class_times[ti]] == 0:
            ti += 1
        return class_times[ti] if ti < len(class_times) else math.inf

    marked = np.zeros(n, dtype=bool)
    marked[root] = True
    parent = np.full(n, UNREACHED, dtype=np.int64)
    queue: deque[np.ndarray] = deque()

    def expand(batch: np.ndarray) -> None:
        starts = g.indptr[batch]
        cnt = g.indptr[batch + 1] - starts
        cand = g.indices[_concat_ranges(starts, cnt)]
        src = np.repeat(batch, cnt)
        fresh = ~marked[cand]
        cand, src = cand[fresh], src[fresh]
        if not cand.size:
            return
        marked[cand] = True
        parent[cand[::-1]] = src[::-1]
        queue.append(np.unique(cand))

    parked: list[tuple[float, int]] = []
    released: list[int] = []
    expand(np.array([root], dtype=np.int64))
    while queue:
        chunk = queue.popleft()
        term_hits = is_term[chunk]
        if not term_hits.any():
            expand(chunk)
            continue
        pos = int(np.argmax(term_hits))
        if pos + 1 < len(chunk):
            queue.appendleft(chunk[pos + 1:])
        if pos > 0:
            expand(chunk[:pos])
        v = int(chunk[pos])
        heapq.heappush(parked, (tof[v], v))
        while parked and parked[0][0] <= current_time():
            t, w = heapq.heappop(parked)
            expand(np.array([w], dtype=np.int64))
            released.append(w)
            counts[t] -= 1

    if sum(counts.values()) > 0:
        done = set(released) | {root}
        blocked = min((tof[u], u) for u in r.node_set if u not in done)[1]
        raise InfeasibleInstanceError(
            f"terminal {blocked} cannot be reached in timestamp order",
            terminal=blocked)

    # prune: keep exactly the union of root-to-terminal paths
    keep = {root}
    parent_map: dict[int, int] = {}
    for u in sorted(r.node_set):
        x = u
        while x not in keep:
            keep.add(x)
            p = int(parent[x])
            parent_map[x] = p
            x = p
    return ReconstructedTree(root, parent_map), released


# ---------------------------------------------------------------------------
# order-oblivious baseline

def steiner_baseline(g: Graph, r: ReportSet) -> ReconstructedTree:
    """Classic metric-closure 2-approximation for the unordered Steiner tree:
    MST over terminal distances, expanded to real paths, spanning tree of the
    expansion, non-terminal leaves pruned.  Ignores timestamps entirely."""
    root = pick_root(r)
    r.validate_for(g)
    terms = sorted(r.node_set)
    if len(terms) == 1:
        return ReconstructedTree(root, {})

    terms_arr = np.array(terms, dtype=np.int64)
    k = len(terms)
    dist_mat, par_mat = bfs_matrix(g, terms_arr)
    par = {u: par_mat[i] for i, u in enumerate(terms)}

    iu, jv = np.triu_indices(k, 1)
    w = dist_mat[:, terms_arr][iu, jv]
    if (w == UNREACHED).any():
        j = int(jv[int(np.argmax(w == UNREACHED))])
        i = int(iu[int(np.argmax(w == UNREACHED))])
        raise InfeasibleInstanceError(
            f"terminals {terms[i]} and {terms[j]} lie in different components",
            terminal=terms[j])
    # Kruskal over the closure, ties by (weight, u, v); terms is ascending so
    # index order equals id order
    order = np.lexsort((jv, iu, w))

    rank = {u: u for u in terms}

    def find(x: int) -> int:
        while rank[x] != x:
            rank[x] = rank[rank[x]]
            x = rank[x]
        return x

    chosen = []
    for idx in order.tolist():
        u, v = terms[iu[idx]], terms[jv[idx]]
        ru, rv = find(u), find(v)
        if ru != rv:
            rank[ru] = rv
            chosen.append((u, v))
            if len(chosen) == k - 1:
                break

    nodes: set[int] = set()
    edges: set[tuple[int, int]] = set()
    for u, v in chosen:
        seq = trace_path(par[u], v)[::-1]
        nodes.update(seq)
        edges.update((min(a, b), max(a, b)) for a, b in zip(seq, seq[1:]))

    adj: dict[int, list[int]] = {x: [] for x in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    for x in adj:
        adj[x].sort()

    parent_map: dict[int, int] = {}
    seen = {root}
    dq = deque([root])
    while dq:
        x = dq.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                parent_map[y] = x
                dq.append(y)

    # strip branches that end in non-terminal leaves
    child_count = Counter(parent_map.values())
    term_set = set(terms)
    removable = [x for x in nodes
                 if x != root and child_count[x] == 0 and x not in term_set]
    while removable:
        x = removable.pop()
        p = parent_map.pop(x)
        child_count[p] -= 1
        if p != root and child_count[p] == 0 and p not in term_set:
            removable.append(p)
    return ReconstructedTree(root, parent_map)


# ---------------------------------------------------------------------------
# exact oracles (small instances only)

DEFAULT_EXACT_LIMIT = 14


def exact_ordered_steiner(
    g: Graph, r: ReportSet, limit: int = DEFAULT_EXACT_LIMIT
) -> ReconstructedTree:
    """Optimal order-respecting tree by enumerating node supersets of the
    terminals in increasing size and testing each for an order-respecting
    spanning tree rooted at the earliest reported node."""
    if g.node_count > limit:
        raise ValueError(
            f"exact oracle limited to {limit} nodes, graph has {g.node_count}")
    r.validate_for(g)
    root = pick_root(r)
    comp = bfs_distances(g, root) != UNREACHED
    for u in sorted(r.node_set):
        if not comp[u]:
            raise InfeasibleInstanceError(
                f"terminal {u} not in the root's component", terminal=u)
    terms = sorted(r.node_set)
    others = [x for x in range(g.node_count)
              if x not in r.node_set and comp[x]]
    for size in range(len(others) + 1):
        for extra in itertools.combinations(others, size):
            tree = _ordered_spanning_tree(g, r, root, set(terms) | set(extra))
            if tree is not None:
                return tree
    raise InfeasibleInstanceError(
        "no order-respecting tree spans the reported nodes")


def _ordered_spanning_tree(
    g: Graph, r: ReportSet, root: int, allowed: set[int]
) -> ReconstructedTree | None:
    # Dijkstra over path labels, where a path's label is the largest reported
    # timestamp it has visited; a reported node is enterable only when its
    # timestamp is >= the incoming label.  The search tree, when it spans
    # ``allowed``, is itself an order-respecting spanning tree.
    tof = r.time_of
    label = {x: math.inf for x in allowed}
    parent: dict[int, int] = {}
    label[root] = tof[root]
    heap: list[tuple[float, int]] = [(tof[root], root)]
    done: set[int] = set()
    while heap:
        l, x = heapq.heappop(heap)
        if x in done or l > label[x]:
            continue
        done.add(x)
        for y in g.neighbors(x):
            y = int(y)
            if y not in label or y in done:
                continue
            if y in tof:
                if tof[y] < l:
                    continue
                cand = tof[y]
            else:
                cand = l
            if cand < label[y]:
                label[y] = cand
                parent[y] = x
                heapq.heappush(heap, (cand, y))
    if len(done) < len(allowed):
        return None
    return ReconstructedTree(root, {c: parent[c] for c in allowed if c != root})


def exact_unordered_steiner(
    g: Graph, terminals, limit: int = DEFAULT_EXACT_LIMIT
) -> int:
    """Minimum edge count of any tree spanning ``terminals``, ignoring order."""
    if g.node_count > limit:
        raise ValueError(
            f"exact oracle limited to {limit} nodes, graph has {g.node_count}")
    terms = sorted(set(int(t) for t in terminals))
    if not terms:
        raise ValueError("terminal set must be non-empty")
    if terms[-1] >= g.node_count or terms[0] < 0:
        raise ValueError("terminal outside the graph")
    if len(terms) == 1:
        return 0
    comp = bfs_distances(g, terms[0]) != UNREACHED
    for u in terms:
        if not comp[u]:
            raise InfeasibleInstanceError(
                f"terminal {u} disconnected from terminal {terms[0]}", terminal=u)
    others = [x for x in range(g.node_count) if x not in terms and comp[x]]
    term_set = set(terms)
    for size in range(len(others) + 1):
        for extra in itertools.combinations(others, size):
            if _connected_within(g, term_set | set(extra)):
                return len(terms) + size - 1
    raise InfeasibleInstanceError("terminals cannot be spanned")


def _connected_within(g: Graph, allowed: set[int]) -> bool:
    start = next(iter(allowed))
    seen = {start}
    stack = [start]
    while stack:
        for y in g.neighbors(stack.pop()):
            y = int(y)
            if y in allowed and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(allowed)


# ---------------------------------------------------------------------------
# feasibility checking

def feasibility_violations(
    t: ReconstructedTree, g: Graph, r: ReportSet
) -> list[str]:
    """All ways ``t`` fails the problem contract; empty list means feasible.

    Checks tree shape, edge membership, spanning of the reported set, root
    choice, and the order-respecting condition on every root-to-node path.
    """
    issues: list[str] = []
    if t.root != pick_root(r):
        issues.append(f"root {t.root} is not the earliest reported node")
    if t.root in t.parent:
        issues.append("root must not have a parent")

    for c, p in t.parent.items():
        if not g.has_edge(c, p):
            issues.append(f"edge ({c}, {p}) not in the graph")

    # every node must reach the root without revisiting (acyclic + connected)
    status: dict[int, int] = {t.root: 2}
    for start in t.parent:
        path = []
        x = start
        while status.get(x, 0) == 0:
            status[x] = 1
            path.append(x)
            if x not in t.parent:
                issues.append(f"node {x} has no path to the root")
                break
            x = t.parent[x]
        else:
            if status.get(x) == 1:
                issues.append(f"cycle through node {x}")
        for y in path:
            status[y] = 2

    missing = sorted(r.node_set - t.node_set)
    if missing:
        issues.append(f"reported nodes not spanned: {missing}")

    # order-respecting: reported timestamps never decrease along any
    # root-to-node path
    tof = r.time_of
    inherited: dict[int, float] = {t.root: tof.get(t.root, -math.inf)}

    def label_of(x: int) -> float:
        chain = []
        while x not in inherited:
            chain.append(x)
            x = t.parent[x]
        lab = inherited[x]
        for y in reversed(chain):
            ty = tof.get(y)
            if ty is not None:
                if ty < lab:
                    issues.append(
                        f"path to reported node {y} (t={ty}) passes a later "
                        f"report (t={lab})")
                lab = max(lab, ty)
            inherited[y] = lab
        return lab

    if not issues:
        for x in sorted(t.parent):
            label_of(x)
    return issues


def is_feasible(t: ReconstructedTree, g: Graph, r: ReportSet) -> bool:
    return not feasibility_violations(t, g, r)
