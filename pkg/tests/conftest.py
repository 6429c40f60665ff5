import numpy as np
import pytest

from castree.graph import Graph, ReportSet


def graph_of(n, edges):
    return Graph.from_edges(n, edges)


def path_graph(n):
    return graph_of(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return graph_of(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves):
    return graph_of(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def reports(*entries):
    return ReportSet.of(entries)


@pytest.fixture
def gadget():
    """5-node instance where the direct route between terminals breaks the
    reporting order: reports (0 at t=0, 2 at t=1, 1 at t=2), so the path
    0-1-2 would visit terminal 1 (t=2) before terminal 2 (t=1)."""
    g = graph_of(5, [(0, 1), (1, 2), (0, 3), (3, 4), (4, 2), (4, 1)])
    r = reports((0, 0.0), (2, 1.0), (1, 2.0))
    return g, r


def random_connected_graph(rng, n, extra_edges=None):
    """Random tree plus extra random edges; always connected."""
    edges = [(int(rng.integers(i)), i) for i in range(1, n)]
    if extra_edges is None:
        extra_edges = int(rng.integers(0, n))
    tried = 0
    while extra_edges > 0 and tried < 10 * n:
        tried += 1
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e not in edges and (e[1], e[0]) not in edges:
            edges.append(e)
            extra_edges -= 1
    return graph_of(n, edges)
