"""Evaluation measures: tree size, node precision/recall, order accuracy."""

from __future__ import annotations

from dataclasses import dataclass

from .reconstruct import ReconstructedTree
from .simulate import Cascade


@dataclass(frozen=True)
class MetricRecord:
    tree_size: int
    precision: float
    recall: float
    order_accuracy: float | None  # None for edgeless trees
    runtime_ms: float


def tree_size(t: ReconstructedTree) -> int:
    return len(t.parent)


def node_precision_recall(t: ReconstructedTree, c: Cascade) -> tuple[float, float]:
    """Precision and recall of the tree's node set against the truly
    infected set."""
    infected = set(int(u) for u in c.infected)
    if not infected:
        raise ValueError("cascade has no infected nodes")
    nodes = t.node_set
    hit = len(nodes & infected)
    return hit / len(nodes), hit / len(infected)


def order_accuracy(t: ReconstructedTree, c: Cascade) -> float | None:
    """Fraction of parent->child edges whose endpoints were both infected
    with non-decreasing true times; edges touching uninfected nodes count as
    incorrect.  None when the tree has no edges."""
    if not t.parent:
        return None
    correct = 0
    for child, par in t.parent.items():
        if (c.is_infected(par) and c.is_infected(child)
                and c.time_of(par) <= c.time_of(child)):
            correct += 1
    return correct / len(t.parent)


def evaluate(t: ReconstructedTree, c: Cascade, runtime_ms: float = 0.0) -> MetricRecord:
    precision, recall = node_precision_recall(t, c)
    return MetricRecord(
        tree_size=tree_size(t),
        precision=precision,
        recall=recall,
        order_accuracy=order_accuracy(t, c),
        runtime_ms=runtime_ms,
    )
