"""Approximate Pareto front between the per-layer ratio-cut optima.

The walk starts at the first layer's spectral bisection, then moves one node
at a time toward the second layer's bisection. Each step flips whichever
disagreeing node raises the second layer's ratio cut the least. Every
visited partition is scored on both layers, and the visited set is filtered
down to its non-dominated members.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DegeneratePartitionError, EmptyInputError, SizeError
from .graph import MultiLayerGraph, Partition, as_labels
from .spectral import BisectionResult, ratio_cut, spectral_bisect

INF = math.inf


@dataclass(frozen=True)
class FrontCandidate:
    partition: Partition
    objectives: tuple[float, float]
    step_index: int

    @property
    def f1(self) -> float:
        return self.objectives[0]

    @property
    def f2(self) -> float:
        return self.objectives[1]


@dataclass(frozen=True)
class ParetoFront:
    """Non-dominated walk candidates plus the chosen compromise.

    ``walk`` keeps every visited candidate in step order and ``bisections``
    holds the two single-layer optima the walk connected.
    """

    candidates: list[FrontCandidate]
    selected: int
    walk: list[FrontCandidate] = field(default_factory=list)
    bisections: tuple[BisectionResult, ...] = ()

    @property
    def selected_candidate(self) -> FrontCandidate:
        return self.candidates[self.selected]


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True if ``a`` is no worse than ``b`` on both objectives and better on one."""
    return a[0] <= b[0] and a[1] <= b[1] and (a[0] < b[0] or a[1] < b[1])


def nondominated_filter(points: Sequence[FrontCandidate]) -> list[FrontCandidate]:
    """First Pareto front of ``points`` under minimization.

    Points with identical objectives are all kept. The result is ordered by
    ``f1``, then ``f2``, then ``step_index``.

    Two objectives allow a single sorted pass. Within a run of equal ``f1``
    only the smallest ``f2`` can survive, and it survives only if it beats
    every ``f2`` seen at a strictly smaller ``f1``.
    """
    if len(points) == 0:
        raise EmptyInputError("nondominated_filter needs at least one candidate")
    ordered = sorted(points, key=lambda c: (c.f1, c.f2, c.step_index))
    front: list[FrontCandidate] = []
    best_f2 = None
    start = 0
    while start < len(ordered):
        stop = start
        f1 = ordered[start].f1
        while stop < len(ordered) and ordered[stop].f1 == f1:
            stop += 1
        group_min = ordered[start].f2
        if best_f2 is None or group_min < best_f2:
            front.extend(c for c in ordered[start:stop] if c.f2 == group_min)
            best_f2 = group_min
        start = stop
    return front


def select_midpoint(front, target: tuple[float, float] = (0.5, 0.5)) -> int:
    """Index of the candidate closest to the middle of the normalized front.

    Each objective is min-max scaled to [0, 1] over the front (a constant
    objective scales to 0). Distance to ``target`` is the larger of the two
    coordinate gaps. Ties go to the smaller scaled ``f1``, then to the
    earlier walk step.
    """
    candidates = front.candidates if isinstance(front, ParetoFront) else list(front)
    if not candidates:
        raise EmptyInputError("cannot select from an empty front")
    obj = np.array([c.objectives for c in candidates], dtype=float)
    lo, hi = obj.min(axis=0), obj.max(axis=0)
    span = hi - lo
    scaled = np.zeros_like(obj)
    for k in range(2):
        if span[k] > 0 and np.isfinite(span[k]):
            scaled[:, k] = (obj[:, k] - lo[k]) / span[k]
    dist = np.max(np.abs(scaled - np.asarray(target)), axis=1)

    def key(idx):
        return (round(float(dist[idx]), 12), round(float(scaled[idx, 0]), 12),
                candidates[idx].step_index)

    return min(range(len(candidates)), key=key)


def align_labels(reference, labels) -> np.ndarray:
    """Swap labels 1 and 2 in ``labels`` if that increases agreement with ``reference``.

    An exact tie keeps the original labelling.
    """
    ref, lab = as_labels(reference), as_labels(labels)
    agree = int(np.count_nonzero(ref == lab))
    if len(ref) - agree > agree:
        return 3 - lab
    return lab.copy()


def _ratio(cut: float, n1: int, p: int) -> float:
    if n1 == 0 or n1 == p:
        return INF
    return 0.5 * (cut / n1 + cut / (p - n1))


class _LayerState:
    """Cut bookkeeping for one layer while nodes change sides."""

    def __init__(self, layer, labels):
        self.A = layer.adjacency
        self.degree = layer.degrees
        in_first = (labels == 1).astype(float)
        self.to_first = self.A @ in_first
        crossing = labels[layer.rows] != labels[layer.cols]
        self.cut = float(layer.weights[crossing].sum())

    def deltas(self, nodes, labels):
        """Change in cut if each of ``nodes`` switched sides."""
        to_first = self.to_first[nodes]
        to_second = self.degree[nodes] - to_first
        leaving_first = labels[nodes] == 1
        # Edges to the side being left start crossing; edges to the destination stop.
        return np.where(leaving_first, to_first - to_second, to_second - to_first)

    def flip(self, node, delta, moving_to_first):
        self.cut += float(delta)
        row = self.A.getrow(node)
        sign = 1.0 if moving_to_first else -1.0
        self.to_first[row.indices] += sign * row.data


def flip_costs(g: MultiLayerGraph, current, target) -> dict[int, float]:
    """Second-layer cost of moving each disagreeing node to its target label.

    Cost is ``f2(C with i flipped) - f2(C)`` using incremental cut updates.
    A flip that would empty a part costs ``inf``.
    """
    labels = as_labels(current).copy()
    target = as_labels(target)
    nodes = np.flatnonzero(labels != target)
    state = _LayerState(g.layers[1], labels)
    p = g.node_count
    n1 = int(np.count_nonzero(labels == 1))
    f2 = _ratio(state.cut, n1, p)
    deltas = state.deltas(nodes, labels)
    out = {}
    for node, delta in zip(nodes.tolist(), deltas.tolist()):
        new_n1 = n1 - 1 if labels[node] == 1 else n1 + 1
        new_f2 = _ratio(state.cut + delta, new_n1, p)
        out[node] = new_f2 if not math.isfinite(f2) or not math.isfinite(new_f2) else new_f2 - f2
    return out


def _exact_objectives(g: MultiLayerGraph, labels) -> tuple[float, float]:
    try:
        return (ratio_cut(g.layers[0], labels), ratio_cut(g.layers[1], labels))
    except DegeneratePartitionError:
        return (INF, INF)


def pareto_walk(
    g: MultiLayerGraph,
    target: tuple[float, float] = (0.5, 0.5),
) -> ParetoFront:
    """Walk from the first layer's bisection to the second's and keep the Pareto set.

    Parameters
    ----------
    g : MultiLayerGraph
        Exactly two layers over at least two nodes.
    target : tuple of float
        Normalized point used by :func:`select_midpoint`.
    """
    if g.layer_count != 2:
        raise ValueError(f"pareto_walk needs exactly 2 layers, got {g.layer_count}")
    p = g.node_count
    if p < 2:
        raise SizeError("pareto_walk needs at least two nodes")
    first = spectral_bisect(g.layers[0])
    second = spectral_bisect(g.layers[1])
    labels = first.partition.labels.copy()
    goal = align_labels(labels, second.partition.labels)

    states = [_LayerState(layer, labels) for layer in g.layers]
    n1 = int(np.count_nonzero(labels == 1))
    walk = [FrontCandidate(Partition(labels), _exact_objectives(g, labels), 0)]
    remaining = np.flatnonzero(labels != goal)

    step = 0
    while remaining.size:
        step += 1
        f2_now = _ratio(states[1].cut, n1, p)
        deltas2 = states[1].deltas(remaining, labels)
        leaving_first = labels[remaining] == 1
        new_n1 = np.where(leaving_first, n1 - 1, n1 + 1)
        degenerate = (new_n1 == 0) | (new_n1 == p)
        safe_n1 = np.clip(new_n1, 1, p - 1)
        new_f2 = 0.5 * ((states[1].cut + deltas2) / safe_n1
                        + (states[1].cut + deltas2) / (p - safe_n1))
        cost = new_f2 - f2_now if math.isfinite(f2_now) else new_f2
        cost = np.where(degenerate, INF, cost)
        pick = int(np.argmin(cost))  # first minimum = smallest node index
        node = int(remaining[pick])

        to_first = not leaving_first[pick]
        for k, state in enumerate(states):
            delta = deltas2[pick] if k == 1 else state.deltas(np.array([node]), labels)[0]
            state.flip(node, delta, to_first)
        labels[node] = goal[node]
        n1 += 1 if to_first else -1
        remaining = np.delete(remaining, pick)

        if remaining.size == 0:
            objectives = _exact_objectives(g, labels)
        else:
            f1 = _ratio(states[0].cut, n1, p)
            f2 = _ratio(states[1].cut, n1, p)
            objectives = (INF, INF) if math.isinf(f1) else (f1, f2)
        walk.append(FrontCandidate(Partition(labels), objectives, step))

    front = nondominated_filter(walk)
    return ParetoFront(front, select_midpoint(front, target), walk, (first, second))


_BRANCH_FAILURES = (SizeError, ConvergenceError, DegeneratePartitionError)


def recursive_communities(
    g: MultiLayerGraph,
    max_depth: int = 1,
    min_size: int = 1,
    target: tuple[float, float] = (0.5, 0.5),
) -> Partition:
    """Split ``g`` repeatedly with :func:`pareto_walk`.

    The first split is always made. After that a part is split again only
    while it has at least ``2 * min_size`` nodes and the depth is below
    ``max_depth``. Parts are numbered depth-first with the label-1 side
    first, so ``max_depth=1`` returns the walk's selected bipartition as is.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    if min_size < 1:
        raise ValueError("min_size must be at least 1")

    def bisect(nodes: np.ndarray) -> list[np.ndarray]:
        front = pareto_walk(g.subgraph(nodes), target)
        labels = front.selected_candidate.partition.labels
        return [nodes[labels == 1], nodes[labels == 2]]

    def descend(nodes: np.ndarray, depth: int) -> list[np.ndarray]:
        if depth >= max_depth or len(nodes) < 2 * min_size:
            return [nodes]
        try:
            parts = bisect(nodes)
        except _BRANCH_FAILURES:
            return [nodes]
        return [leaf for part in parts for leaf in descend(part, depth + 1)]

    everything = np.arange(g.node_count)
    leaves = [leaf for part in bisect(everything) for leaf in descend(part, 1)]
    labels = np.zeros(g.node_count, dtype=np.int64)
    for k, leaf in enumerate(leaves, start=1):
        labels[leaf] = k
    return Partition(labels)
