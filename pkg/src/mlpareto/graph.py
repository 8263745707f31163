"""Multi-layer graph data model.

A :class:`MultiLayerGraph` is a dense node index space ``0..p-1`` shared by
an ordered list of undirected, weighted :class:`Layer` edge sets. Node names
live in a side table so partitions can stay plain integer arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import DimensionError


@dataclass(frozen=True, eq=False)
class Layer:
    """One undirected edge set over ``node_count`` nodes.

    Edges are stored canonically as ``i < j`` with strictly positive weight.
    Use :meth:`from_edges` to build one from arbitrary triples.
    """

    name: str
    node_count: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[Sequence], name: str = "") -> "Layer":
        """Build a layer from ``(i, j)`` or ``(i, j, w)`` tuples.

        Self-loops and zero-weight edges are dropped. Negative weights, out of
        range endpoints, and repeated pairs raise ``ValueError``.
        """
        if node_count < 0:
            raise ValueError("node_count must be nonnegative")
        seen: dict[tuple[int, int], float] = {}
        for edge in edges:
            if len(edge) == 2:
                i, j = edge
                w = 1.0
            else:
                i, j, w = edge
            i, j, w = int(i), int(j), float(w)
            if not (0 <= i < node_count and 0 <= j < node_count):
                raise IndexError(f"edge ({i}, {j}) outside node range [0, {node_count})")
            if not np.isfinite(w) or w < 0:
                raise ValueError(f"edge ({i}, {j}) has invalid weight {w}")
            if i == j or w == 0.0:
                continue
            key = (i, j) if i < j else (j, i)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen[key] = w
        keys = sorted(seen)
        rows = np.array([k[0] for k in keys], dtype=np.int64)
        cols = np.array([k[1] for k in keys], dtype=np.int64)
        weights = np.array([seen[k] for k in keys], dtype=float)
        return cls(name, node_count, rows, cols, weights)

    @property
    def edge_count(self) -> int:
        return len(self.weights)

    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.weights.tolist()))

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric sparse adjacency matrix with zero diagonal."""
        n = self.node_count
        r = np.concatenate([self.rows, self.cols])
        c = np.concatenate([self.cols, self.rows])
        w = np.concatenate([self.weights, self.weights])
        return sparse.csr_matrix((w, (r, c)), shape=(n, n))

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.node_count)
        np.add.at(deg, self.rows, self.weights)
        np.add.at(deg, self.cols, self.weights)
        return deg

    def weight(self, i: int, j: int) -> float:
        return float(self.adjacency[i, j])

    def subgraph(self, nodes: Sequence[int]) -> "Layer":
        """Induced layer on ``nodes``, reindexed to ``0..len(nodes)-1`` in the given order."""
        index = {int(v): k for k, v in enumerate(nodes)}
        kept = [
            (index[i], index[j], w)
            for i, j, w in self.edges()
            if i in index and j in index
        ]
        return Layer.from_edges(len(index), kept, self.name)


@dataclass(frozen=True, eq=False)
class MultiLayerGraph:
    node_count: int
    layers: tuple[Layer, ...]
    node_names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.node_count < 1:
            raise ValueError("a multi-layer graph needs at least one node")
        for layer in self.layers:
            if layer.node_count != self.node_count:
                raise DimensionError(
                    f"layer {layer.name!r} has {layer.node_count} nodes, expected {self.node_count}"
                )
        if self.node_names is not None:
            object.__setattr__(self, "node_names", tuple(self.node_names))
            if len(self.node_names) != self.node_count:
                raise DimensionError("node_names length differs from node_count")

    @property
    def layer_count(self) -> int:
        return len(self.layers)

    def subgraph(self, nodes: Sequence[int]) -> "MultiLayerGraph":
        names = None
        if self.node_names is not None:
            names = [self.node_names[int(v)] for v in nodes]
        return MultiLayerGraph(len(nodes), tuple(l.subgraph(nodes) for l in self.layers), names)


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of every node to a part labelled ``1..K``."""

    labels: np.ndarray = field()

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64).copy()
        if labels.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        if labels.size and labels.min() < 1:
            raise ValueError("labels must be positive integers")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())

    def __repr__(self):
        return f"Partition({self.labels.tolist()})"

    @property
    def k(self) -> int:
        return int(self.labels.max()) if self.labels.size else 0

    @property
    def part_sizes(self) -> np.ndarray:
        """Node count per label ``1..K`` (index 0 is label 1)."""
        return np.bincount(self.labels, minlength=self.k + 1)[1:]

    def members(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.labels == label)

    def swapped(self) -> "Partition":
        """Bipartition with labels 1 and 2 exchanged."""
        return Partition(3 - self.labels)


def as_labels(partition) -> np.ndarray:
    if isinstance(partition, Partition):
        return partition.labels
    return np.asarray(partition, dtype=np.int64)


def degree_vector(g: MultiLayerGraph, node: int) -> np.ndarray:
    """Weighted degree of ``node`` in each layer."""
    if not 0 <= node < g.node_count:
        raise IndexError(f"node {node} outside [0, {g.node_count})")
    return np.array([layer.degrees[node] for layer in g.layers])


def laplacian(layer: Layer) -> sparse.csr_matrix:
    """Combinatorial Laplacian ``D - A`` as a sparse matrix."""
    return (sparse.diags(layer.degrees) - layer.adjacency).tocsr()


def connected_components(layer: Layer) -> list[list[int]]:
    """Node sets joined by positive-weight edges, ordered by smallest member."""
    parent = list(range(layer.node_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in zip(layer.rows.tolist(), layer.cols.tolist()):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[int]] = {}
    for v in range(layer.node_count):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])
