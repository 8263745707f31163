"""Partition comparison and a planted-partition benchmark generator."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .graph import Layer, MultiLayerGraph, Partition, as_labels


@dataclass(frozen=True)
class AriMatrix:
    values: np.ndarray
    day_ids: list

    def __len__(self):
        return len(self.day_ids)


def _pairs(x) -> int:
    x = np.asarray(x, dtype=object)
    return int((x * (x - 1) // 2).sum())


def _contingency(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def adjusted_rand_index(a, b) -> float:
    """Hubert-Arabie adjusted Rand index of two labelings.

    Labels can be any integers; only the grouping matters. When the chance
    correction leaves a zero denominator, returns 1.0 for identical
    groupings and 0.0 otherwise.
    """
    a, b = as_labels(a), as_labels(b)
    if len(a) != len(b):
        raise DimensionError(f"partitions have {len(a)} and {len(b)} nodes")
    n = len(a)
    if n == 0:
        return 1.0
    table = _contingency(a, b)
    same = bool((np.count_nonzero(table, axis=0) == 1).all()
                and (np.count_nonzero(table, axis=1) == 1).all())
    # Scaled by 2 * C(n, 2) so everything stays integer until the final division.
    index = _pairs(table)
    row = _pairs(table.sum(axis=1))
    col = _pairs(table.sum(axis=0))
    total = n * (n - 1) // 2
    numerator = 2 * (index * total - row * col)
    denominator = (row + col) * total - 2 * row * col
    if denominator == 0:
        return 1.0 if same else 0.0
    return numerator / denominator


def ari_matrix(partitions: Sequence, day_ids: Sequence | None = None) -> AriMatrix:
    """Pairwise ARI between every two partitions in ``partitions``."""
    labels = [as_labels(p) for p in partitions]
    if not labels:
        raise ValueError("ari_matrix needs at least one partition")
    sizes = {len(x) for x in labels}
    if len(sizes) > 1:
        raise DimensionError(f"partitions have mixed node counts {sorted(sizes)}")
    d = len(labels)
    values = np.eye(d)
    for s in range(d):
        for t in range(s + 1, d):
            values[s, t] = values[t, s] = adjusted_rand_index(labels[s], labels[t])
    ids = list(day_ids) if day_ids is not None else list(range(d))
    if len(ids) != d:
        raise ValueError("day_ids length differs from number of partitions")
    return AriMatrix(values, ids)


@dataclass(frozen=True)
class SyntheticSpec:
    """Two-layer planted-partition model.

    ``p_in`` and ``p_out`` hold one probability per layer.
    """

    planted: Partition
    p_in: tuple[float, float]
    p_out: tuple[float, float]
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.planted, Partition):
            object.__setattr__(self, "planted", Partition(self.planted))
        if len(self.p_in) != 2 or len(self.p_out) != 2:
            raise ValueError("p_in and p_out need one value per layer")
        for pin, pout in zip(self.p_in, self.p_out):
            if not 0.0 <= pout <= pin <= 1.0:
                raise ValueError(f"need 0 <= p_out <= p_in <= 1, got p_in={pin}, p_out={pout}")

    @property
    def p(self) -> int:
        return len(self.planted)


def _splitmix(x: np.ndarray) -> np.ndarray:
    x = x + np.uint64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def pair_uniforms(seed: int, layer: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) draws keyed by ``(seed, layer, i, j)``, independent of call order."""
    with np.errstate(over="ignore"):
        h = _splitmix(np.full(np.shape(i), np.uint64(seed & 0xFFFFFFFFFFFFFFFF)))
        h = _splitmix(h ^ np.uint64(layer))
        h = _splitmix(h ^ np.asarray(i, dtype=np.uint64))
        h = _splitmix(h ^ np.asarray(j, dtype=np.uint64))
    return (h >> np.uint64(11)).astype(np.float64) / float(1 << 53)


def generate_synthetic(spec: SyntheticSpec) -> MultiLayerGraph:
    """Sample a two-layer graph whose layers share ``spec.planted``."""
    p = spec.p
    labels = spec.planted.labels
    i, j = np.triu_indices(p, k=1)
    same = labels[i] == labels[j]
    layers = []
    for k in range(2):
        u = pair_uniforms(spec.seed, k, i, j)
        prob = np.where(same, spec.p_in[k], spec.p_out[k])
        keep = u < prob
        layers.append(Layer.from_edges(p, zip(i[keep].tolist(), j[keep].tolist()),
                                       name=f"layer{k + 1}"))
    return MultiLayerGraph(p, tuple(layers))


def planted_blocks(p: int, k: int) -> Partition:
    """Contiguous, near-equal blocks ``1..k``."""
    return Partition(np.arange(p) * k // p + 1)
