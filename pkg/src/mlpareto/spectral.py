"""Ratio-cut objective and spectral bisection of a single layer."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DegeneratePartitionError, DimensionError, SizeError
from .graph import Layer, Partition, as_labels, connected_components, laplacian

SPECTRAL_SWEEP = "spectral-sweep"
COMPONENT_SPLIT = "component-split"


@dataclass(frozen=True)
class BisectionResult:
    partition: Partition
    objective_value: float
    fiedler_value: float
    method_tag: str


def _bipartition_labels(layer: Layer, partition) -> np.ndarray:
    labels = as_labels(partition)
    if len(labels) != layer.node_count:
        raise DimensionError(
            f"partition has {len(labels)} entries, layer has {layer.node_count} nodes"
        )
    if labels.size and not np.isin(labels, (1, 2)).all():
        raise ValueError("bipartition labels must be 1 or 2")
    return labels


def cut_value(layer: Layer, partition) -> float:
    """Total weight of edges whose endpoints lie in different parts."""
    labels = _bipartition_labels(layer, partition)
    crossing = labels[layer.rows] != labels[layer.cols]
    return float(layer.weights[crossing].sum())


def ratio_cut(layer: Layer, partition) -> float:
    """Half the cut weight divided by each part size, summed over both parts.

    Raises
    ------
    DegeneratePartitionError
        If either part is empty.
    """
    labels = _bipartition_labels(layer, partition)
    n1 = int(np.count_nonzero(labels == 1))
    n2 = len(labels) - n1
    if n1 == 0 or n2 == 0:
        raise DegeneratePartitionError("ratio cut is undefined with an empty part")
    cut = cut_value(layer, labels)
    return 0.5 * (cut / n1 + cut / n2)


def _fallback_vector(basis: np.ndarray, p: int) -> np.ndarray | None:
    """First coordinate vector with a usable component outside ``basis``."""
    for k in range(p):
        e = np.zeros(p)
        e[k] = 1.0
        for _ in range(2):
            e -= basis.T @ (basis @ e)
        norm = np.linalg.norm(e)
        if norm > 1e-8:
            return e / norm
    return None


def fiedler_vector(layer: Layer, tol: float = 1e-8, max_iter: int | None = None):
    """Second-smallest eigenpair of the layer Laplacian.

    Lanczos iteration with full reorthogonalization on the complement of the
    constant vector, started from ``sin(i + 1)``. If the Krylov space becomes
    invariant early the basis is extended with the next coordinate direction,
    so after ``p - 1`` steps the result is exact up to rounding.

    The caller is responsible for checking that the layer is connected;
    otherwise the returned eigenvalue is 0.

    Returns
    -------
    (float, np.ndarray)
        Eigenvalue and unit eigenvector orthogonal to the all-ones vector.
    """
    p = layer.node_count
    if p < 2:
        raise SizeError("fiedler_vector needs at least two nodes")
    if max_iter is None:
        max_iter = int(10 * p * math.log(p)) + 1000
    L = laplacian(layer)
    ones = np.full(p, 1.0 / math.sqrt(p))

    q = np.sin(np.arange(1, p + 1, dtype=float))
    q -= ones * (ones @ q)
    q /= np.linalg.norm(q)

    basis = [ones]
    alphas: list[float] = []
    betas: list[float] = []
    prev = np.zeros(p)
    beta = 0.0
    scale = max(1.0, float(np.abs(L).sum(axis=1).max()))
    residual = math.inf
    theta, x = 0.0, q

    for it in range(max_iter):
        basis.append(q)
        w = L @ q
        alpha = float(q @ w)
        w = w - alpha * q - beta * prev
        Q = np.array(basis)
        for _ in range(2):
            w -= Q.T @ (Q @ w)
        alphas.append(alpha)
        m = len(alphas)
        beta = float(np.linalg.norm(w))
        exhausted = m >= p - 1

        restart = False
        if beta <= 1e-10 * scale and not exhausted:
            nxt = _fallback_vector(Q, p)
            if nxt is None:
                exhausted = True
            else:
                restart = True
                beta = 0.0

        if exhausted or restart or m % 5 == 0 or it == max_iter - 1:
            T = np.diag(alphas)
            if m > 1:
                off = np.array(betas)
                T += np.diag(off, 1) + np.diag(off, -1)
            vals, vecs = np.linalg.eigh(T)
            theta = float(vals[0])
            x = Q[1:].T @ vecs[:, 0]
            x -= ones * (ones @ x)
            x /= np.linalg.norm(x)
            residual = float(np.linalg.norm(L @ x - theta * x))
            if residual <= tol * max(1.0, abs(theta)):
                break
            if exhausted:
                break

        betas.append(beta)
        prev = q
        q = nxt if restart else w / beta
    else:
        it = max_iter

    if residual > tol * max(1.0, abs(theta)):
        raise ConvergenceError(
            f"Lanczos stopped after {it + 1} steps with residual {residual:.3e}", residual
        )
    pivot = int(np.argmax(np.abs(x) > 1e-12))
    if x[pivot] < 0:
        x = -x
    return max(theta, 0.0), x


def _pick_better(value, size, best_value, best_size, p) -> bool:
    """Sweep tie rule: lower objective, then more balanced, then smaller prefix."""
    if best_value is None:
        return True
    if math.isclose(value, best_value, rel_tol=1e-12, abs_tol=1e-15):
        imbalance, best_imbalance = abs(2 * size - p), abs(2 * best_size - p)
        if imbalance != best_imbalance:
            return imbalance < best_imbalance
        return size < best_size
    return value < best_value


def sweep_cut(layer: Layer, order) -> Partition:
    """Best prefix split of ``order`` under the ratio-cut objective.

    Nodes in the winning prefix get label 1, the rest label 2.
    """
    p = layer.node_count
    A = layer.adjacency
    in_first = np.zeros(p, dtype=bool)
    cut = 0.0
    best_value, best_size = None, 0
    for size, v in enumerate(order[:-1], start=1):
        row = A.getrow(v)
        nbrs, wts = row.indices, row.data
        to_first = wts[in_first[nbrs]].sum()
        cut += wts.sum() - 2.0 * to_first
        in_first[v] = True
        value = 0.5 * (cut / size + cut / (p - size))
        if _pick_better(value, size, best_value, best_size, p):
            best_value, best_size = value, size
    labels = np.full(p, 2, dtype=np.int64)
    labels[np.asarray(order[:best_size])] = 1
    return Partition(labels)


def component_split(components: list[list[int]], p: int) -> Partition:
    """Zero-cut bipartition that greedily balances whole components."""
    ordered = sorted(components, key=lambda c: (-len(c), min(c)))
    labels = np.zeros(p, dtype=np.int64)
    sizes = [0, 0]
    for comp in ordered:
        part = 0 if sizes[0] <= sizes[1] else 1
        labels[comp] = part + 1
        sizes[part] += len(comp)
    return Partition(labels)


def spectral_bisect(layer: Layer, tol: float = 1e-8) -> BisectionResult:
    """Ratio-cut bipartition of one layer.

    Connected layers are split by a sweep over the Fiedler-vector order.
    Disconnected layers get a zero-cut split built from whole components.
    """
    p = layer.node_count
    if p < 2:
        raise SizeError(f"cannot bisect a layer with {p} node(s)")
    components = connected_components(layer)
    if len(components) > 1:
        part = component_split(components, p)
        return BisectionResult(part, ratio_cut(layer, part), 0.0, COMPONENT_SPLIT)
    lam, vec = fiedler_vector(layer, tol=tol)
    order = np.argsort(vec, kind="stable")
    part = sweep_cut(layer, order)
    return BisectionResult(part, ratio_cut(layer, part), lam, SPECTRAL_SWEEP)
