"""Plain-text file formats.

Every writer emits UTF-8 with LF line endings and six fractional digits, and
goes through :func:`atomic_write` so readers never observe a partial file.
"""
from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import FormatError
from .graph import Layer, Partition

NODES_HEADER = "# nodes="


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _data_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if line.strip():
                yield lineno, line


def format_layer(layer: Layer) -> str:
    lines = [f"{NODES_HEADER}{layer.node_count}"]
    lines += [f"{i}\t{j}\t{w:.6f}" for i, j, w in layer.edges()]
    return "\n".join(lines) + "\n"


def write_layer(path, layer: Layer) -> None:
    atomic_write(path, format_layer(layer))


def read_edge_list(path) -> tuple[int | None, list[tuple[int, int, float]]]:
    """Edges from ``i<TAB>j<TAB>w`` lines and the declared node count, if any."""
    declared = None
    edges = []
    for lineno, line in _data_lines(path):
        if line.startswith("#"):
            if line.startswith(NODES_HEADER):
                declared = int(line[len(NODES_HEADER):])
            continue
        fields = line.split("\t")
        if len(fields) == 2:
            fields.append("1")
        try:
            i, j, w = int(fields[0]), int(fields[1]), float(fields[2])
        except (ValueError, IndexError):
            raise FormatError(f"{path}:{lineno}: expected i<TAB>j<TAB>w", [lineno]) from None
        if len(fields) != 3:
            raise FormatError(f"{path}:{lineno}: expected 3 fields", [lineno])
        edges.append((i, j, w))
    return declared, edges


def read_layer(path, node_count: int | None = None, name: str | None = None) -> Layer:
    """Load a layer; the node count comes from the argument, the header, or the edges."""
    declared, edges = read_edge_list(path)
    if node_count is None:
        node_count = declared
    if node_count is None:
        node_count = max((max(i, j) for i, j, _ in edges), default=-1) + 1
    return Layer.from_edges(node_count, edges, name=name or Path(path).stem)


def write_names(path, names: Sequence[str]) -> None:
    atomic_write(path, "".join(f"{k}\t{n}\n" for k, n in enumerate(names)))


def read_names(path) -> list[str]:
    entries = {}
    for lineno, line in _data_lines(path):
        if line.startswith("#"):
            continue
        idx, _, name = line.partition("\t")
        try:
            entries[int(idx)] = name
        except ValueError:
            raise FormatError(f"{path}:{lineno}: expected index<TAB>name", [lineno]) from None
    if sorted(entries) != list(range(len(entries))):
        raise FormatError(f"{path}: node indices are not contiguous from 0")
    return [entries[k] for k in range(len(entries))]


def format_partition(partition) -> str:
    labels = partition.labels if isinstance(partition, Partition) else np.asarray(partition)
    return "".join(f"{i}\t{int(c)}\n" for i, c in enumerate(labels))


def write_partition(path, partition) -> None:
    atomic_write(path, format_partition(partition))


def read_partition(path) -> dict[int, int]:
    """Mapping node index -> label from ``index<TAB>label`` lines."""
    out = {}
    for lineno, line in _data_lines(path):
        if line.startswith("#"):
            continue
        fields = line.split("\t")
        try:
            idx, label = int(fields[0]), int(fields[1])
        except (ValueError, IndexError):
            raise FormatError(f"{path}:{lineno}: expected index<TAB>label", [lineno]) from None
        if idx in out:
            raise FormatError(f"{path}:{lineno}: node {idx} listed twice", [lineno])
        out[idx] = label
    return out


def format_front(front) -> str:
    lines = ["#step\tf1\tf2\tselected"]
    for k, c in enumerate(front.candidates):
        mark = 1 if k == front.selected else 0
        lines.append(f"{c.step_index}\t{c.f1:.6f}\t{c.f2:.6f}\t{mark}")
    return "\n".join(lines) + "\n"


def format_ari_csv(values: np.ndarray) -> str:
    return "".join(",".join(f"{v:.6f}" for v in row) + "\n" for row in values)


def format_pgm(values: np.ndarray) -> str:
    """ASCII P2 image mapping ARI -1 to 0 and +1 to 255, one pixel per cell."""
    pixels = np.rint((np.clip(values, -1.0, 1.0) + 1.0) * 127.5).astype(int)
    h, w = pixels.shape
    rows = [" ".join(str(v) for v in row) for row in pixels]
    return f"P2\n{w} {h}\n255\n" + "\n".join(rows) + "\n"
