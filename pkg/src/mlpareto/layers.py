"""Daily two-layer networks from (day, user, tag) usage events.

The user layer links two tags when one user used both on the same day. The
volume layer links two tags whose daily counts are strongly positively
correlated over a trailing window.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError, InsufficientHistoryError
from .graph import Layer

log = logging.getLogger(__name__)

DEFAULT_WINDOW = 5
# atanh threshold for a positive correlation; equals 1.95996 / sqrt(window - 3) at window 5.
DEFAULT_Z_THRESHOLD = 1.3859
_R_CLAMP = 1.0 - 1e-12


@dataclass(frozen=True)
class EventRecord:
    day: int
    user: str
    tag: str

    def __post_init__(self):
        if self.day < 0:
            raise ValueError(f"negative day {self.day}")
        if not self.user or not self.tag:
            raise ValueError("user and tag must be nonempty")


@dataclass(frozen=True)
class VolumeSeries:
    tag: str
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if (counts < 0).any():
            raise ValueError(f"negative volume for tag {self.tag!r}")
        object.__setattr__(self, "counts", counts)


def build_user_layer(events: Iterable[EventRecord], day: int, tags: Sequence[str]) -> Layer:
    """Co-usage layer for ``day``: tags i and j are linked if some user used both."""
    if len(set(tags)) != len(tags):
        raise ValueError("tags must be unique")
    index = {t: k for k, t in enumerate(tags)}
    by_user: dict[str, set[int]] = {}
    for ev in events:
        if ev.day == day and ev.tag in index:
            by_user.setdefault(ev.user, set()).add(index[ev.tag])
    pairs = set()
    for used in by_user.values():
        pairs.update(itertools.combinations(sorted(used), 2))
    return Layer.from_edges(len(tags), sorted(pairs), name="user")


def _window(counts: np.ndarray, day: int, window: int) -> np.ndarray:
    if window < 2:
        raise ValueError("window must be at least 2")
    if day < window - 1:
        raise InsufficientHistoryError(
            f"day {day} has fewer than {window} days of history"
        )
    if day >= len(counts):
        raise IndexError(f"day {day} beyond series of length {len(counts)}")
    return np.asarray(counts[day - window + 1 : day + 1], dtype=float)


def pearson_window(x: VolumeSeries, y: VolumeSeries, day: int, window: int = DEFAULT_WINDOW):
    """Sample Pearson correlation over days ``day - window + 1 .. day``.

    Returns ``None`` when either series is constant over the window.
    """
    a = _window(x.counts, day, window)
    b = _window(y.counts, day, window)
    da, db = a - a.mean(), b - b.mean()
    sa, sb = math.sqrt(da @ da), math.sqrt(db @ db)
    if sa == 0.0 or sb == 0.0:
        return None
    r = float(da @ db) / (sa * sb)
    return max(-1.0, min(1.0, r))


def fisher_z(r: float) -> float:
    """Fisher transformation ``atanh(r)``; ``|r|`` must be below 1."""
    if not -1.0 < r < 1.0:
        raise ValueError(f"fisher_z is undefined for r={r}")
    return math.atanh(r)


def build_volume_layer(
    series: Sequence[VolumeSeries],
    day: int,
    window: int = DEFAULT_WINDOW,
    z_threshold: float = DEFAULT_Z_THRESHOLD,
) -> Layer:
    """Link tag pairs whose windowed volume correlation exceeds the threshold.

    Only positive association counts: an edge needs ``atanh(r) > z_threshold``.
    Pairs with an undefined correlation get no edge.
    """
    p = len(series)
    if day < window - 1:
        raise InsufficientHistoryError(f"day {day} has fewer than {window} days of history")
    edges = []
    for i in range(p):
        for j in range(i + 1, p):
            r = pearson_window(series[i], series[j], day, window)
            if r is None:
                continue
            r = max(-_R_CLAMP, min(_R_CLAMP, r))
            if fisher_z(r) > z_threshold:
                edges.append((i, j))
    return Layer.from_edges(p, edges, name="volume")


def _parse_line(line: str) -> EventRecord | None:
    fields = line.split("\t")
    if len(fields) != 3:
        fields = line.split()
    if len(fields) != 3:
        return None
    day, user, tag = (f.strip() for f in fields)
    try:
        return EventRecord(int(day), user, tag)
    except ValueError:
        return None


def ingest_events(source, max_error_rate: float = 0.01):
    """Parse an events file or stream of ``day<TAB>user<TAB>tag`` lines.

    Blank lines and ``#`` comments are skipped. Malformed lines are logged
    and dropped unless they exceed ``max_error_rate`` of the data lines.

    Returns
    -------
    events : list of EventRecord
    volumes : list of VolumeSeries
        One per tag, with one count per day from 0 to the last observed day.
    tags : list of str
        Sorted tag names, aligned with ``volumes``.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return ingest_events(fh, max_error_rate)

    events: list[EventRecord] = []
    bad: list[int] = []
    total = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        total += 1
        ev = _parse_line(line)
        if ev is None:
            bad.append(lineno)
        else:
            events.append(ev)
    if bad:
        log.warning("skipped %d malformed event line(s): %s", len(bad), bad[:20])
        if len(bad) > max_error_rate * total:
            raise FormatError(
                f"{len(bad)} of {total} event lines are malformed (lines {bad[:20]})", bad
            )

    tags = sorted({ev.tag for ev in events})
    days = max((ev.day for ev in events), default=-1) + 1
    index = {t: k for k, t in enumerate(tags)}
    counts = np.zeros((len(tags), days), dtype=np.int64)
    for ev in events:
        counts[index[ev.tag], ev.day] += 1
    volumes = [VolumeSeries(t, counts[k]) for k, t in enumerate(tags)]
    return events, volumes, tags
