import io
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlpareto.errors import FormatError, InsufficientHistoryError
from mlpareto.layers import (
    EventRecord,
    VolumeSeries,
    build_user_layer,
    build_volume_layer,
    fisher_z,
    ingest_events,
    pearson_window,
)
from oracles import two_pass_pearson


def vs(tag, counts):
    return VolumeSeries(tag, np.array(counts))


def test_user_layer_three_tag_example():
    tags = ["#DC", "#ICASSP2015", "#SystSci"]
    events = [
        EventRecord(0, "User1", "#ICASSP2015"), EventRecord(0, "User1", "#SystSci"),
        EventRecord(0, "User2", "#ICASSP2015"), EventRecord(0, "User2", "#DC"),
    ]
    layer = build_user_layer(events, 0, tags)
    named = {(tags[i], tags[j]) for i, j, _ in layer.edges()}
    assert named == {("#ICASSP2015", "#SystSci"), ("#DC", "#ICASSP2015")}


def test_user_layer_empty_day_and_triangle():
    tags = ["a", "b", "c"]
    events = [EventRecord(1, "u", t) for t in tags]
    assert build_user_layer(events, 0, tags).edge_count == 0
    assert build_user_layer(events, 1, tags).edges() == [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]


def test_user_layer_ignores_unknown_tags():
    events = [EventRecord(0, "u", "a"), EventRecord(0, "u", "zzz")]
    assert build_user_layer(events, 0, ["a", "b"]).edge_count == 0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.sampled_from("uvw"), st.sampled_from("abcde")), max_size=30),
       st.randoms())
def test_user_layer_order_and_multiplicity_free(rows, rnd):
    events = [EventRecord(*r) for r in rows]
    tags = list("abcde")
    shuffled = events + events
    rnd.shuffle(shuffled)
    for day in range(3):
        a = build_user_layer(events, day, tags)
        b = build_user_layer(shuffled, day, tags)
        assert a.edges() == b.edges()
        assert all(w == 1.0 for *_, w in a.edges())


def test_pearson_examples():
    x = vs("x", [1, 2, 3, 4, 5])
    assert pearson_window(x, x, 4, 5) == pytest.approx(1.0)
    assert pearson_window(x, vs("y", [9, 8, 7, 6, 5]), 4, 5) == pytest.approx(-1.0)
    y = vs("y", [2, 4, 5, 4, 5])
    r = pearson_window(x, y, 4, 5)
    assert r == pytest.approx(two_pass_pearson([1, 2, 3, 4, 5], [2, 4, 5, 4, 5]), abs=1e-12)
    assert r == pytest.approx(math.sqrt(0.6), abs=1e-12)


def test_pearson_trailing_window():
    x = vs("x", [100, 0, 1, 2, 3, 4, 5])
    y = vs("y", [50, 9, 2, 4, 5, 4, 5])
    assert pearson_window(x, y, 6, 5) == pytest.approx(math.sqrt(0.6), abs=1e-12)


def test_pearson_zero_variance_and_history():
    x = vs("x", [1, 2, 3, 4, 5])
    assert pearson_window(x, vs("c", [3, 3, 3, 3, 3]), 4, 5) is None
    with pytest.raises(InsufficientHistoryError):
        pearson_window(x, x, 3, 5)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 50), min_size=5, max_size=5),
       st.lists(st.integers(0, 50), min_size=5, max_size=5),
       st.integers(1, 9), st.integers(0, 20))
def test_pearson_bounded_and_affine_invariant(a, b, scale, shift):
    r = pearson_window(vs("a", a), vs("b", b), 4, 5)
    if r is None:
        return
    assert -1.0 <= r <= 1.0
    assert r == pytest.approx(two_pass_pearson(a, b), abs=1e-12)
    rescaled = vs("a2", [scale * v + shift for v in a])
    assert pearson_window(rescaled, vs("b", b), 4, 5) == pytest.approx(r, abs=1e-12)


def test_fisher_z_examples():
    assert fisher_z(0.0) == 0.0
    assert fisher_z(math.tanh(1.3859)) == pytest.approx(1.3859, abs=1e-12)
    assert math.tanh(1.3859) == pytest.approx(0.8822655782, abs=1e-10)
    for r in np.linspace(-0.99, 0.99, 41):
        assert fisher_z(-r) == -fisher_z(r)
    with pytest.raises(ValueError):
        fisher_z(1.0)


def test_fisher_z_monotone_and_round_trip():
    grid = np.linspace(-0.999, 0.999, 2001)
    z = [fisher_z(r) for r in grid]
    assert all(b > a for a, b in zip(z, z[1:]))
    for r, v in zip(grid, z):
        assert math.tanh(v) == pytest.approx(r, abs=1e-12)


def test_threshold_constant_identity():
    assert 1.95996 / math.sqrt(5 - 3) == pytest.approx(1.3859, abs=1e-4)


def test_volume_layer_examples():
    base = [1, 4, 2, 8, 5]
    series = [vs("a", base), vs("b", base), vs("c", [2, 2, 2, 2, 2])]
    layer = build_volume_layer(series, 4)
    assert layer.edges() == [(0, 1, 1.0)]
    with pytest.raises(InsufficientHistoryError):
        build_volume_layer(series, 3)


def test_volume_layer_negative_correlation_gives_no_edge():
    layer = build_volume_layer([vs("a", [1, 2, 3, 4, 5]), vs("b", [5, 4, 3, 2, 1])], 4)
    assert layer.edge_count == 0


def test_volume_edge_iff_r_above_tanh_threshold():
    rng = np.random.default_rng(5)
    series = [vs(str(k), rng.integers(0, 20, size=5)) for k in range(25)]
    layer = build_volume_layer(series, 4)
    edges = {(i, j) for i, j, _ in layer.edges()}
    bound = math.tanh(1.3859)
    for i in range(25):
        for j in range(i + 1, 25):
            r = pearson_window(series[i], series[j], 4, 5)
            assert ((i, j) in edges) == (r is not None and r > bound)


def test_volume_layer_nested_in_threshold():
    rng = np.random.default_rng(11)
    series = [vs(str(k), rng.integers(0, 10, size=8)) for k in range(30)]
    previous = None
    for z in np.linspace(0.0, 4.0, 17):
        edges = {(i, j) for i, j, _ in build_volume_layer(series, 7, 5, z).edges()}
        if previous is not None:
            assert edges <= previous
        previous = edges


def test_ingest_small_example():
    events, volumes, tags = ingest_events(io.StringIO("0 u1 a\n0 u1 b\n0 u2 a\n"))
    assert tags == ["a", "b"]
    assert [v.counts.tolist() for v in volumes] == [[2], [1]]
    assert build_user_layer(events, 0, tags).edges() == [(0, 1, 1.0)]


def test_ingest_empty_and_comments():
    assert ingest_events(io.StringIO("")) == ([], [], [])
    events, volumes, tags = ingest_events(io.StringIO("# header\n\n2\tu\tt\n"))
    assert volumes[0].counts.tolist() == [0, 0, 1]


def test_ingest_skips_rare_malformed_lines():
    lines = [f"{k % 3}\tu{k}\tt{k % 7}" for k in range(300)]
    lines.insert(10, "0\tonlytwo")
    events, _, _ = ingest_events(io.StringIO("\n".join(lines)))
    assert len(events) == 300


def test_ingest_rejects_frequent_malformed_lines():
    with pytest.raises(FormatError) as info:
        ingest_events(io.StringIO("0\tu\ta\n0\tbad\nx\tu\tb\n"))
    assert info.value.line_numbers == [2, 3]


def test_ingest_missing_file(tmp_path):
    with pytest.raises(OSError):
        ingest_events(tmp_path / "absent.tsv")
