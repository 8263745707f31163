import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mlpareto.graph import Layer, MultiLayerGraph  # noqa: E402

BRIDGE_TRIANGLES = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]


@pytest.fixture
def bridge_layer():
    return Layer.from_edges(6, BRIDGE_TRIANGLES, name="bridge")


@pytest.fixture
def path4():
    return Layer.from_edges(4, [(0, 1), (1, 2), (2, 3)], name="p4")


@pytest.fixture
def triangle():
    return Layer.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def k_n(n):
    return Layer.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def two_layer(a, b):
    return MultiLayerGraph(a.node_count, (a, b))


def write_day_sequence(directory, days=6, change_day=3, p=40, seed=1):
    """Synthetic daily layer pairs whose planted split changes at ``change_day``."""
    import numpy as np

    from mlpareto import formats
    from mlpareto.analysis import SyntheticSpec, generate_synthetic, planted_blocks
    from mlpareto.graph import Partition

    before = planted_blocks(p, 2)
    after = Partition(np.arange(p) % 2 + 1)
    truths = []
    for day in range(days):
        planted = before if day < change_day else after
        spec = SyntheticSpec(planted, (0.9, 0.9), (0.05, 0.05), seed * 1000 + day)
        g = generate_synthetic(spec)
        formats.write_layer(directory / f"day{day}.user.tsv", g.layers[0])
        formats.write_layer(directory / f"day{day}.volume.tsv", g.layers[1])
        truths.append(planted)
    return truths


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test checks")


def pytest_runtest_logreport(report):
    label = getattr(report, "criterion", None)
    if label is None:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _ACCEPTANCE.get(label, "PASS")
        _ACCEPTANCE[label] = "PASS" if prev == "PASS" and report.outcome == "passed" else "FAIL"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{_ACCEPTANCE[label]}  {label}")
