"""Command-line entry point: ``mlpareto <subcommand> ...``.

Summaries go to stdout, diagnostics to stderr. Exit status is 0 only when
every output file was written.
"""
from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from . import formats
from .analysis import SyntheticSpec, adjusted_rand_index, ari_matrix, generate_synthetic, planted_blocks
from .errors import DimensionError, FormatError
from .graph import Layer, MultiLayerGraph, Partition
from .layers import (
    DEFAULT_WINDOW,
    DEFAULT_Z_THRESHOLD,
    build_user_layer,
    build_volume_layer,
    ingest_events,
)
from .pareto import pareto_walk, recursive_communities

log = logging.getLogger("mlpareto")

DAY_FILE = re.compile(r"^day(\d+)\.(user|volume)\.tsv$")
KINDS = ("user", "volume", "combined")


class CliError(Exception):
    pass


def cmd_build_layers(args) -> int:
    events, volumes, tags = ingest_events(args.events, max_error_rate=args.max_error_rate)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    days = len(volumes[0].counts) if volumes else 0
    if days:
        formats.write_names(out / "tags.tsv", tags)
    for day in range(days):
        user = build_user_layer(events, day, tags)
        formats.write_layer(out / f"day{day}.user.tsv", user)
        volume_edges = "-"
        if day >= args.window - 1:
            volume = build_volume_layer(volumes, day, args.window, args.z_threshold)
            formats.write_layer(out / f"day{day}.volume.tsv", volume)
            volume_edges = str(volume.edge_count)
        print(f"day {day}\tnodes {len(tags)}\tuser_edges {user.edge_count}\tvolume_edges {volume_edges}")
    print(f"{days} days")
    return 0


def _load_pair(path1, path2, node_count=None) -> MultiLayerGraph:
    decl1, edges1 = formats.read_edge_list(path1)
    decl2, edges2 = formats.read_edge_list(path2)
    if node_count is None:
        if decl1 is not None and decl2 is not None and decl1 != decl2:
            raise CliError(f"layer files declare {decl1} and {decl2} nodes")
        declared = decl1 if decl1 is not None else decl2
        span = max((max(i, j) for i, j, _ in edges1 + edges2), default=-1) + 1
        node_count = declared if declared is not None else span
    layers = (
        Layer.from_edges(node_count, edges1, name=Path(path1).stem),
        Layer.from_edges(node_count, edges2, name=Path(path2).stem),
    )
    return MultiLayerGraph(node_count, layers)


def _communities(g, max_depth, min_size):
    front = pareto_walk(g)
    if max_depth > 1:
        return front, recursive_communities(g, max_depth, min_size)
    return front, front.selected_candidate.partition


def cmd_detect(args) -> int:
    g = _load_pair(args.layer1, args.layer2, args.nodes)
    front, partition = _communities(g, args.max_depth, args.min_size)
    formats.atomic_write(args.front, formats.format_front(front))
    formats.write_partition(args.partition, partition)
    chosen = front.selected_candidate
    print(
        f"nodes {g.node_count}\twalk {len(front.walk)}\tfront {len(front.candidates)}"
        f"\tselected step {chosen.step_index}\tf1 {chosen.f1:.6f}\tf2 {chosen.f2:.6f}"
        f"\tparts {partition.k}"
    )
    return 0


def _sweep_days(directory: Path) -> list[int]:
    found: dict[int, set[str]] = {}
    for entry in directory.iterdir():
        m = DAY_FILE.match(entry.name)
        if m:
            found.setdefault(int(m.group(1)), set()).add(m.group(2))
    complete = [d for d, kinds in found.items() if len(kinds) == 2]
    if not complete:
        raise CliError(f"no day with both user and volume layers in {directory}")
    first, last = min(complete), max(found)
    gaps = []
    for day in range(first, last + 1):
        missing = {"user", "volume"} - found.get(day, set())
        gaps += [f"day{day}.{kind}.tsv" for kind in sorted(missing)]
    if gaps:
        raise CliError("missing layer files: " + ", ".join(gaps))
    return list(range(first, last + 1))


def cmd_sweep(args) -> int:
    directory = Path(args.layers)
    out = Path(args.out)
    days = _sweep_days(directory)
    node_count = None
    if (directory / "tags.tsv").exists():
        node_count = len(formats.read_names(directory / "tags.tsv"))

    parts: dict[str, list[Partition]] = {k: [] for k in KINDS}
    for day in days:
        g = _load_pair(directory / f"day{day}.user.tsv", directory / f"day{day}.volume.tsv", node_count)
        if node_count is None:
            node_count = g.node_count
        front, combined = _communities(g, args.max_depth, args.min_size)
        day_parts = {
            "user": front.bisections[0].partition,
            "volume": front.bisections[1].partition,
            "combined": combined,
        }
        for kind, part in day_parts.items():
            parts[kind].append(part)
            formats.write_partition(out / "partitions" / f"day{day}.{kind}.tsv", part)
        print(f"day {day}\tfront {len(front.candidates)}\tcombined parts {combined.k}")

    for kind in KINDS:
        matrix = ari_matrix(parts[kind], days)
        formats.atomic_write(out / f"ari_{kind}.csv", formats.format_ari_csv(matrix.values))
        formats.atomic_write(out / f"ari_{kind}.pgm", formats.format_pgm(matrix.values))
    print(f"{len(days)} days")
    return 0


def cmd_ari(args) -> int:
    a = formats.read_partition(args.first)
    b = formats.read_partition(args.second)
    if a.keys() != b.keys():
        raise CliError("partition files cover different node sets")
    nodes = sorted(a)
    value = adjusted_rand_index([a[i] for i in nodes], [b[i] for i in nodes])
    print(f"{value:.6f}")
    return 0


def cmd_synth(args) -> int:
    p_in2 = args.p_in if args.p_in2 is None else args.p_in2
    p_out2 = args.p_out if args.p_out2 is None else args.p_out2
    if args.nodes < 2 or not 1 <= args.clusters <= args.nodes:
        raise CliError("need nodes >= 2 and 1 <= clusters <= nodes")
    try:
        spec = SyntheticSpec(planted_blocks(args.nodes, args.clusters),
                             (args.p_in, p_in2), (args.p_out, p_out2), args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    g = generate_synthetic(spec)
    out = Path(args.out)
    for k, layer in enumerate(g.layers, start=1):
        formats.write_layer(out / f"layer{k}.tsv", layer)
    formats.write_partition(out / "planted.tsv", spec.planted)
    print(f"nodes {g.node_count}\t" + "\t".join(
        f"layer{k}_edges {layer.edge_count}" for k, layer in enumerate(g.layers, start=1)))
    return 0


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlpareto",
        description="Pareto community detection on two-layer networks.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("build-layers", help="daily user/volume layers from an events file")
    p.add_argument("events")
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=_positive_int, default=DEFAULT_WINDOW)
    p.add_argument("--z-threshold", type=float, default=DEFAULT_Z_THRESHOLD)
    p.add_argument("--max-error-rate", type=float, default=0.01)
    p.set_defaults(func=cmd_build_layers)

    def recursion_flags(q):
        q.add_argument("--selection", choices=["midpoint"], default="midpoint")
        q.add_argument("--max-depth", type=_positive_int, default=1)
        q.add_argument("--min-size", type=_positive_int, default=1)

    p = sub.add_parser("detect", help="Pareto walk on one two-layer network")
    p.add_argument("layer1")
    p.add_argument("layer2")
    p.add_argument("--front", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--nodes", type=_positive_int, default=None,
                   help="node count (default: from file headers or edges)")
    recursion_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("sweep", help="per-day partitions and ARI heatmaps")
    p.add_argument("layers", help="directory of dayD.user.tsv / dayD.volume.tsv files")
    p.add_argument("--out", required=True)
    recursion_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ari", help="adjusted Rand index of two partition files")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_ari)

    p = sub.add_parser("synth", help="planted-partition two-layer benchmark")
    p.add_argument("--out", required=True)
    p.add_argument("--nodes", type=int, default=40)
    p.add_argument("--clusters", type=int, default=2)
    p.add_argument("--p-in", type=float, default=0.9)
    p.add_argument("--p-out", type=float, default=0.05)
    p.add_argument("--p-in2", type=float, default=None, help="second layer p_in (default: --p-in)")
    p.add_argument("--p-out2", type=float, default=None, help="second layer p_out (default: --p-out)")
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (CliError, FormatError, DimensionError, ValueError, OSError, RuntimeError) as exc:
        print(f"mlpareto {args.subcommand}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
