"""Command line interface.

Every subcommand echoes its effective configuration to stderr as a JSON document,
which can be saved and passed back with `--config` to reproduce the run.

Examples:
    aiseta synth --spec world.json --out data/
    aiseta segment data/messages.csv --out data/
    aiseta select data/train.traj data/test.traj --fit-on data/train.traj --labels data/labels.csv
    aiseta build-graph data/train.traj --labels data/labels.csv --out data/graph.kg
    aiseta evaluate --graph data/graph.kg --test data/ --labels data/labels.csv
    aiseta eta --graph data/graph.kg --from 37.9,23.6 --to 40.6,22.9 --ship-class cargo \
        --depart 2023-07-01T12:00Z
"""

import argparse
import datetime as dt
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import TextIO

from . import Pipeline, _json
from ._logger import logger
from .ais import ShipClass
from .config import RunConfig
from .errors import AisEtaError
from .evaluation import export_node_errors
from .geo import Position
from .knowledge_graph import KnowledgeGraph, TemporalAxis, load_graph, merge_graphs, save_graph
from .records import load_labels, load_trajectories, save_labels, save_trajectories
from .synth import generate, load_world, write_world
from .transmitters import model_to_json

EXIT_CODES: dict[type[BaseException], int] = {
    AisEtaError: 1,
    OSError: 1,
}
"""Exit status per exception type. Usage errors exit with 2 through argparse."""

Handler = Callable[[argparse.Namespace, Pipeline, TextIO], int]


def exit_code(exc: BaseException) -> int | None:
    """Return the exit status of an exception, None if it is not a handled error."""
    for cls in type(exc).__mro__:
        if cls in EXIT_CODES:
            return EXIT_CODES[cls]
    return None


def parse_position(value: str) -> Position:
    """Parse a `lat,lon` argument."""
    try:
        lat, lon = (float(part) for part in value.split(","))
        return Position(lat, lon)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lat,lon, got {value!r}") from exc


def parse_time(value: str) -> dt.datetime:
    """Parse an ISO-8601 argument, naive times are UTC."""
    text = value[:-1] + "+00:00" if value.endswith(("Z", "z")) else value
    try:
        time = dt.datetime.fromisoformat(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an ISO-8601 time, got {value!r}") from exc

    return time if time.tzinfo else time.replace(tzinfo=dt.timezone.utc)


def _test_paths(paths: Sequence[Path]) -> list[Path]:
    # A directory written by `segment` holds its test split in test.traj
    return [path / "test.traj" if path.is_dir() else path for path in paths]


def _load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.load(args.config) if args.config else RunConfig()
    if args.seed is not None:
        config.selection.seed = args.seed
    return config


def cmd_ingest(args: argparse.Namespace, pipeline: Pipeline, out: TextIO) -> int:
    """Read message files and print the ingestion report."""
    report = pipeline.ingest(*args.inputs).report
    for line in report.lines():
        print(line, file=out)
    return 0


def cmd_segment(args: argparse.Namespace, pipeline: Pipeline, out: TextIO) -> int:
    """Ingest and segment message files, writing sub-trajectory files."""
    streams = pipeline.ingest(*args.inputs).streams
    trajectories = pipeline.segment(streams)

    args.out.mkdir(parents=True, exist_ok=True)
    if args.no_split:
        save_trajectories(trajectories, args.out / "trajectories.traj")
        print(f"trajectories {len(trajectories)}", file=out)
        return 0

    train, test = pipeline.split(trajectories)
    save_trajectories(train, args.out / "train.traj")
    save_trajectories(test, args.out / "test.traj")
    print(f"trajectories {len(trajectories)}", file=out)
    print(f"train {len(train)}", file=out)
    print(f"test {len(test)}", file=out)
    return 0


def cmd_select(args: argparse.Namespace, pipeline: Pipeline, out: TextIO) -> int:
    """Fit the transmitter model and write vessel labels."""
    trajectories = load_trajectories(*args.inputs)
    fit_on = load_trajectories(*args.fit_on) if args.fit_on else None
    model, labels = pipeline.select(trajectories, fit_on=fit_on)

    save_labels(labels.values(), args.labels)
    if args.model and model is not None:
        Path(args.model).write_text(model_to_json(model) + "\n", encoding="utf-8")

    primary = sum(1 for label in labels.values() if label.is_primary)
    print(f"vessels {len(labels)}", file=out)
    print(f"primary {primary}", file=out)
    print(f"secondary {len(labels) - primary}", file=out)
    return 0


def cmd_build_graph(args: argparse.Namespace, pipeline: Pipeline, out: TextIO) -> int:
    """Build a graph file from training sub-trajectories."""
    trajectories = load_trajectories(*args.inputs)
    labels = load_labels(args.labels) if args.labels else None
    graph = pipeline.build_graph(trajectories, labels, held_out=not args.external)
    save_graph(graph, args.out)

    _print_counts(graph, out)
    return 0


def cmd_merge_graph(args: argparse.Namespace, pipeline: Pipeline, out: TextIO) -> int:
    """Merge graph files into one."""
    graphs = [load_graph(path) for path in args.inputs]
    merged = graphs[0]
    for graph in graphs[1:]:
        merged = merge_graphs(merged, graph)
    save_graph(merged, args.out)

    _print_counts(merged, out)
    return 0


def cmd_eta(args: argparse.Namespace, pipeline: Pipeline, out: TextIO) -> int:
    """Route between two positions and print the predicted travel time."""
    graph = load_graph(args.graph)
    prediction = pipeline.predict(
        graph,
        args.origin,
        args.destination,
        ShipClass(args.ship_class),
        args.depart,
        strict=args.strict,
    )

    arrival = prediction.arrival.strftime("%Y-%m-%dT%H:%M:%SZ")
    if args.format == "records":
        for segment in prediction.segments:
            print(f"SEGMENT {_json.render(segment)}", file=out)
        print(f"TOTAL {prediction.total_minutes!r} {arrival}", file=out)
        return 0

    print("Point-to-point prediction, distances between cell centers", file=out)
    print(
        f"{'cell':<8}{'km':>10}{'knots':>8}{'level':>10}{'reliable':>10}{'minutes':>10}",
        file=out,
    )
    for segment in prediction.segments:
        estimate = segment.estimate
        print(
            f"{segment.cell:<8}{segment.distance:>10.2f}{estimate.speed:>8.2f}"
            f"{estimate.level.value:>10}{'yes' if estimate.reliable else 'no':>10}"
            f"{segment.predicted_time:>10.1f}",
            file=out,
        )
    print(f"total {prediction.total_minutes:.1f} min, arrival {arrival}", file=out)
    return 0


def cmd_evaluate(args: argparse.Namespace, pipeline: Pipeline, out: TextIO) -> int:
    """Replay test sub-trajectories against a graph and report errors."""
    graph = load_graph(args.graph)
    test = load_trajectories(*_test_paths(args.test))
    labels = load_labels(args.labels) if args.labels else None
    records, report = pipeline.evaluate(graph, test, labels, held_out=not args.external)

    lines = ["Observed replay, distances along within-cell paths", *report.lines()]
    if args.format == "records":
        print(f"REPORT {report.to_json()}", file=out)
    else:
        for line in lines:
            print(line, file=out)

    if args.report:
        Path(args.report).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if args.node_errors:
        export_node_errors(records, args.node_errors)
    return 0


def cmd_synth(args: argparse.Namespace, pipeline: Pipeline, out: TextIO) -> int:
    """Generate a synthetic world."""
    spec = load_world(args.spec)
    if args.seed is not None:
        spec.seed = args.seed

    world = generate(spec, jobs=pipeline.jobs)
    messages_path, truth_path = write_world(world, args.out)
    print(f"messages {len(world.messages)} {messages_path}", file=out)
    print(f"truth {len(world.truth)} {truth_path}", file=out)
    return 0


def cmd_inspect(args: argparse.Namespace, pipeline: Pipeline, out: TextIO) -> int:
    """Print graph metadata, or the stratum tables of one node."""
    graph = load_graph(args.graph)

    if args.format == "records":
        print(f"META {_json.render(graph.metadata)}", file=out)
    else:
        for name, value in vars(graph.metadata).items():
            print(f"{name} {value}", file=out)
        _print_counts(graph, out)

    if args.cell:
        _print_node(graph, args.cell, out)
    return 0


def _print_counts(graph: KnowledgeGraph, out: TextIO) -> None:
    print(f"nodes {len(graph.nodes)}", file=out)
    print(f"edges {len(graph.edges)}", file=out)
    print(f"samples {graph.sample_count}", file=out)


def _print_node(graph: KnowledgeGraph, cell: str, out: TextIO) -> None:
    node = graph.node(cell)
    print(f"cell {cell} -> {' '.join(graph.successors(cell)) or '(no successors)'}", file=out)
    print(
        f"{'axis':<6}{'class':<8}{'dir':<4}{'bin':>4}{'count':>8}{'runs':>6}"
        f"{'mean':>8}{'std':>8}{'min':>8}{'max':>8}",
        file=out,
    )
    for axis in TemporalAxis:
        for (ship_class, direction, value), acc in node.strata.sorted_items(axis):
            print(
                f"{axis.value:<6}{ship_class.value:<8}{direction.value:<4}{value:>4}"
                f"{acc.count:>8}{acc.runs:>6}{acc.mean:>8.2f}{acc.std:>8.2f}"
                f"{acc.min:>8.2f}{acc.max:>8.2f}",
                file=out,
            )


COMMANDS: dict[str, Handler] = {
    "ingest": cmd_ingest,
    "segment": cmd_segment,
    "select": cmd_select,
    "build-graph": cmd_build_graph,
    "merge-graph": cmd_merge_graph,
    "eta": cmd_eta,
    "evaluate": cmd_evaluate,
    "synth": cmd_synth,
    "inspect": cmd_inspect,
}


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default: 1)")
    common.add_argument("--seed", type=int, help="override the random seed")
    common.add_argument(
        "--format", choices=["text", "records"], default="text", help="output format"
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="log more (repeat for debug)"
    )

    parser = argparse.ArgumentParser(
        prog="aiseta", description="AIS historical speed knowledge graph for travel-time estimation"
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = commands.add_parser("ingest", parents=[common], help="report on message files")
    p.add_argument("inputs", nargs="+", type=Path, help="message files (.csv, .csv.gz)")

    p = commands.add_parser("segment", parents=[common], help="cut messages into sub-trajectories")
    p.add_argument("inputs", nargs="+", type=Path, help="message files (.csv, .csv.gz)")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--no-split", action="store_true", help="write one file, without a train/test split")

    p = commands.add_parser("select", parents=[common], help="label primary transmitters")
    p.add_argument("inputs", nargs="+", type=Path, help="sub-trajectory files to label")
    p.add_argument("--fit-on", nargs="+", type=Path, help="sub-trajectory files to fit on")
    p.add_argument("--labels", type=Path, required=True, help="output label file")
    p.add_argument("--model", type=Path, help="output model file")

    p = commands.add_parser("build-graph", parents=[common], help="build a graph file")
    p.add_argument("inputs", nargs="+", type=Path, help="training sub-trajectory files")
    p.add_argument("--labels", type=Path, help="transmitter label file")
    p.add_argument("--out", type=Path, required=True, help="output graph file")
    p.add_argument(
        "--external", action="store_true", help="the input is not the training split"
    )

    p = commands.add_parser("merge-graph", parents=[common], help="merge graph files")
    p.add_argument("inputs", nargs="+", type=Path, help="graph files")
    p.add_argument("--out", type=Path, required=True, help="output graph file")

    p = commands.add_parser("eta", parents=[common], help="predict a point-to-point travel time")
    p.add_argument("--graph", type=Path, required=True, help="graph file")
    p.add_argument("--from", dest="origin", type=parse_position, required=True, metavar="LAT,LON")
    p.add_argument("--to", dest="destination", type=parse_position, required=True, metavar="LAT,LON")
    p.add_argument("--ship-class", choices=[c.value for c in ShipClass], default=ShipClass.CARGO.value)
    p.add_argument("--depart", type=parse_time, required=True, help="ISO-8601 departure time")
    p.add_argument("--strict", action="store_true", help="require both positions in graph cells")

    p = commands.add_parser("evaluate", parents=[common], help="evaluate a graph on test data")
    p.add_argument("--graph", type=Path, required=True, help="graph file")
    p.add_argument("--test", nargs="+", type=Path, required=True, help="test sub-trajectory files or directories")
    p.add_argument("--labels", type=Path, help="transmitter label file")
    p.add_argument("--report", type=Path, help="also write the text report here")
    p.add_argument("--node-errors", type=Path, help="write per-cell errors as GeoJSON")
    p.add_argument(
        "--external", action="store_true", help="the test data is not from the graph's split"
    )

    p = commands.add_parser("synth", parents=[common], help="generate a synthetic world")
    p.add_argument("--spec", type=Path, required=True, help="JSON world spec")
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = commands.add_parser("inspect", parents=[common], help="describe a graph file")
    p.add_argument("--graph", type=Path, required=True, help="graph file")
    p.add_argument("--cell", help="print the stratum tables of this cell")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line interface.

    Returns:
        0 on success, 1 on a data or file error. Usage errors exit with 2.
    """
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=max(logging.DEBUG, logging.WARNING - 10 * args.verbose),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = _load_config(args)
        print(f"# config {config.to_json()}", file=sys.stderr)
        return COMMANDS[args.command](args, Pipeline(config, jobs=args.jobs), sys.stdout)
    except (AisEtaError, OSError) as exc:
        code = exit_code(exc) or 1
        logger.debug("Command failed", exc_info=exc)
        print(f"aiseta: error: {exc}", file=sys.stderr)
        return code

