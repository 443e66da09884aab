"""Graph file reading and writing.

A graph file is line-oriented text:

    AISETA-GRAPH 1
    META {"format_version": 1, "precision": 3, ...}
    NODE {"cell": "u4p", "strata": [...]}
    EDGE {"source": "u4p", "destination": "u4r", "transitions": 12, "strata": [...]}
    SHA256 9f86d081884c7d65...

Nodes and edges are listed in sorted order and only populated strata are written.
The trailing digest covers every byte before the SHA256 line.
"""

import hashlib
from pathlib import Path

from aiseta import _json
from aiseta._logger import logger
from aiseta.errors import (
    CorruptFileError,
    MalformedRecordError,
    UnreadableSourceError,
    VersionMismatchError,
)

from .graph import GRAPH_FORMAT_VERSION, GraphMetadata, KnowledgeGraph
from .models import EdgeRecord, NodeRecord

MAGIC = "AISETA-GRAPH"

_DIGEST = "SHA256 "


def dumps_graph(graph: KnowledgeGraph) -> str:
    """Render a graph file as text."""
    lines = [
        f"{MAGIC} {GRAPH_FORMAT_VERSION}",
        f"META {_json.render(graph.metadata)}",
    ]
    lines.extend(f"NODE {_json.render(NodeRecord.from_node(node))}" for node in graph.iter_nodes())
    lines.extend(f"EDGE {_json.render(EdgeRecord.from_edge(edge))}" for edge in graph.iter_edges())

    body = "".join(f"{line}\n" for line in lines)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return f"{body}{_DIGEST}{digest}\n"


def loads_graph(text: str) -> KnowledgeGraph:
    """Parse a graph file from text.

    Raises:
        VersionMismatchError: If the file has an unsupported format version.
        CorruptFileError: If the file is truncated, altered or malformed.
    """
    header, _, _ = text.partition("\n")
    magic, _, version = header.partition(" ")
    if magic != MAGIC:
        raise CorruptFileError("Not a graph file")

    if not version.isdigit():
        raise CorruptFileError(f"Invalid format version {version!r}")
    if int(version) != GRAPH_FORMAT_VERSION:
        raise VersionMismatchError(
            f"Graph format version {version} is not supported by this release "
            f"(expected {GRAPH_FORMAT_VERSION}), rebuild the graph"
        )

    # The digest line must be last and must cover everything before it
    body, marker, digest = text.rstrip("\n").rpartition(f"\n{_DIGEST}")
    if not marker:
        raise CorruptFileError("Missing checksum, the file is truncated")

    body += "\n"
    if hashlib.sha256(body.encode("utf-8")).hexdigest() != digest:
        raise CorruptFileError("Checksum mismatch, the file is truncated or altered")

    graph: KnowledgeGraph | None = None
    try:
        for number, line in enumerate(body.splitlines()[1:], start=2):
            tag, _, payload = line.partition(" ")
            if tag == "META" and graph is None:
                graph = KnowledgeGraph(_json.parse(payload, GraphMetadata))
            elif tag == "NODE" and graph is not None:
                node = _json.parse(payload, NodeRecord).to_node()
                graph.nodes[node.cell] = node
            elif tag == "EDGE" and graph is not None:
                edge = _json.parse(payload, EdgeRecord).to_edge()
                if edge.source not in graph.nodes or edge.destination not in graph.nodes:
                    raise CorruptFileError(f"Edge {edge.key} on line {number} has no endpoint node")
                graph.edges[edge.key] = edge
            else:
                raise CorruptFileError(f"Unexpected {tag!r} record on line {number}")
    except (MalformedRecordError, ValueError) as exc:
        raise CorruptFileError(f"Malformed graph record: {exc}") from exc

    if graph is None:
        raise CorruptFileError("Missing metadata record")

    if graph.metadata.format_version != GRAPH_FORMAT_VERSION:
        raise VersionMismatchError(
            f"Graph metadata version {graph.metadata.format_version} is not supported"
        )

    return graph


def save_graph(graph: KnowledgeGraph, path: str | Path) -> None:
    """Write a graph file."""
    Path(path).write_text(dumps_graph(graph), encoding="utf-8")
    logger.info("Saved graph with %d nodes and %d edges to %s", len(graph.nodes), len(graph.edges), path)


def load_graph(path: str | Path) -> KnowledgeGraph:
    """Read a graph file.

    Raises:
        UnreadableSourceError: If the file cannot be read.
        VersionMismatchError: If the file has an unsupported format version.
        CorruptFileError: If the file is truncated, altered or malformed.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise CorruptFileError(f"{path} is not a text graph file") from exc
    except OSError as exc:
        raise UnreadableSourceError(f"Cannot read {path}: {exc}") from exc

    graph = loads_graph(text)
    logger.debug("Loaded graph with %d nodes and %d edges from %s", len(graph.nodes), len(graph.edges), path)
    return graph
