"""Plain-text edge lists: one ``u v`` pair per line, ``#`` starts a comment line."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import IO

import numpy as np

from hubroute.errors import DataError
from hubroute.graph import Graph, simplify_edges

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadedEdgeList:
    graph: Graph
    original_ids: np.ndarray  # original_ids[new] = id as written in the file
    self_loops: int
    duplicates: int


def read_edge_list(path: str | Path) -> LoadedEdgeList:
    """Load an edge list, densifying ids in ascending order of the file ids.

    Self-loops and repeated edges are dropped and reported with a warning.
    """
    path = Path(path)
    pairs: list[tuple[int, int]] = []
    try:
        with path.open("r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                fields = line.split()
                if len(fields) < 2:
                    raise DataError(f"{path}:{lineno}: expected two node ids, got {line!r}")
                try:
                    u, v = int(fields[0]), int(fields[1])
                except ValueError:
                    raise DataError(f"{path}:{lineno}: non-integer node id in {line!r}") from None
                if u < 0 or v < 0:
                    raise DataError(f"{path}:{lineno}: negative node id")
                pairs.append((u, v))
    except OSError as exc:
        raise DataError(f"cannot read edge list {path}: {exc}") from exc
    if not pairs:
        raise DataError(f"{path}: no edges found")
    raw = np.array(pairs, dtype=np.int64)
    original_ids, dense = np.unique(raw, return_inverse=True)
    loaded = simplify_edges(len(original_ids), dense.reshape(-1, 2))
    if loaded.self_loops or loaded.duplicates:
        log.warning("%s: dropped %d self-loop(s) and %d duplicate edge(s)",
                    path, loaded.self_loops, loaded.duplicates)
    return LoadedEdgeList(loaded.graph, original_ids, loaded.self_loops, loaded.duplicates)


def write_edge_list(graph: Graph, out: str | Path | IO[str], header: str | None = None) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8") as fh:
            write_edge_list(graph, fh, header)
        return
    if header:
        for line in header.splitlines():
            out.write(f"# {line}\n")
    out.write(f"# nodes {graph.node_count} edges {graph.edge_count}\n")
    for u, v in graph.edges().tolist():
        out.write(f"{u} {v}\n")
