"""Preprocessing: hubs, closest-hub labels and per-node routing tables."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

import numpy as np

from hubroute import kernels
from hubroute.errors import DataError
from hubroute.graph import Graph, component_labels

FORMAT_MAGIC = "hubroute-scheme"
FORMAT_VERSION = 1

TIEBREAKS = ("higher_degree", "lower_degree")


@dataclass(frozen=True)
class SchemeConfig:
    hub_count: int
    # which hub wins when several are equally close to a node
    closest_hub_tiebreak: str = "higher_degree"

    def __post_init__(self):
        if self.hub_count < 1:
            raise ValueError("hub_count must be at least 1")
        if self.closest_hub_tiebreak not in TIEBREAKS:
            raise ValueError(f"closest_hub_tiebreak must be one of {TIEBREAKS}")


def id_bits(n: int) -> int:
    """Bits needed to name one of ``n`` nodes."""
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


@dataclass(frozen=True)
class Label:
    """Shortest path from a node to its closest hub, node first, hub last."""

    path: tuple[int, ...]
    bits_per_id: int

    @property
    def node(self) -> int:
        return self.path[0]

    @property
    def hub(self) -> int:
        return self.path[-1]

    @property
    def entry_count(self) -> int:
        return len(self.path)

    @property
    def bit_size(self) -> int:
        return self.entry_count * self.bits_per_id

    def index(self, x: int) -> int | None:
        try:
            return self.path.index(x)
        except ValueError:
            return None


@dataclass(frozen=True)
class RoutingTable:
    """Local state of one node: next hop toward every hub plus its neighbours.

    A hub's own entry is ``None``; routing never consults it.
    """

    node: int
    next_hop: dict[int, int | None]
    neighbors: tuple[int, ...]

    @property
    def entry_count(self) -> int:
        return len(self.next_hop) + len(self.neighbors)


def select_hubs(graph: Graph, hub_count: int) -> np.ndarray:
    """The ``hub_count`` highest-degree nodes, ordered by degree desc then id asc."""
    n = graph.node_count
    if not 1 <= hub_count <= n:
        raise ValueError(f"hub_count must lie in [1, {n}], got {hub_count}")
    order = np.lexsort((np.arange(n), -graph.degree))
    return order[:hub_count].astype(np.int32)


@dataclass(eq=False)
class Scheme:
    """Hubs, labels and routing tables for a connected graph.

    Array layout (``H`` hubs, ``N`` nodes):

    * ``hubs[slot]`` -- node id of each hub, in selection order
    * ``hub_distance[slot, x]`` -- BFS distance from ``x`` to hub ``slot``
    * ``next_hop[slot, x]`` -- neighbour of ``x`` on a shortest path to that
      hub, ``-1`` at the hub itself
    * ``hub_slot[x]`` -- slot of the closest hub of ``x``
    * ``label_ptr`` / ``label_nodes`` -- CSR storage of all label paths
    """

    graph: Graph
    hubs: np.ndarray
    hub_distance: np.ndarray
    next_hop: np.ndarray
    hub_slot: np.ndarray
    label_ptr: np.ndarray
    label_nodes: np.ndarray
    closest_hub_tiebreak: str = "higher_degree"
    _slot_of: dict[int, int] = field(init=False, repr=False)

    def __post_init__(self):
        for name in ("hubs", "hub_distance", "next_hop", "hub_slot", "label_ptr", "label_nodes"):
            getattr(self, name).setflags(write=False)
        self._slot_of = {int(h): s for s, h in enumerate(self.hubs.tolist())}

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @property
    def hub_count(self) -> int:
        return len(self.hubs)

    def closest_hub(self, i: int) -> int:
        return int(self.hubs[self.hub_slot[i]])

    def hub_index(self, hub: int) -> int:
        return self._slot_of[hub]

    def label_path(self, i: int) -> np.ndarray:
        return self.label_nodes[self.label_ptr[i]:self.label_ptr[i + 1]]

    def label(self, i: int) -> Label:
        self.graph._check_node(i)
        return Label(tuple(self.label_path(i).tolist()), id_bits(self.node_count))

    def table(self, i: int) -> RoutingTable:
        self.graph._check_node(i)
        hops = self.next_hop[:, i].tolist()
        return RoutingTable(
            node=i,
            next_hop={int(h): (None if nh < 0 else nh) for h, nh in zip(self.hubs.tolist(), hops)},
            neighbors=tuple(self.graph.adjacency(i).tolist()),
        )

    def entry_counts(self) -> np.ndarray:
        return np.diff(self.label_ptr)

    def table_sizes(self) -> np.ndarray:
        """Per-node table size: one entry per hub plus one per neighbour."""
        return self.hub_count + self.graph.degree


def _hub_order(graph: Graph, hubs: np.ndarray, tiebreak: str) -> np.ndarray:
    """Slots sorted by closest-hub preference; the first minimum wins."""
    deg = graph.degree[hubs]
    if tiebreak == "higher_degree":
        return np.lexsort((hubs, -deg))
    return np.lexsort((hubs, deg))


def build_scheme(graph: Graph, config: SchemeConfig | int) -> Scheme:
    """One BFS per hub fills the tables; each node's label is its path to the
    closest hub, ties going to the higher-degree hub and then the lower id."""
    if isinstance(config, int):
        config = SchemeConfig(config)
    n = graph.node_count
    if n == 0 or component_labels(graph).max() != 0:
        raise DataError("build_scheme needs a connected graph; extract the giant component first")
    hubs = select_hubs(graph, config.hub_count)
    h = len(hubs)
    hub_distance = np.empty((h, n), dtype=np.int32)
    next_hop = np.empty((h, n), dtype=np.int32)
    for slot, hub in enumerate(hubs.tolist()):
        kernels.bfs_tree(graph.indptr, graph.indices, hub, hub_distance[slot], next_hop[slot])

    order = _hub_order(graph, hubs, config.closest_hub_tiebreak)
    hub_slot = order[np.argmin(hub_distance[order], axis=0)].astype(np.int32)
    label_ptr, label_nodes = _trace_labels(hub_distance, next_hop, hub_slot)
    return Scheme(graph, hubs, hub_distance, next_hop, hub_slot, label_ptr, label_nodes,
                  config.closest_hub_tiebreak)


def _trace_labels(hub_distance, next_hop, hub_slot):
    n = len(hub_slot)
    nodes = np.arange(n)
    lengths = hub_distance[hub_slot, nodes].astype(np.int64) + 1
    label_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(lengths, out=label_ptr[1:])
    label_nodes = np.empty(label_ptr[-1], dtype=np.int32)
    cur = nodes.copy()
    for step in range(int(lengths.max())):
        live = lengths > step
        label_nodes[label_ptr[:-1][live] + step] = cur[live]
        advance = lengths > step + 1
        cur[advance] = next_hop[hub_slot[advance], cur[advance]]
    return label_ptr, label_nodes


@dataclass(frozen=True)
class LabelSizeDistribution:
    entry_counts: dict[int, int]
    bit_sizes: dict[int, int]
    mean_entry_count: float
    max_entry_count: int
    mean_bit_size: float
    max_bit_size: int


def label_size_distribution(scheme: Scheme) -> LabelSizeDistribution:
    counts = scheme.entry_counts()
    bits = id_bits(scheme.node_count)
    hist = dict(sorted(Counter(counts.tolist()).items()))
    return LabelSizeDistribution(
        entry_counts=hist,
        bit_sizes={k * bits: v for k, v in hist.items()},
        mean_entry_count=float(counts.mean()),
        max_entry_count=int(counts.max()),
        mean_bit_size=float(counts.mean() * bits),
        max_bit_size=int(counts.max() * bits),
    )


# -- serialization ---------------------------------------------------------

def _ints(a) -> str:
    return " ".join(map(str, a))


def dump_scheme(scheme: Scheme, out: str | Path | IO[str]) -> None:
    """Write the line-oriented text dump described in ``docs/scheme-format.md``."""
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8") as fh:
            dump_scheme(scheme, fh)
        return
    g = scheme.graph
    out.write(f"{FORMAT_MAGIC} {FORMAT_VERSION}\n")
    out.write(f"nodes {g.node_count} edges {g.edge_count} hubs {scheme.hub_count} "
              f"tiebreak {scheme.closest_hub_tiebreak}\n")
    out.write(f"hublist {_ints(scheme.hubs.tolist())}\n")
    next_hop = scheme.next_hop.T.tolist()
    dist = scheme.hub_distance.T.tolist()
    for i in range(g.node_count):
        out.write(f"{i} ; {_ints(scheme.label_path(i).tolist())} ; {_ints(g.adjacency(i).tolist())} ; "
                  f"{_ints(next_hop[i])} ; {_ints(dist[i])}\n")


def load_scheme(src: str | Path | IO[str]) -> Scheme:
    if isinstance(src, (str, Path)):
        try:
            with open(src, "r", encoding="utf-8") as fh:
                return load_scheme(fh)
        except OSError as exc:
            raise DataError(f"cannot read scheme file {src}: {exc}") from exc
    try:
        magic, version = src.readline().split()
        if magic != FORMAT_MAGIC or int(version) != FORMAT_VERSION:
            raise DataError(f"not a {FORMAT_MAGIC} v{FORMAT_VERSION} file")
        head = src.readline().split()
        meta = dict(zip(head[::2], head[1::2]))
        n, m, h = int(meta["nodes"]), int(meta["edges"]), int(meta["hubs"])
        hub_fields = src.readline().split()
        if hub_fields[0] != "hublist":
            raise DataError("missing hublist line")
        hubs = np.array(hub_fields[1:], dtype=np.int32)
        edges, labels = [], []
        next_hop = np.empty((n, h), dtype=np.int32)
        dist = np.empty((n, h), dtype=np.int32)
        for i in range(n):
            node, label, nbrs, nh, dd = src.readline().split(";")
            if int(node) != i:
                raise DataError(f"node lines out of order at {i}")
            labels.append([int(x) for x in label.split()])
            edges.extend((i, int(v)) for v in nbrs.split() if int(v) > i)
            next_hop[i] = [int(x) for x in nh.split()]
            dist[i] = [int(x) for x in dd.split()]
    except (ValueError, KeyError) as exc:
        raise DataError(f"malformed scheme file: {exc}") from exc
    graph = Graph.from_edges(n, edges)
    if graph.edge_count != m or len(hubs) != h:
        raise DataError("scheme file header does not match its body")
    slot_of = {int(x): s for s, x in enumerate(hubs.tolist())}
    label_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum([len(p) for p in labels], out=label_ptr[1:])
    label_nodes = np.array([x for p in labels for x in p], dtype=np.int32)
    hub_slot = np.array([slot_of[p[-1]] for p in labels], dtype=np.int32)
    return Scheme(graph, hubs, np.ascontiguousarray(dist.T), np.ascontiguousarray(next_hop.T),
                  hub_slot, label_ptr, label_nodes, meta.get("tiebreak", "higher_degree"))
