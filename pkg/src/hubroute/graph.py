"""Immutable undirected simple graphs in CSR form, plus BFS primitives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from hubroute import kernels
from hubroute.errors import DataError

#: Marker stored in distance / parent arrays for "absent".
UNREACHABLE = -1


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    Adjacency is stored as CSR arrays: the neighbours of ``u`` are
    ``indices[indptr[u]:indptr[u + 1]]``, sorted ascending. Both arrays are
    read-only, so a ``Graph`` can be shared freely.
    """

    __slots__ = ("_n", "_indptr", "_indices", "_degree")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int32)
        if n < 0 or indptr.shape != (n + 1,) or indptr[0] != 0 or indptr[-1] != len(indices):
            raise ValueError("malformed CSR arrays")
        self._n = int(n)
        self._indptr = _readonly(indptr)
        self._indices = _readonly(indices)
        self._degree = _readonly(np.diff(indptr))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] | np.ndarray) -> "Graph":
        """Build a graph, silently dropping self-loops and repeated edges."""
        return simplify_edges(n, edges).graph

    @property
    def node_count(self) -> int:
        return self._n

    @property
    def edge_count(self) -> int:
        return len(self._indices) // 2

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @property
    def degree(self) -> np.ndarray:
        return self._degree

    def __len__(self) -> int:
        return self._n

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.edge_count})"

    def adjacency(self, u: int) -> np.ndarray:
        self._check_node(u)
        return self._indices[self._indptr[u]:self._indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.adjacency(u)
        k = np.searchsorted(row, v)
        return bool(k < len(row) and row[k] == v)

    def edges(self) -> np.ndarray:
        """Edge array of shape (M, 2) with ``u < v``, sorted lexicographically."""
        src = np.repeat(np.arange(self._n, dtype=np.int32), self._degree)
        keep = src < self._indices
        return np.column_stack([src[keep], self._indices[keep]])

    def induced_subgraph(self, nodes: np.ndarray) -> "Graph":
        """Subgraph on ``nodes`` (ascending old ids), re-indexed to ``0..len-1``."""
        nodes = np.asarray(nodes, dtype=np.int64)
        old_to_new = np.full(self._n, -1, dtype=np.int64)
        old_to_new[nodes] = np.arange(len(nodes))
        e = self.edges()
        e = e[(old_to_new[e[:, 0]] >= 0) & (old_to_new[e[:, 1]] >= 0)]
        return simplify_edges(len(nodes), old_to_new[e]).graph

    def _check_node(self, u: int) -> None:
        if not 0 <= u < self._n:
            raise ValueError(f"node id {u} out of range for graph with {self._n} nodes")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self._n == other._n and np.array_equal(self._indptr, other._indptr)
                and np.array_equal(self._indices, other._indices))

    __hash__ = None  # type: ignore[assignment]


class SimplifiedEdges(NamedTuple):
    graph: Graph
    self_loops: int
    duplicates: int


def simplify_edges(n: int, edges) -> SimplifiedEdges:
    """Build a simple graph from an edge list, counting what was dropped."""
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(e) and (e.min() < 0 or e.max() >= n):
        raise ValueError("edge endpoint out of range")
    loops = e[:, 0] == e[:, 1]
    e = e[~loops]
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    keys = np.unique(lo * max(n, 1) + hi)
    duplicates = len(e) - len(keys)
    lo, hi = keys // max(n, 1), keys % max(n, 1)
    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return SimplifiedEdges(Graph(n, indptr, dst.astype(np.int32)), int(loops.sum()), int(duplicates))


@dataclass(frozen=True)
class BfsResult:
    """Distances and parents from one BFS; ``-1`` marks absent entries.

    ``parent[u]`` is the next node on a shortest path from ``u`` back to the
    source, chosen as the lowest-id neighbour one level closer.
    """

    source: int
    distance: np.ndarray
    parent: np.ndarray

    def distance_to(self, u: int) -> int | None:
        d = int(self.distance[u])
        return None if d == UNREACHABLE else d

    def path_from(self, u: int) -> list[int]:
        """Node list from ``u`` to the source following parent pointers."""
        if self.distance[u] == UNREACHABLE:
            raise ValueError(f"node {u} is not reachable from {self.source}")
        path = [int(u)]
        while path[-1] != self.source:
            path.append(int(self.parent[path[-1]]))
        return path


def bfs(graph: Graph, source: int) -> BfsResult:
    graph._check_node(source)
    n = graph.node_count
    dist = np.empty(n, dtype=np.int32)
    parent = np.empty(n, dtype=np.int32)
    kernels.bfs_tree(graph.indptr, graph.indices, source, dist, parent)
    return BfsResult(int(source), _readonly(dist), _readonly(parent))


def bfs_distances(graph: Graph, source: int) -> np.ndarray:
    """Hop distances from ``source`` (``-1`` where unreachable)."""
    graph._check_node(source)
    n = graph.node_count
    dist = np.full(n, UNREACHABLE, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    kernels.bfs_dist(graph.indptr, graph.indices, source, dist, queue)
    return dist


def component_labels(graph: Graph) -> np.ndarray:
    """Component index per node, numbered by each component's smallest id."""
    labels = np.empty(graph.node_count, dtype=np.int32)
    kernels.component_labels(graph.indptr, graph.indices, labels)
    return labels


def is_connected(graph: Graph) -> bool:
    if graph.node_count == 0:
        return False
    return bool(component_labels(graph).max() == 0)


def giant_component(graph: Graph) -> tuple[Graph, np.ndarray]:
    """Largest connected component and the old-to-new id map.

    Ties between equally large components go to the one holding the lowest
    original id. The map holds ``-1`` for nodes outside the component.
    """
    if graph.node_count < 1:
        raise DataError("graph has no nodes")
    labels = component_labels(graph)
    sizes = np.bincount(labels)
    keep = np.flatnonzero(labels == int(np.argmax(sizes)))
    old_to_new = np.full(graph.node_count, -1, dtype=np.int64)
    old_to_new[keep] = np.arange(len(keep))
    if len(keep) == graph.node_count:
        return graph, old_to_new
    return graph.induced_subgraph(keep), old_to_new


@dataclass(frozen=True)
class GraphStats:
    giant_component_size: int
    diameter: int
    mean_distance: float
    estimated: bool = False


def graph_stats(graph: Graph, exact_threshold: int = 2000, sample_size: int = 200,
                seed: int = 0) -> GraphStats:
    """Diameter and mean pairwise distance of a connected graph.

    Exact (BFS from every node) when ``node_count <= exact_threshold``;
    otherwise estimated from ``sample_size`` random BFS sources, in which case
    the diameter is a lower bound.
    """
    n = graph.node_count
    if not is_connected(graph):
        raise DataError("graph_stats needs a connected graph; extract the giant component first")
    if n == 1:
        return GraphStats(1, 0, 0.0)
    if n <= exact_threshold:
        sources = np.arange(n, dtype=np.int64)
        estimated = False
    else:
        rng = np.random.default_rng(seed)
        sources = np.sort(rng.choice(n, size=min(sample_size, n), replace=False)).astype(np.int64)
        estimated = True
    dist = np.empty(n, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    total, maximum, pairs = kernels.distance_summary(graph.indptr, graph.indices, sources, dist, queue)
    return GraphStats(n, int(maximum), total / pairs, estimated)
