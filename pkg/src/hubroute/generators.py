"""Random degree sequences and the configuration model."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from hubroute.graph import Graph, simplify_edges


def natural_cutoff(n: int, gamma: float) -> int:
    """Largest expected degree in a power-law sample of size ``n``: ``n**(1/(gamma-1))``."""
    return int(math.floor(n ** (1.0 / (gamma - 1.0))))


@dataclass(frozen=True)
class PowerLawConfig:
    n: int
    gamma: float
    k_min: int = 2
    k_max: int | None = None  # None -> natural cutoff, never below k_min

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.gamma <= 1:
            raise ValueError("gamma must exceed 1")
        if self.k_min < 1:
            raise ValueError("k_min must be at least 1")
        if self.k_max is not None and self.k_max < self.k_min:
            raise ValueError(f"k_min={self.k_min} exceeds k_max={self.k_max}")

    @property
    def cutoff(self) -> int:
        if self.k_max is not None:
            return self.k_max
        return max(self.k_min, natural_cutoff(self.n, self.gamma))

    def pmf(self) -> tuple[np.ndarray, np.ndarray]:
        """Support and normalised probabilities ``k**-gamma / sum``."""
        k = np.arange(self.k_min, self.cutoff + 1, dtype=np.float64)
        w = k ** -self.gamma
        return k.astype(np.int64), w / w.sum()


@dataclass(frozen=True)
class PoissonConfig:
    n: int
    mean_degree: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not self.mean_degree > 0:
            raise ValueError("mean_degree must be positive")


def _repair_parity(degrees: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if degrees.sum() % 2:
        degrees[rng.integers(len(degrees))] += 1
    return degrees


def sample_power_law(config: PowerLawConfig, seed: int | Sequence[int]) -> np.ndarray:
    """I.i.d. degrees from the truncated discrete power law via an inverse-CDF table.

    An odd total is repaired by adding one stub to a uniformly chosen node.
    """
    rng = np.random.default_rng(seed)
    support, p = config.pmf()
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(config.n), side="right")
    degrees = support[np.minimum(idx, len(support) - 1)]
    return _repair_parity(degrees, rng)


def sample_poisson(config: PoissonConfig, seed: int | Sequence[int]) -> np.ndarray:
    rng = np.random.default_rng(seed)
    degrees = rng.poisson(config.mean_degree, size=config.n).astype(np.int64)
    return _repair_parity(degrees, rng)


class ConfigurationGraph(NamedTuple):
    graph: Graph
    self_loops: int
    multi_edges: int

    @property
    def discarded(self) -> int:
        return self.self_loops + self.multi_edges


def configuration_model(degrees: Sequence[int] | np.ndarray, seed: int | Sequence[int]) -> ConfigurationGraph:
    """Uniform random matching of degree stubs, then drop self-loops and multi-edges.

    A random permutation of the stub list, paired off consecutively, is a
    uniformly random perfect matching. Dropped stub pairs are not rewired.
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    if (degrees < 0).any():
        raise ValueError("degrees must be non-negative")
    if degrees.sum() % 2:
        raise ValueError("degree sum must be even")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(len(degrees), dtype=np.int64), degrees)
    stubs = rng.permutation(stubs).reshape(-1, 2)
    graph, loops, dups = simplify_edges(len(degrees), stubs)
    return ConfigurationGraph(graph, loops, dups)


def random_tree(n: int, seed: int | Sequence[int]) -> Graph:
    """Uniformly random labelled tree on ``n`` nodes, decoded from a Prüfer sequence."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return Graph(1, np.zeros(2, dtype=np.int64), np.zeros(0, dtype=np.int32))
    if n == 2:
        return Graph.from_edges(2, [(0, 1)])
    rng = np.random.default_rng(seed)
    code = rng.integers(n, size=n - 2).tolist()
    degree = [1] * n
    for v in code:
        degree[v] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in code:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Graph.from_edges(n, edges)
