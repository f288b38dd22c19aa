"""Stretch statistics and the BFS distance oracle."""

from __future__ import annotations

import logging
import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from hubroute.errors import DataError, InvariantViolation
from hubroute.graph import UNREACHABLE, Graph, bfs_distances, giant_component
from hubroute.router import BatchRouter, PairPolicy, RouteTrace, pair_blocks
from hubroute.scheme import Scheme

log = logging.getLogger(__name__)

#: Stretch grid for the inverse CDF, in twentieths: 1.00, 1.05, ..., 3.00.
CDF_GRID_DENOMINATOR = 20
CDF_GRID = tuple(Fraction(k, CDF_GRID_DENOMINATOR) for k in range(20, 61))


class DistanceOracle:
    """Exact hop distances with one cached BFS per queried root.

    Distances are symmetric, so ``distance(s, t)`` reuses a cached row for
    either endpoint before running a new BFS from ``s``.
    """

    def __init__(self, graph: Graph, cache: bool = True):
        self.graph = graph
        self._cache: dict[int, np.ndarray] | None = {} if cache else None
        self._lock = threading.Lock()

    def row(self, root: int) -> np.ndarray:
        if self._cache is not None:
            hit = self._cache.get(root)
            if hit is not None:
                return hit
        dist = bfs_distances(self.graph, root)
        dist.setflags(write=False)
        if self._cache is not None:
            with self._lock:
                dist = self._cache.setdefault(root, dist)
        return dist

    def distance(self, s: int, t: int) -> int:
        if self._cache is not None and t in self._cache and s not in self._cache:
            d = int(self._cache[t][s])
        else:
            d = int(self.row(s)[t])
        if d == UNREACHABLE:
            raise DataError(f"nodes {s} and {t} are not connected")
        return d

    def distances(self, pairs: Iterable[tuple[int, int]]) -> Iterator[int]:
        for s, t in pairs:
            yield self.distance(s, t)


@dataclass
class StretchAccumulator:
    """Multiset of (routed hops, shortest hops) pairs.

    Merging is exact, commutative and associative, so partial results from
    independent workers combine into the same totals in any order.
    """

    counts: Counter = field(default_factory=Counter)

    def add(self, routed: int, shortest: int, times: int = 1) -> None:
        if shortest < 1:
            raise ValueError("stretch needs distinct endpoints (shortest >= 1)")
        self.counts[(routed, shortest)] += times

    def add_arrays(self, routed: np.ndarray, shortest: np.ndarray) -> None:
        if len(routed) == 0:
            return
        if shortest.min() < 1:
            raise ValueError("stretch needs distinct endpoints (shortest >= 1)")
        base = int(shortest.max()) + 1
        keys, freq = np.unique(routed.astype(np.int64) * base + shortest, return_counts=True)
        for key, c in zip(keys.tolist(), freq.tolist()):
            self.counts[divmod(key, base)] += c

    def merge(self, other: "StretchAccumulator") -> "StretchAccumulator":
        return StretchAccumulator(self.counts + other.counts)

    def __iadd__(self, other: "StretchAccumulator") -> "StretchAccumulator":
        self.counts.update(other.counts)
        return self

    @property
    def pair_count(self) -> int:
        return sum(self.counts.values())

    def report(self) -> "StretchReport":
        return StretchReport.from_counts(self.counts)


@dataclass(frozen=True)
class StretchReport:
    pair_count: int
    mean_pair_stretch: float
    ratio_of_averages: float
    shortest_fraction: float
    max_stretch: float
    mean_routed: float
    mean_shortest: float
    inverse_cdf: tuple[tuple[float, float], ...]

    @classmethod
    def from_counts(cls, counts: Counter) -> "StretchReport":
        pairs = sum(counts.values())
        if pairs == 0:
            raise ValueError("no pairs to report on")
        items = sorted(counts.items())
        sum_r = sum(r * c for (r, _), c in items)
        sum_d = sum(d * c for (_, d), c in items)
        sum_stretch = sum(Fraction(r * c, d) for (r, d), c in items)
        shortest = sum(c for (r, d), c in items if r == d)
        max_stretch = max(Fraction(r, d) for (r, d), _ in items)
        grid = list(CDF_GRID)
        if max_stretch not in grid:
            grid.append(max_stretch)
            grid.sort()
        cdf = []
        for x in grid:
            above = sum(c for (r, d), c in items if r * x.denominator > x.numerator * d)
            cdf.append((float(x), above / pairs))
        return cls(
            pair_count=pairs,
            mean_pair_stretch=float(sum_stretch / pairs),
            ratio_of_averages=float(Fraction(sum_r, sum_d)),
            shortest_fraction=shortest / pairs,
            max_stretch=float(max_stretch),
            mean_routed=sum_r / pairs,
            mean_shortest=sum_d / pairs,
            inverse_cdf=tuple(cdf),
        )

    def summary(self) -> dict:
        return {
            "pair_count": self.pair_count,
            "mean_pair_stretch": self.mean_pair_stretch,
            "ratio_of_averages": self.ratio_of_averages,
            "shortest_fraction": self.shortest_fraction,
            "max_stretch": self.max_stretch,
            "mean_routed": self.mean_routed,
            "mean_shortest": self.mean_shortest,
        }

    def to_dict(self) -> dict:
        out = self.summary()
        out["inverse_cdf"] = [list(p) for p in self.inverse_cdf]
        return out


def stretch_report(traces: Iterable[RouteTrace], oracle: DistanceOracle) -> StretchReport:
    acc = StretchAccumulator()
    for tr in traces:
        if tr.source == tr.destination:
            raise ValueError("stretch is undefined for s == t")
        acc.add(tr.hops, oracle.distance(tr.source, tr.destination))
    return acc.report()


# -- batched evaluation ----------------------------------------------------

@dataclass(frozen=True)
class PairBlock:
    target: int
    sources: np.ndarray
    shortest: np.ndarray


def measured_pairs(graph: Graph, policy: PairPolicy) -> Iterator[PairBlock]:
    """Pair blocks annotated with their exact distances (one BFS per target)."""
    for t, sources in pair_blocks(graph.node_count, policy):
        yield PairBlock(t, sources, bfs_distances(graph, t)[sources])


def evaluate_scheme(scheme: Scheme, blocks: Iterable[PairBlock] | PairPolicy) -> StretchAccumulator:
    """Route every block and fold (hops, distance) into an accumulator.

    Each route is checked against ``d(s,t) <= r <= d(s,h_t) + d(h_t,t)``;
    a violation raises :class:`InvariantViolation`.
    """
    if isinstance(blocks, PairPolicy):
        blocks = measured_pairs(scheme.graph, blocks)
    router = BatchRouter(scheme)
    acc = StretchAccumulator()
    for blk in blocks:
        hops = router.hops_to(blk.target, blk.sources)
        slot = scheme.hub_slot[blk.target]
        via_hub = scheme.hub_distance[slot, blk.sources] + scheme.hub_distance[slot, blk.target]
        if (hops < blk.shortest).any() or (hops > via_hub).any():
            bad = int(np.flatnonzero((hops < blk.shortest) | (hops > via_hub))[0])
            raise InvariantViolation(
                f"route {int(blk.sources[bad])}->{blk.target}: {int(hops[bad])} hops outside "
                f"[{int(blk.shortest[bad])}, {int(via_hub[bad])}]")
        acc.add_arrays(hops, blk.shortest)
    return acc


# -- degree / distance relation --------------------------------------------

@dataclass(frozen=True)
class BucketDistance:
    lo: int
    hi: int  # inclusive
    members: int
    mean_distance: float
    standard_error: float


def log_buckets(max_degree: int, base: float = 2.0, start: int = 1) -> list[tuple[int, int]]:
    """Degree ranges ``[start, start*base)``, ... covering up to ``max_degree``."""
    out = []
    lo = start
    while lo <= max_degree:
        hi = max(lo, int(math.ceil(lo * base)) - 1)
        out.append((lo, hi))
        lo = hi + 1
    return out


def degree_distance_monotonicity(
    graphs: Sequence[Graph],
    buckets: Sequence[tuple[int, int]],
    seed: int,
    targets_per_graph: int = 64,
) -> list[BucketDistance]:
    """Mean BFS distance from nodes in each degree bucket to random targets.

    Each graph is reduced to its giant component; per graph,
    ``targets_per_graph`` targets are drawn uniformly and every node
    contributes its mean distance to the targets other than itself.
    """
    if len(graphs) < 2:
        raise ValueError("need at least two graphs in the ensemble")
    rng = np.random.default_rng(seed)
    per_bucket: list[list[np.ndarray]] = [[] for _ in buckets]
    for g in graphs:
        g, _ = giant_component(g)
        n = g.node_count
        if n < 2:
            continue
        targets = rng.choice(n, size=min(targets_per_graph, n), replace=False)
        total = np.zeros(n, dtype=np.float64)
        hits = np.zeros(n, dtype=np.int64)
        for t in targets.tolist():
            d = bfs_distances(g, t)
            total += d
            hits += 1
            hits[t] -= 1
        ok = hits > 0
        node_mean = np.where(ok, total / np.maximum(hits, 1), np.nan)
        for b, (lo, hi) in enumerate(buckets):
            sel = ok & (g.degree >= lo) & (g.degree <= hi)
            per_bucket[b].append(node_mean[sel])
    out = []
    for (lo, hi), parts in zip(buckets, per_bucket):
        vals = np.concatenate(parts) if parts else np.empty(0)
        if len(vals) == 0:
            log.warning("degree bucket [%d, %d] is empty; dropped", lo, hi)
            continue
        se = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        out.append(BucketDistance(lo, hi, len(vals), float(vals.mean()), se))
    return out
