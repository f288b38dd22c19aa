"""Packet forwarding over a built :class:`~hubroute.scheme.Scheme`.

At each node ``x`` a packet addressed to ``t`` (carrying ``t``'s label) is
handled by the first matching rule:

1. ``x == t``: delivered.
2. ``t`` is a neighbour of ``x``: forward to ``t``.
3. ``x`` is entry ``j`` of ``t``'s label: forward to entry ``j - 1``.
4. otherwise forward along ``x``'s table entry for ``t``'s hub.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from hubroute import kernels
from hubroute.errors import InvariantViolation
from hubroute.scheme import Label, Scheme

log = logging.getLogger(__name__)

DELIVERED, TO_NEIGHBOR, ALONG_LABEL, TOWARD_HUB = 1, 2, 3, 4


@dataclass(frozen=True)
class Packet:
    """Header written by the sender; forwarding never modifies it."""

    destination: int
    label: Label


@dataclass(frozen=True)
class RouteTrace:
    source: int
    destination: int
    walk: tuple[int, ...]
    rules: tuple[int, ...]  # rule applied at each hop, so len(rules) == hops

    @property
    def hops(self) -> int:
        return len(self.walk) - 1

    def to_dict(self) -> dict:
        return {"source": self.source, "destination": self.destination,
                "hops": self.hops, "walk": list(self.walk), "rules": list(self.rules)}


def forward(scheme: Scheme, x: int, packet: Packet) -> tuple[int, int | None]:
    """Decide the next hop at ``x`` using only its local table and the header.

    Returns ``(rule, next_node)``; ``next_node`` is ``None`` on delivery.
    """
    t = packet.destination
    if x == t:
        return DELIVERED, None
    if scheme.graph.has_edge(x, t):
        return TO_NEIGHBOR, t
    j = packet.label.index(x)
    if j is not None:
        return ALONG_LABEL, packet.label.path[j - 1]
    nxt = int(scheme.next_hop[scheme.hub_index(packet.label.hub), x])
    if nxt < 0:
        raise InvariantViolation(f"node {x} has no table entry toward hub {packet.label.hub}")
    return TOWARD_HUB, nxt


def route(scheme: Scheme, s: int, t: int) -> RouteTrace:
    n = scheme.node_count
    for v in (s, t):
        if not 0 <= v < n:
            raise ValueError(f"node id {v} out of range for scheme with {n} nodes")
    packet = Packet(t, scheme.label(t))
    walk = [s]
    rules = []
    x = s
    while True:
        rule, nxt = forward(scheme, x, packet)
        if nxt is None:
            break
        if len(rules) >= n:
            raise InvariantViolation(f"route {s}->{t} exceeded {n} hops: {walk[:20]}...")
        rules.append(rule)
        walk.append(nxt)
        x = nxt
    return RouteTrace(s, t, tuple(walk), tuple(rules))


# -- pair selection --------------------------------------------------------

@dataclass(frozen=True)
class PairPolicy:
    """Which ordered pairs ``s != t`` to route: all of them, or a uniform sample."""

    count: int | None = None
    seed: int = 0

    @classmethod
    def exhaustive(cls) -> "PairPolicy":
        return cls(None)

    @classmethod
    def sampled(cls, count: int, seed: int = 0) -> "PairPolicy":
        if count < 1:
            raise ValueError("sample count must be positive")
        return cls(count, seed)

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "PairPolicy":
        """``"all"`` or ``"sample:K"``."""
        if text == "all":
            return cls.exhaustive()
        kind, _, k = text.partition(":")
        if kind != "sample" or not k.isdigit():
            raise ValueError(f"pair policy must be 'all' or 'sample:K', got {text!r}")
        return cls.sampled(int(k), seed)

    @property
    def is_exhaustive(self) -> bool:
        return self.count is None

    def describe(self) -> str:
        return "all" if self.count is None else f"sample:{self.count}"


def pair_blocks(n: int, policy: PairPolicy) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(t, sources)`` blocks in ascending ``t``, sources ascending.

    Sampling draws ordered pairs uniformly without replacement; a count above
    ``n(n-1)`` is clamped to the exhaustive set.
    """
    total = n * (n - 1)
    count = policy.count
    if count is not None and count >= total:
        if count > total:
            log.warning("requested %d pairs but only %d exist; routing all pairs", count, total)
        count = None
    if count is None:
        everyone = np.arange(n, dtype=np.int64)
        for t in range(n):
            yield t, np.delete(everyone, t)
        return
    rng = np.random.default_rng(policy.seed)
    idx = rng.choice(total, size=count, replace=False)
    s = idx // (n - 1)
    r = idx % (n - 1)
    t = r + (r >= s)
    order = np.lexsort((s, t))
    s, t = s[order], t[order]
    cuts = np.flatnonzero(np.diff(t)) + 1
    for ss, tt in zip(np.split(s, cuts), np.split(t, cuts)):
        yield int(tt[0]), ss


def route_all_pairs(scheme: Scheme, policy: PairPolicy) -> Iterator[RouteTrace]:
    for t, sources in pair_blocks(scheme.node_count, policy):
        for s in sources.tolist():
            yield route(scheme, s, t)


# -- batched kernel path ---------------------------------------------------

class BatchRouter:
    """Hop counts for many sources toward one target at a time, via the kernels."""

    def __init__(self, scheme: Scheme):
        self.scheme = scheme
        n = scheme.node_count
        self._pos = np.full(n, -1, dtype=np.int32)
        self._nbr = np.zeros(n, dtype=np.int32)

    def hops_to(self, t: int, sources: np.ndarray) -> np.ndarray:
        sc = self.scheme
        g = sc.graph
        sources = np.ascontiguousarray(sources, dtype=np.int64)
        out = np.empty(len(sources), dtype=np.int32)
        failed = kernels.route_to_target(
            g.indptr, g.indices, sc.label_ptr, sc.label_nodes, sc.hub_slot, sc.next_hop,
            t, sources, out, self._pos, self._nbr, sc.node_count)
        if failed >= 0:
            raise InvariantViolation(
                f"route {int(sources[failed])}->{t} did not terminate within {sc.node_count} hops")
        return out
