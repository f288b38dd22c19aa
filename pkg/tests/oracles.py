"""Reference computations that share no code with the package kernels."""

from collections import deque
from itertools import combinations


def adjacency_sets(graph):
    adj = [set() for _ in range(graph.node_count)]
    for u, v in graph.edges().tolist():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def bfs_levels(adj, source):
    dist = {source: 0}
    q = deque([source])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def all_pairs(adj):
    return [bfs_levels(adj, s) for s in range(len(adj))]


def perfect_matchings(items):
    """Every perfect matching of a list with an even number of items."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest)):
        for tail in perfect_matchings(rest[:k] + rest[k + 1:]):
            yield [(first, rest[k])] + tail


def path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def star_edges(leaves):
    return [(0, i) for i in range(1, leaves + 1)]


def complete_edges(n):
    return list(combinations(range(n), 2))
