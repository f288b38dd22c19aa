import logging
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hubroute.errors import DataError
from hubroute.generators import PowerLawConfig, configuration_model, random_tree, sample_power_law
from hubroute.graph import Graph, giant_component
from hubroute.metrics import (
    CDF_GRID,
    DistanceOracle,
    StretchAccumulator,
    degree_distance_monotonicity,
    evaluate_scheme,
    log_buckets,
    stretch_report,
)
from hubroute.router import PairPolicy, route_all_pairs
from hubroute.scheme import build_scheme
from oracles import adjacency_sets, bfs_levels, complete_edges, path_edges, star_edges


def cm_graph(n, seed):
    deg = sample_power_law(PowerLawConfig(n, 2.3, 2), seed)
    return giant_component(configuration_model(deg, seed + 77).graph)[0]


def test_oracle_examples():
    assert DistanceOracle(Graph.from_edges(5, complete_edges(5))).distance(1, 3) == 1
    assert DistanceOracle(Graph.from_edges(5, path_edges(5))).distance(0, 4) == 4


def test_oracle_symmetric_and_exact():
    g = cm_graph(400, 2)
    oracle = DistanceOracle(g)
    rng = np.random.default_rng(0)
    adj = adjacency_sets(g)
    for s, t in rng.integers(g.node_count, size=(100, 2)).tolist():
        assert oracle.distance(s, t) == oracle.distance(t, s) == bfs_levels(adj, s)[t]
    assert list(oracle.distances([(0, 0)])) == [0]


def test_oracle_unreachable():
    with pytest.raises(DataError):
        DistanceOracle(Graph.from_edges(4, [(0, 1), (2, 3)]), cache=False).distance(0, 3)


def _acc(rs, ds):
    acc = StretchAccumulator()
    for r, d in zip(rs, ds):
        acc.add(r, d)
    return acc


def test_two_point_same_distance():
    rep = _acc([2, 3], [2, 2]).report()
    assert rep.mean_pair_stretch == 1.25
    assert rep.ratio_of_averages == 1.25
    assert rep.shortest_fraction == 0.5
    assert rep.max_stretch == 1.5


def test_two_notions_diverge():
    rep = _acc([2, 6], [2, 3]).report()
    assert rep.mean_pair_stretch == 1.5
    assert rep.ratio_of_averages == pytest.approx(1.6)


def test_inverse_cdf_shape():
    rep = _acc([2, 3, 7, 4, 5], [2, 2, 3, 4, 2]).report()
    xs = [x for x, _ in rep.inverse_cdf]
    ps = [p for _, p in rep.inverse_cdf]
    assert xs == sorted(xs)
    assert all(a >= b for a, b in zip(ps, ps[1:]))
    assert ps[0] == pytest.approx(1 - rep.shortest_fraction)
    assert dict(rep.inverse_cdf)[rep.max_stretch] == 0.0
    assert rep.max_stretch == 2.5
    # exact boundary: stretch 1.5 is not greater than grid point 1.5
    assert dict(rep.inverse_cdf)[1.5] == pytest.approx(2 / 5)
    assert len(CDF_GRID) == 41 and CDF_GRID[0] == 1 and CDF_GRID[-1] == 3


def test_add_rejects_zero_distance():
    with pytest.raises(ValueError):
        StretchAccumulator().add(0, 0)


@given(st.lists(st.tuples(st.integers(1, 12), st.integers(1, 6)), min_size=1, max_size=60), st.randoms())
def test_merge_is_order_free(pairs, rnd):
    pairs = [(max(r, d), d) for r, d in pairs]
    whole = _acc(*zip(*pairs)).report()
    rnd.shuffle(pairs)
    cut = len(pairs) // 2
    a, b = _acc(*zip(*pairs[:cut])) if cut else StretchAccumulator(), _acc(*zip(*pairs[cut:]))
    assert b.merge(a).report() == whole == a.merge(b).report()
    expect = sum(Fraction(r, d) for r, d in pairs) / len(pairs)
    assert whole.mean_pair_stretch == float(expect)
    assert whole.mean_pair_stretch >= 1 and whole.ratio_of_averages >= 1


def test_tree_exhaustive_is_optimal(backend):
    tree = random_tree(60, 3)
    sc = build_scheme(tree, 3)
    rep = evaluate_scheme(sc, PairPolicy.exhaustive()).report()
    assert rep.pair_count == 60 * 59
    assert (rep.mean_pair_stretch, rep.ratio_of_averages, rep.shortest_fraction) == (1.0, 1.0, 1.0)


def test_batch_matches_trace_report():
    g = cm_graph(120, 5)
    sc = build_scheme(g, 4)
    fast = evaluate_scheme(sc, PairPolicy.exhaustive()).report()
    slow = stretch_report(route_all_pairs(sc, PairPolicy.exhaustive()), DistanceOracle(g))
    assert fast == slow


def test_sampled_converges_to_exhaustive():
    g = cm_graph(500, 8)
    sc = build_scheme(g, 5)
    exact = evaluate_scheme(sc, PairPolicy.exhaustive()).report()
    acc = evaluate_scheme(sc, PairPolicy.sampled(20_000, 1))
    values = np.repeat([r / d for (r, d) in acc.counts], list(acc.counts.values()))
    se = values.std(ddof=1) / math.sqrt(len(values))
    assert abs(acc.report().mean_pair_stretch - exact.mean_pair_stretch) < 3 * se


def test_star_degree_distance():
    star = Graph.from_edges(10, star_edges(9))
    out = degree_distance_monotonicity([star, star], [(1, 1), (9, 9)], seed=0, targets_per_graph=10)
    leaves, center = out
    assert center.mean_distance == 1.0
    assert leaves.mean_distance == pytest.approx(17 / 9)
    assert center.mean_distance <= leaves.mean_distance


def test_ring_single_bucket_and_empty_dropped(caplog):
    ring = Graph.from_edges(12, [(i, (i + 1) % 12) for i in range(12)])
    with caplog.at_level(logging.WARNING):
        out = degree_distance_monotonicity([ring, ring], [(1, 1), (2, 2)], seed=1)
    assert [(b.lo, b.hi) for b in out] == [(2, 2)]
    assert "empty" in caplog.text


def test_degree_distance_needs_ensemble():
    with pytest.raises(ValueError):
        degree_distance_monotonicity([Graph.from_edges(2, [(0, 1)])], [(1, 1)], seed=0)


def test_log_buckets():
    assert log_buckets(20) == [(1, 1), (2, 3), (4, 7), (8, 15), (16, 31)]
