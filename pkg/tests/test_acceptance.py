"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""

import time

import numpy as np
import pytest

from hubroute.edgelist import write_edge_list
from hubroute.experiments import ExperimentConfig, run
from hubroute.generators import (
    PoissonConfig,
    PowerLawConfig,
    configuration_model,
    random_tree,
    sample_poisson,
    sample_power_law,
)
from hubroute.graph import giant_component, graph_stats
from hubroute.metrics import degree_distance_monotonicity, evaluate_scheme, log_buckets
from hubroute.router import BatchRouter, PairPolicy
from hubroute.scheme import build_scheme, label_size_distribution
from oracles import adjacency_sets, all_pairs

pytestmark = pytest.mark.slow

FIG3_N = (1000, 2500, 5000, 10_000)
FIG3_NU = (0, 1, 2, 3)


def verdict(log, number, ok, detail):
    line = f"C{number} {'PASS' if ok else 'FAIL'}: {detail}"
    log.append(line)
    print(line)
    assert ok, line


def power_law_graph(n, seed, k_min=2, gamma=2.3):
    deg = sample_power_law(PowerLawConfig(n, gamma, k_min), [seed, 0])
    return giant_component(configuration_model(deg, [seed, 1]).graph)[0]


# -- 1 ----------------------------------------------------------------------

def test_c1_tree_optimality(acceptance_log):
    start = time.perf_counter()
    sizes = (10, 100, 1000)
    pairs = 0
    worst = 1.0
    all_shortest = True
    for i in range(100):
        n = sizes[i % 3]
        tree = random_tree(n, i)
        sc = build_scheme(tree, (1, 3, 10)[(i // 3) % 3])
        acc = evaluate_scheme(sc, PairPolicy.exhaustive())
        rep = acc.report()
        pairs += rep.pair_count
        worst = max(worst, rep.max_stretch)
        all_shortest &= all(r == d for r, d in acc.counts) and rep.shortest_fraction == 1.0
        all_shortest &= rep.mean_pair_stretch == 1.0 and rep.pair_count == n * (n - 1)
    elapsed = time.perf_counter() - start
    verdict(acceptance_log, 1, all_shortest and elapsed < 60,
            f"tree optimality over 100 trees, {pairs} ordered pairs, max stretch {worst}, {elapsed:.1f}s (< 60s)")


# -- 2 ----------------------------------------------------------------------

def _reference_hops(sc, t):
    """Independent vectorised routing toward t: rule priority applied by overwrite order."""
    g = sc.graph
    n = g.node_count
    path = sc.label_path(t)
    nxt = sc.next_hop[sc.hub_slot[t]].astype(np.int64)   # rule 4
    nxt[path[1:]] = path[:-1]                             # rule 3
    nxt[g.adjacency(t)] = t                               # rule 2
    nxt[t] = t                                            # rule 1
    cur = np.arange(n)
    hops = np.zeros(n, dtype=np.int64)
    for _ in range(n):
        moving = cur != t
        if not moving.any():
            break
        hops[moving] += 1
        cur[moving] = nxt[cur[moving]]
    assert (cur == t).all(), "reference walk did not terminate"
    return nxt, hops


def test_c2_oracle_equivalence(acceptance_log):
    start = time.perf_counter()
    checked = 0
    failures = []
    for i in range(50):
        n = (100, 150, 200, 250, 300)[i % 5]
        g = power_law_graph(n, 1000 + i)
        adj = adjacency_sets(g)
        ref = all_pairs(adj)
        dist = np.array([[ref[s][t] for t in range(g.node_count)] for s in range(g.node_count)])
        for hubs in (1, 3, 10):
            sc = build_scheme(g, min(hubs, g.node_count))
            router = BatchRouter(sc)
            sources = np.arange(g.node_count)
            for t in range(g.node_count):
                nxt, ref_hops = _reference_hops(sc, t)
                hops = router.hops_to(t, sources)
                valid_steps = all(int(nxt[x]) in adj[x] for x in range(g.node_count) if x != t)
                h = sc.closest_hub(t)
                lo, hi = dist[:, t], dist[:, h] + dist[h, t]
                ok = valid_steps and np.array_equal(hops, ref_hops) and (lo <= hops).all() and (hops <= hi).all()
                checked += g.node_count
                if not ok:
                    failures.append((i, hubs, t))
    elapsed = time.perf_counter() - start
    verdict(acceptance_log, 2, not failures and elapsed < 120,
            f"{checked} routes on 50 graphs x H in {{1,3,10}} valid and within [d(s,t), d(s,h_t)+d(h_t,t)]; "
            f"{len(failures)} failures, {elapsed:.1f}s (< 120s)")


# -- 3 ----------------------------------------------------------------------

def _fig2(k_min, tiebreak="higher_degree"):
    cfg = ExperimentConfig(experiment="stretch_cdf", n_values=(10_000,), k_min=k_min, nu=1,
                           realizations=5, pairs="sample:100000", seed=0, closest_hub_tiebreak=tiebreak)
    stats = run(cfg).extra["per_n"]["10000"]
    return stats["shortest_fraction"], stats["shortest_fraction_se"], stats["mean_pair_stretch"]


def test_c3_fig2_headline(acceptance_log):
    sf, se, mps = _fig2(2)
    ok = abs(sf - 0.75) <= 0.05 and mps <= 1.15
    detail = (f"N=10000 gamma=2.3 k_min=2 H=100, 5 x 1e5 pairs: shortest_fraction {sf:.4f} (+-{se:.4f}) "
              f"target 0.75+-0.05, mean stretch {mps:.4f} (<= 1.15)")
    if not ok:
        sens = []
        for k_min in (1, 3):
            s_sf, _, s_mps = _fig2(k_min)
            sens.append(f"k_min={k_min}: sf {s_sf:.4f} stretch {s_mps:.4f}")
        l_sf, _, l_mps = _fig2(2, "lower_degree")
        sens.append(f"k_min=2 lower-degree hub ties: sf {l_sf:.4f} stretch {l_mps:.4f}")
        detail += "; sensitivity " + "; ".join(sens)
    verdict(acceptance_log, 3, ok, detail)


# -- 4, 5, 6 ------------------------------------------------------------------

@pytest.fixture(scope="module")
def fig3_rows():
    cfg = ExperimentConfig(experiment="stretch_vs_n", n_values=FIG3_N, nu_values=FIG3_NU,
                           poisson_nu_values=FIG3_NU, families=("power_law", "poisson"),
                           realizations=10, seed=0)
    return run(cfg).rows


def test_c4_ratio_of_averages_below_two(acceptance_log, fig3_rows):
    worst = max(fig3_rows, key=lambda r: r["ratio_of_averages"])
    ok = all(r["ratio_of_averages"] < 2 for r in fig3_rows) and len(fig3_rows) == 2 * len(FIG3_N) * len(FIG3_NU)
    verdict(acceptance_log, 4, ok,
            f"S < 2 in all {len(fig3_rows)} cells; max S {worst['ratio_of_averages']:.4f} "
            f"({worst['family']} N={worst['n']} nu={worst['nu']})")


def test_c5_scale_free_beats_er(acceptance_log, fig3_rows):
    margins = []
    for n in FIG3_N:
        er = next(r for r in fig3_rows if r["family"] == "poisson" and r["n"] == n and r["nu"] == 3)
        for sf in (r for r in fig3_rows if r["family"] == "power_law" and r["n"] == n):
            gap = er["mean_pair_stretch"] - sf["mean_pair_stretch"]
            combined = (er["mean_pair_stretch_se"] ** 2 + sf["mean_pair_stretch_se"] ** 2) ** 0.5
            margins.append((gap - 2 * combined, gap, n, sf["nu"]))
    tight = min(margins)
    verdict(acceptance_log, 5, tight[0] > 0,
            f"ER(<k>=7, nu=3) minus scale-free mean stretch exceeds 2 combined SE in all {len(margins)} "
            f"comparisons; smallest gap {tight[1]:.4f} at N={tight[2]} nu={tight[3]}")


def test_c6_flat_in_n(acceptance_log, fig3_rows):
    spreads = {}
    for nu in FIG3_NU:
        vals = [r["mean_pair_stretch"] for r in fig3_rows if r["family"] == "power_law" and r["nu"] == nu]
        spreads[nu] = max(vals) - min(vals)
    ok = all(s < 0.05 for s in spreads.values())
    verdict(acceptance_log, 6, ok,
            "max-min mean stretch across N per nu: " + ", ".join(f"nu={k}: {v:.4f}" for k, v in spreads.items())
            + " (< 0.05)")


# -- 7 ----------------------------------------------------------------------

def test_c7_label_and_table_size(acceptance_log):
    cases = []
    for i in range(10):
        cases.append((power_law_graph((100, 200, 300)[i % 3], 1000 + i), (1, 3, 10)[i % 3]))
    for k_min in (1, 2, 3):
        cases.append((power_law_graph(2000, 50 + k_min, k_min=k_min), 76))
    er = sample_poisson(PoissonConfig(2000, 7.0), [9, 0])
    cases.append((giant_component(configuration_model(er, [9, 1]).graph)[0], 50))
    cases.append((power_law_graph(10_000, 77), 100))
    cases.append((random_tree(1000, 5), 10))
    bad = []
    for g, hubs in cases:
        sc = build_scheme(g, hubs)
        diameter = graph_stats(g, exact_threshold=20_000).diameter
        dist = label_size_distribution(sc)
        tables_ok = True
        for i in range(g.node_count):
            table = sc.table(i)
            nbrs = set(table.neighbors)
            tables_ok &= table.entry_count == hubs + int(g.degree[i])
            tables_ok &= all(nh is None and h == i or nh in nbrs for h, nh in table.next_hop.items())
        if dist.max_entry_count > diameter + 1 or not tables_ok:
            bad.append((g.node_count, hubs, dist.max_entry_count, diameter))
    verdict(acceptance_log, 7, not bad,
            f"max label entries <= D+1 and table entries == H + degree on {len(cases)} graphs "
            f"(N up to 10000); violations: {bad}")


# -- 8 ----------------------------------------------------------------------

def test_c8_degree_distance_monotone(acceptance_log):
    graphs = [power_law_graph(2000, 3000 + i) for i in range(50)]
    top = max(int(g.degree.max()) for g in graphs)
    # buckets span the sampled degree support; nodes pushed below k_min by
    # simplification are reported separately, not gated
    below = degree_distance_monotonicity(graphs, [(1, 1)], seed=8)
    out = degree_distance_monotonicity(graphs, log_buckets(top, start=2), seed=8)
    violations = []
    for a, b in zip(out, out[1:]):
        if b.mean_distance > a.mean_distance + a.standard_error + b.standard_error:
            violations.append((a.lo, b.lo))
    table = ", ".join(f"[{b.lo},{b.hi}]:{b.mean_distance:.3f}+-{b.standard_error:.3f}" for b in out)
    extra = "".join(f"; below k_min [1,1] ({b.members} nodes): {b.mean_distance:.3f}+-{b.standard_error:.3f}"
                    for b in below)
    verdict(acceptance_log, 8, not violations and len(out) >= 4,
            f"bucket mean distance non-increasing within 1 SE: {table}{extra}")


# -- 9 ----------------------------------------------------------------------

def test_c9_determinism(acceptance_log, tmp_path):
    g = power_law_graph(400, 42)
    edge_file = tmp_path / "graph.txt"
    write_edge_list(g, edge_file)
    configs = [
        ExperimentConfig(experiment="label_dist", n_values=(300,), realizations=2),
        ExperimentConfig(experiment="stretch_cdf", n_values=(300, 500), realizations=2),
        ExperimentConfig(experiment="stretch_vs_n", n_values=(300, 2500), nu_values=(0, 3), realizations=2),
        ExperimentConfig(experiment="stretch_vs_gamma", n_values=(300,), gamma_values=(2.2, 2.8),
                         realizations=2),
        ExperimentConfig(experiment="real_graph", family="file", graph_file=str(edge_file), hubs=10),
    ]
    same = []
    for cfg in configs:
        for fmt in ("csv", "json"):
            a, b = tmp_path / f"{cfg.experiment}_a.{fmt}", tmp_path / f"{cfg.experiment}_b.{fmt}"
            run(cfg.with_overrides(format=fmt, out=str(a)))
            run(cfg.with_overrides(format=fmt, out=str(b)))
            same.append(a.read_bytes() == b.read_bytes() and a.stat().st_size > 0)
    verdict(acceptance_log, 9, all(same),
            f"{sum(same)}/{len(same)} experiment outputs byte-identical on rerun (5 experiments x csv/json)")
