import json

import pytest

from hubroute.errors import DataError
from hubroute.experiments import (
    AS_GRAPH_REFERENCE,
    ExperimentConfig,
    HubScalePolicy,
    run,
)
from hubroute.graph import bfs_distances
from hubroute.scheme import build_scheme, select_hubs
from oracles import path_edges


@pytest.mark.parametrize("nu", [0, 1, 2, 3])
def test_hub_anchor(nu):
    assert HubScalePolicy(nu).hubs(10_000) == 100


def test_hub_scaling_values():
    p = HubScalePolicy(1)
    assert p.hubs(1000) == 75  # 100 * 3/4
    assert HubScalePolicy(0).hubs(1000) == 100
    assert HubScalePolicy(3).hubs(1000) == 42  # 100 * 27/64 = 42.19
    assert HubScalePolicy(3).hubs(5) == 1
    assert HubScalePolicy(0).hubs(50) == 50


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="nope")
    with pytest.raises(ValueError):
        ExperimentConfig(realizations=0)
    with pytest.raises(ValueError):
        ExperimentConfig(pairs="most")
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"bogus": 1})


def test_config_dict_roundtrip():
    cfg = ExperimentConfig(n_values=(100, 200), nu_values=(1,), seed=4)
    assert ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def small(**kw):
    base = dict(n_values=(100,), realizations=2, seed=3)
    base.update(kw)
    return ExperimentConfig(**base)


def test_label_dist_smoke():
    res = run(small(experiment="label_dist"))
    total = sum(r["mean_count"] for r in res.rows)
    assert total == pytest.approx(res.extra["mean_giant_component_size"])
    assert sum(r["fraction"] for r in res.rows) == pytest.approx(1.0)
    for mx, d in zip(res.extra["max_entry_counts"], res.extra["diameters"]):
        assert mx <= d + 1
    assert all(r["n"] == 100 and r["seed"] == 3 for r in res.rows)


def test_label_dist_tree_file(tmp_path):
    p = tmp_path / "tree.txt"
    edges = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6), (6, 7)]
    p.write_text("".join(f"{u} {v}\n" for u, v in edges))
    res = run(ExperimentConfig(experiment="label_dist", family="file", graph_file=str(p), hubs=2))
    from hubroute.edgelist import read_edge_list
    g = read_edge_list(p).graph
    hubs = select_hubs(g, 2).tolist()
    rows = [bfs_distances(g, h) for h in hubs]
    expect = {}
    for i in range(g.node_count):
        k = min(int(r[i]) for r in rows) + 1
        expect[k] = expect.get(k, 0) + 1
    assert {r["entry_count"]: r["mean_count"] for r in res.rows} == expect
    assert build_scheme(g, 2).hub_count == 2


def test_stretch_cdf_smoke():
    res = run(small(experiment="stretch_cdf", n_values=(100, 200)))
    for n in (100, 200):
        pts = [(r["stretch"], r["p_greater"]) for r in res.rows if r["n"] == n]
        ps = [p for _, p in pts]
        assert ps == sorted(ps, reverse=True)
        assert pts[-1][1] == 0.0
        assert pts[0][1] == pytest.approx(1 - res.extra["per_n"][str(n)]["pooled"]["shortest_fraction"])


def test_stretch_vs_n_grid_shape():
    res = run(small(experiment="stretch_vs_n", n_values=(100, 150), nu_values=(0, 2)))
    keys = [(r["family"], r["n"], r["nu"]) for r in res.rows]
    assert keys == [("power_law", 100, 0), ("power_law", 100, 2), ("power_law", 150, 0),
                    ("power_law", 150, 2), ("poisson", 100, 3), ("poisson", 150, 3)]
    for r in res.rows:
        assert 1 <= r["mean_pair_stretch"] < 2
        assert r["ratio_of_averages"] < 2
        if r["nu"] == 0:
            assert r["hubs"] == 100


def test_stretch_vs_gamma_reports_giant():
    res = run(small(experiment="stretch_vs_gamma", n_values=(300,), gamma_values=(2.2, 3.0),
                    k_min_values=(1, 3)))
    assert len(res.rows) == 4
    for r in res.rows:
        assert 0 < r["giant_component_size"] <= 300
        assert 1 <= r["mean_pair_stretch"] < 2
    assert min(r["giant_component_size"] for r in res.rows if r["k_min"] == 1) < 300


def test_real_graph_path_file(tmp_path):
    p = tmp_path / "path.txt"
    p.write_text("# tiny\n" + "".join(f"{u} {v}\n" for u, v in path_edges(12)) + "3 4\n")
    res = run(ExperimentConfig(experiment="real_graph", family="file", graph_file=str(p), hubs=2,
                               format="json"))
    row = res.rows[0]
    assert row["mean_pair_stretch"] == 1.0 and row["shortest_fraction"] == 1.0
    assert row["dropped_duplicates"] == 1
    assert res.extra["reference"] == AS_GRAPH_REFERENCE
    assert json.loads(res.render())["rows"][0]["pairs"] == "all"


def test_real_graph_missing_file(tmp_path):
    with pytest.raises(DataError):
        run(ExperimentConfig(experiment="real_graph", family="file", graph_file=str(tmp_path / "x")))


def test_outputs_deterministic(tmp_path):
    for fmt in ("csv", "json"):
        a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        run(small(experiment="stretch_vs_n", out=str(a), format=fmt, n_values=(120,), nu_values=(1,)))
        run(small(experiment="stretch_vs_n", out=str(b), format=fmt, n_values=(120,), nu_values=(1,)))
        assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    run(small(experiment="stretch_vs_n", out=str(c), seed=4, n_values=(120,), nu_values=(1,)))
    assert c.read_bytes() != (tmp_path / "a.csv").read_bytes()
