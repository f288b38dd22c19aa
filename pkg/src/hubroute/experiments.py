"""Seeded experiment runners producing plot-ready CSV / JSON.

Every runner returns a :class:`Result` (rows plus metadata) and, when an
output path is configured, writes it. Identical configurations produce
byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable

import numpy as np

from hubroute.edgelist import read_edge_list
from hubroute.errors import DataError
from hubroute.generators import (
    PoissonConfig,
    PowerLawConfig,
    configuration_model,
    sample_poisson,
    sample_power_law,
)
from hubroute.graph import Graph, giant_component, graph_stats
from hubroute.metrics import StretchAccumulator, StretchReport, evaluate_scheme, measured_pairs
from hubroute.router import PairPolicy
from hubroute.scheme import SchemeConfig, build_scheme, label_size_distribution

log = logging.getLogger(__name__)

EXPERIMENTS = ("label_dist", "stretch_cdf", "stretch_vs_n", "stretch_vs_gamma", "real_graph")
FAMILIES = ("power_law", "poisson", "file")

# Exhaustive routing up to this many nodes, otherwise DEFAULT_SAMPLE pairs.
EXHAUSTIVE_LIMIT = 2000
DEFAULT_SAMPLE = 100_000

# Values measured on the authors' AS-level snapshot; reference only.
AS_GRAPH_REFERENCE = {"mean_pair_stretch": 1.067, "shortest_fraction": 0.79}


@dataclass(frozen=True)
class HubScalePolicy:
    """``H(N) = round(anchor_hubs * (ln N / ln anchor_n) ** nu)``, clamped to ``[1, N]``."""

    nu: int = 1
    anchor_n: int = 10_000
    anchor_hubs: int = 100

    def __post_init__(self):
        if self.nu < 0:
            raise ValueError("nu must be non-negative")
        if self.anchor_n < 2 or self.anchor_hubs < 1:
            raise ValueError("anchor must have N >= 2 and H >= 1")

    def hubs(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be positive")
        if n == 1:
            return 1
        h = self.anchor_hubs * (math.log(n) / math.log(self.anchor_n)) ** self.nu
        return int(min(max(math.floor(h + 0.5), 1), n))


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "stretch_vs_n"
    family: str = "power_law"
    n_values: tuple[int, ...] = (10_000,)
    gamma: float = 2.3
    gamma_values: tuple[float, ...] = (2.1, 2.3, 2.5, 2.7, 3.0, 3.5)
    k_min: int = 2
    k_min_values: tuple[int, ...] = (1, 2, 3)
    k_max: int | None = None
    mean_degree: float = 7.0
    nu: int = 1
    nu_values: tuple[int, ...] = (0, 1, 2, 3)
    poisson_nu_values: tuple[int, ...] = (3,)
    families: tuple[str, ...] = ("power_law", "poisson")
    anchor_n: int = 10_000
    anchor_hubs: int = 100
    hubs: int | None = None  # fixed H, overriding the scaling policy
    realizations: int = 10
    pairs: str | None = None  # "all", "sample:K", or None for size-dependent default
    seed: int = 0
    graph_file: str | None = None
    closest_hub_tiebreak: str = "higher_degree"
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if any(f not in ("power_law", "poisson") for f in self.families):
            raise ValueError("families may only contain power_law and poisson")
        if self.realizations < 1:
            raise ValueError("realizations must be at least 1")
        if not self.n_values or any(n < 2 for n in self.n_values):
            raise ValueError("n_values must be a non-empty list of sizes >= 2")
        if self.gamma <= 1 or any(g <= 1 for g in self.gamma_values):
            raise ValueError("gamma must exceed 1")
        if self.k_min < 1 or any(k < 1 for k in self.k_min_values):
            raise ValueError("k_min must be at least 1")
        if self.mean_degree <= 0:
            raise ValueError("mean_degree must be positive")
        if self.hubs is not None and self.hubs < 1:
            raise ValueError("hubs must be at least 1")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.pairs is not None:
            PairPolicy.parse(self.pairs)
        HubScalePolicy(self.nu, self.anchor_n, self.anchor_hubs)
        SchemeConfig(1, self.closest_hub_tiebreak)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data = {k: tuple(v) if isinstance(v, list) else v for k, v in data.items()}
        return cls(**data)

    def to_dict(self) -> dict[str, Any]:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def assumptions(self) -> list[str]:
        notes = []
        if self.family == "power_law" or "power_law" in self.families:
            notes.append("k_max defaults to the natural cutoff N**(1/(gamma-1))")
            if self.k_min == 2:
                notes.append("k_min=2 is an assumed default for the random-network runs")
        notes.append(f"closest-hub ties prefer {self.closest_hub_tiebreak.replace('_', ' ')} hubs")
        return notes


@dataclass
class Result:
    config: ExperimentConfig
    rows: list[dict[str, Any]]
    extra: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        echoed = {k: v for k, v in self.config.to_dict().items() if k != "out"}
        payload = {"config": echoed, "assumptions": self.config.assumptions(),
                   "rows": self.rows, **self.extra}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.rows:
            writer = csv.DictWriter(buf, fieldnames=list(self.rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.rows)
        return buf.getvalue()

    def render(self, fmt: str | None = None) -> str:
        return self.to_json() if (fmt or self.config.format) == "json" else self.to_csv()

    def write(self, path: str | Path | None = None) -> None:
        path = path or self.config.out
        if path is None:
            raise ValueError("no output path configured")
        Path(path).write_text(self.render(), encoding="utf-8")


# -- shared machinery --------------------------------------------------------

_FAMILY_TAG = {"power_law": 1, "poisson": 2, "file": 3}


def realization_seed(cfg: ExperimentConfig, family: str, n: int, r: int,
                     gamma: float | None = None, k_min: int | None = None) -> list[int]:
    gamma = cfg.gamma if gamma is None else gamma
    k_min = cfg.k_min if k_min is None else k_min
    return [cfg.seed, _FAMILY_TAG[family], n, int(round(gamma * 1000)), k_min, r]


@dataclass(frozen=True)
class Realization:
    graph: Graph  # giant component
    nominal_n: int
    discarded_stub_pairs: int


def realize(cfg: ExperimentConfig, family: str, n: int, r: int,
            gamma: float | None = None, k_min: int | None = None) -> Realization:
    gamma = cfg.gamma if gamma is None else gamma
    k_min = cfg.k_min if k_min is None else k_min
    seed = realization_seed(cfg, family, n, r, gamma, k_min)
    if family == "power_law":
        degrees = sample_power_law(PowerLawConfig(n, gamma, k_min, cfg.k_max), seed + [0])
    elif family == "poisson":
        degrees = sample_poisson(PoissonConfig(n, cfg.mean_degree), seed + [0])
    else:
        raise ValueError(f"family {family!r} is not a random ensemble")
    built = configuration_model(degrees, seed + [1])
    giant, _ = giant_component(built.graph)
    if giant.node_count < 2:
        raise DataError(f"realization {r} of {family} N={n} has no component with an edge")
    return Realization(giant, n, built.discarded)


def pair_policy(cfg: ExperimentConfig, n: int, seed: list[int]) -> PairPolicy:
    pair_seed = int(np.random.SeedSequence(seed + [2]).generate_state(1)[0])
    if cfg.pairs is not None:
        return PairPolicy.parse(cfg.pairs, pair_seed)
    if n <= EXHAUSTIVE_LIMIT:
        return PairPolicy.exhaustive()
    return PairPolicy.sampled(DEFAULT_SAMPLE, pair_seed)


def stretch_for_hub_counts(graph: Graph, hub_counts: list[int], policy: PairPolicy,
                           tiebreak: str = "higher_degree") -> list[StretchAccumulator]:
    """Route one pair set under several hub counts, sharing the distance pass."""
    total_pairs = graph.node_count * (graph.node_count - 1) if policy.is_exhaustive else policy.count
    if total_pairs <= 5_000_000:
        blocks = list(measured_pairs(graph, policy))
        source: Callable[[], Any] = lambda: blocks
    else:
        source = lambda: measured_pairs(graph, policy)
    return [evaluate_scheme(build_scheme(graph, SchemeConfig(min(h, graph.node_count), tiebreak)), source())
            for h in hub_counts]


def mean_se(values: list[float]) -> tuple[float, float]:
    a = np.asarray(values, dtype=np.float64)
    if len(a) < 2:
        return float(a.mean()), 0.0
    return float(a.mean()), float(a.std(ddof=1) / math.sqrt(len(a)))


def _echo(cfg: ExperimentConfig, **kw) -> dict[str, Any]:
    row = {
        "experiment": cfg.experiment,
        "family": kw.pop("family", cfg.family),
        "n": kw.pop("n", None),
        "gamma": kw.pop("gamma", cfg.gamma),
        "k_min": kw.pop("k_min", cfg.k_min),
        "k_max": cfg.k_max if cfg.k_max is not None else "natural",
        "mean_degree": cfg.mean_degree,
        "nu": kw.pop("nu", cfg.nu),
        "hubs": kw.pop("hubs", None),
        "seed": cfg.seed,
        "realizations": cfg.realizations,
        "pairs": kw.pop("pairs", cfg.pairs or "default"),
        "tiebreak": cfg.closest_hub_tiebreak,
    }
    row.update(kw)
    return row


def _hubs_for(cfg: ExperimentConfig, n: int, nu: int | None = None) -> int:
    if cfg.hubs is not None:
        return min(cfg.hubs, n)
    return HubScalePolicy(cfg.nu if nu is None else nu, cfg.anchor_n, cfg.anchor_hubs).hubs(n)


def _summarize(reports: list[StretchReport]) -> dict[str, float]:
    out = {}
    for key in ("mean_pair_stretch", "ratio_of_averages", "shortest_fraction"):
        m, se = mean_se([getattr(rep, key) for rep in reports])
        out[key] = m
        out[f"{key}_se"] = se
    return out


# -- runners -----------------------------------------------------------------

def _file_graph(cfg: ExperimentConfig) -> Graph:
    if not cfg.graph_file:
        raise ValueError("family 'file' needs graph_file")
    giant, _ = giant_component(read_edge_list(cfg.graph_file).graph)
    if giant.node_count < 2:
        raise DataError(f"{cfg.graph_file}: giant component has fewer than two nodes")
    return giant


def run_label_dist(cfg: ExperimentConfig) -> Result:
    """Label entry-count histogram averaged over realizations."""
    n = cfg.n_values[0]
    graphs: list[Graph]
    if cfg.family == "file":
        graphs = [_file_graph(cfg)]
    else:
        graphs = [realize(cfg, cfg.family, n, r).graph for r in range(cfg.realizations)]
    totals: dict[int, float] = {}
    max_entries, diameters, sizes = [], [], []
    hubs = _hubs_for(cfg, graphs[0].node_count if cfg.family == "file" else n)
    for r, g in enumerate(graphs):
        scheme = build_scheme(g, SchemeConfig(min(hubs, g.node_count), cfg.closest_hub_tiebreak))
        dist = label_size_distribution(scheme)
        for k, c in dist.entry_counts.items():
            totals[k] = totals.get(k, 0) + c
        max_entries.append(dist.max_entry_count)
        diameters.append(graph_stats(g, seed=r).diameter)
        sizes.append(g.node_count)
        log.info("label_dist realization %d: N=%d max entries %d", r, g.node_count, dist.max_entry_count)
    reps = len(graphs)
    mean_size = sum(sizes) / reps
    rows = [
        _echo(cfg, n=n, hubs=hubs, entry_count=k, mean_count=totals[k] / reps,
              fraction=totals[k] / sum(sizes))
        for k in sorted(totals)
    ]
    extra = {"giant_component_sizes": sizes, "max_entry_counts": max_entries,
             "diameters": diameters, "mean_giant_component_size": mean_size}
    return Result(cfg, rows, extra)


def run_stretch_cdf(cfg: ExperimentConfig) -> Result:
    """Inverse stretch CDF per network size, pooled over realizations."""
    rows, extra = [], {"per_n": {}}
    for n in cfg.n_values:
        hubs = _hubs_for(cfg, n)
        pooled = StretchAccumulator()
        reports = []
        for r in range(cfg.realizations):
            real = realize(cfg, cfg.family, n, r)
            policy = pair_policy(cfg, real.graph.node_count, realization_seed(cfg, cfg.family, n, r))
            acc, = stretch_for_hub_counts(real.graph, [hubs], policy, cfg.closest_hub_tiebreak)
            pooled += acc
            reports.append(acc.report())
        rep = pooled.report()
        stats = _summarize(reports)
        extra["per_n"][str(n)] = {**stats, "pooled": rep.summary()}
        for x, p in rep.inverse_cdf:
            rows.append(_echo(cfg, n=n, hubs=hubs, stretch=x, p_greater=p,
                              shortest_fraction=rep.shortest_fraction,
                              mean_pair_stretch=rep.mean_pair_stretch))
    return Result(cfg, rows, extra)


def run_stretch_vs_n(cfg: ExperimentConfig) -> Result:
    """Mean stretch over the grid of families, sizes and hub-scaling exponents."""
    rows = []
    for family in cfg.families:
        nus = list(cfg.nu_values if family == "power_law" else cfg.poisson_nu_values)
        for n in cfg.n_values:
            hub_counts = [_hubs_for(cfg, n, nu) for nu in nus]
            per_nu: list[list[StretchReport]] = [[] for _ in nus]
            sizes = []
            for r in range(cfg.realizations):
                real = realize(cfg, family, n, r)
                sizes.append(real.graph.node_count)
                policy = pair_policy(cfg, real.graph.node_count, realization_seed(cfg, family, n, r))
                accs = stretch_for_hub_counts(real.graph, hub_counts, policy, cfg.closest_hub_tiebreak)
                for bucket, acc in zip(per_nu, accs):
                    bucket.append(acc.report())
            for nu, h, reports in zip(nus, hub_counts, per_nu):
                rows.append(_echo(cfg, family=family, n=n, nu=nu, hubs=h,
                                  giant_component_size=sum(sizes) / len(sizes),
                                  **_summarize(reports)))
                log.info("stretch_vs_n %s N=%d nu=%d H=%d: %.4f", family, n, nu, h,
                         rows[-1]["mean_pair_stretch"])
    return Result(cfg, rows)


def run_stretch_vs_gamma(cfg: ExperimentConfig) -> Result:
    """Mean stretch over gamma x k_min at a fixed size, on giant components."""
    n = cfg.n_values[0]
    hubs = _hubs_for(cfg, n)
    rows = []
    for k_min in cfg.k_min_values:
        for gamma in cfg.gamma_values:
            reports, sizes = [], []
            for r in range(cfg.realizations):
                real = realize(cfg, "power_law", n, r, gamma=gamma, k_min=k_min)
                sizes.append(real.graph.node_count)
                seed = realization_seed(cfg, "power_law", n, r, gamma, k_min)
                policy = pair_policy(cfg, real.graph.node_count, seed)
                acc, = stretch_for_hub_counts(real.graph, [hubs], policy, cfg.closest_hub_tiebreak)
                reports.append(acc.report())
            rows.append(_echo(cfg, family="power_law", n=n, gamma=gamma, k_min=k_min, hubs=hubs,
                              giant_component_size=sum(sizes) / len(sizes), **_summarize(reports)))
    return Result(cfg, rows)


def run_real_graph(cfg: ExperimentConfig) -> Result:
    """Stretch on a supplied edge-list topology, e.g. an AS-level snapshot."""
    loaded = read_edge_list(cfg.graph_file) if cfg.graph_file else None
    if loaded is None:
        raise ValueError("real_graph needs graph_file")
    giant, _ = giant_component(loaded.graph)
    if giant.node_count < 2:
        raise DataError(f"{cfg.graph_file}: giant component has fewer than two nodes")
    hubs = min(cfg.hubs if cfg.hubs is not None else cfg.anchor_hubs, giant.node_count)
    policy = pair_policy(cfg, giant.node_count, [cfg.seed, _FAMILY_TAG["file"]])
    acc, = stretch_for_hub_counts(giant, [hubs], policy, cfg.closest_hub_tiebreak)
    rep = acc.report()
    row = _echo(cfg, family="file", n=giant.node_count, gamma="", k_min="", nu="", hubs=hubs,
                pairs=policy.describe(), graph_file=cfg.graph_file,
                file_nodes=loaded.graph.node_count, file_edges=loaded.graph.edge_count,
                dropped_self_loops=loaded.self_loops, dropped_duplicates=loaded.duplicates,
                **rep.summary())
    return Result(cfg, [row], {"reference": AS_GRAPH_REFERENCE, "inverse_cdf": [list(p) for p in rep.inverse_cdf]})


RUNNERS: dict[str, Callable[[ExperimentConfig], Result]] = {
    "label_dist": run_label_dist,
    "stretch_cdf": run_stretch_cdf,
    "stretch_vs_n": run_stretch_vs_n,
    "stretch_vs_gamma": run_stretch_vs_gamma,
    "real_graph": run_real_graph,
}


def run(cfg: ExperimentConfig) -> Result:
    result = RUNNERS[cfg.experiment](cfg)
    if cfg.out:
        result.write()
    return result
