"""Hub-label compact routing on scale-free and random networks."""

from hubroute.errors import DataError, HubrouteError, InvariantViolation
from hubroute.generators import (
    PoissonConfig,
    PowerLawConfig,
    configuration_model,
    random_tree,
    sample_poisson,
    sample_power_law,
)
from hubroute.graph import Graph, bfs, giant_component, graph_stats
from hubroute.kernels import BACKEND
from hubroute.metrics import DistanceOracle, StretchReport, evaluate_scheme, stretch_report
from hubroute.router import PairPolicy, RouteTrace, route, route_all_pairs
from hubroute.scheme import Scheme, SchemeConfig, build_scheme, label_size_distribution, select_hubs

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DataError",
    "DistanceOracle",
    "Graph",
    "HubrouteError",
    "InvariantViolation",
    "PairPolicy",
    "PoissonConfig",
    "PowerLawConfig",
    "RouteTrace",
    "Scheme",
    "SchemeConfig",
    "StretchReport",
    "bfs",
    "build_scheme",
    "configuration_model",
    "evaluate_scheme",
    "giant_component",
    "graph_stats",
    "label_size_distribution",
    "random_tree",
    "route",
    "route_all_pairs",
    "sample_poisson",
    "sample_power_law",
    "select_hubs",
    "stretch_report",
]
