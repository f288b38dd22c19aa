"""Command-line entry point: ``hubroute <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from hubroute.edgelist import read_edge_list, write_edge_list
from hubroute.errors import DataError, InvariantViolation
from hubroute.experiments import EXPERIMENTS, ExperimentConfig, HubScalePolicy, run
from hubroute.generators import (
    PoissonConfig,
    PowerLawConfig,
    configuration_model,
    sample_poisson,
    sample_power_law,
)
from hubroute.graph import giant_component
from hubroute.router import PairPolicy, route, route_all_pairs
from hubroute.scheme import TIEBREAKS, SchemeConfig, build_scheme, dump_scheme, load_scheme

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INVARIANT = 0, 1, 2, 3

log = logging.getLogger("hubroute")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _csv(kind):
    def parse(text: str):
        try:
            return tuple(kind(x) for x in text.split(",") if x)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated {kind.__name__} values, got {text!r}")
    return parse


def _open_out(path: str | None):
    return open(path, "w", encoding="utf-8") if path else sys.stdout


def _load_graph(path: str, giant: bool = True):
    loaded = read_edge_list(path)
    g = loaded.graph
    if giant:
        g, _ = giant_component(g)
    return g


def cmd_generate(args) -> int:
    if args.family == "power_law":
        degrees = sample_power_law(PowerLawConfig(args.n, args.gamma, args.kmin, args.kmax), [args.seed, 0])
    else:
        degrees = sample_poisson(PoissonConfig(args.n, args.mean_degree), [args.seed, 0])
    built = configuration_model(degrees, [args.seed, 1])
    g = built.graph
    if args.giant:
        g, _ = giant_component(g)
    header = (f"family={args.family} n={args.n} gamma={args.gamma} kmin={args.kmin} kmax={args.kmax} "
              f"mean_degree={args.mean_degree} seed={args.seed}\n"
              f"discarded self_loops={built.self_loops} multi_edges={built.multi_edges}")
    out = _open_out(args.out)
    try:
        write_edge_list(g, out, header)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_ingest(args) -> int:
    loaded = read_edge_list(args.graph_file)
    giant, old_to_new = giant_component(loaded.graph)
    g = giant if args.giant else loaded.graph
    if args.out:
        write_edge_list(g, args.out, f"ingested from {args.graph_file}")
    if args.mapping:
        with open(args.mapping, "w", encoding="utf-8") as fh:
            fh.write("# original_id dense_id\n")
            for new, orig in enumerate(loaded.original_ids.tolist()):
                dense = int(old_to_new[new]) if args.giant else new
                if dense >= 0:
                    fh.write(f"{orig} {dense}\n")
    summary = {
        "file": args.graph_file,
        "nodes": loaded.graph.node_count,
        "edges": loaded.graph.edge_count,
        "dropped_self_loops": loaded.self_loops,
        "dropped_duplicates": loaded.duplicates,
        "giant_component_nodes": giant.node_count,
        "giant_component_edges": giant.edge_count,
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _hub_count(args, n: int) -> int:
    if args.hubs is not None:
        return min(args.hubs, n)
    return HubScalePolicy(args.nu).hubs(n)


def cmd_build(args) -> int:
    g = _load_graph(args.graph_file)
    scheme = build_scheme(g, SchemeConfig(_hub_count(args, g.node_count), args.tiebreak))
    out = _open_out(args.out)
    try:
        dump_scheme(scheme, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_route(args) -> int:
    if args.scheme:
        scheme = load_scheme(args.scheme)
    elif args.graph_file:
        g = _load_graph(args.graph_file)
        scheme = build_scheme(g, SchemeConfig(_hub_count(args, g.node_count), args.tiebreak))
    else:
        raise UsageError("route needs --scheme or --graph-file")
    out = _open_out(args.out)
    try:
        if args.all or args.command == "trace":
            policy = PairPolicy.parse(args.pairs, args.seed)
            for tr in route_all_pairs(scheme, policy):
                out.write(json.dumps(tr.to_dict()) + "\n")
        else:
            if args.source is None or args.target is None:
                raise UsageError("route needs --source and --target (or --all)")
            out.write(json.dumps(route(scheme, args.source, args.target).to_dict()) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_experiment(args) -> int:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
    data["experiment"] = args.experiment_id
    cfg = ExperimentConfig.from_dict(data)
    over = {
        "family": args.family, "hubs": args.hubs, "seed": args.seed, "realizations": args.realizations,
        "pairs": args.pairs, "out": args.out, "format": args.format, "graph_file": args.graph_file,
        "mean_degree": args.mean_degree, "k_max": args.kmax, "closest_hub_tiebreak": args.tiebreak,
        "families": args.families,
    }
    if args.n:
        over["n_values"] = args.n
    if args.gamma:
        over.update(gamma=args.gamma[0], gamma_values=args.gamma)
    if args.kmin:
        over.update(k_min=args.kmin[0], k_min_values=args.kmin)
    if args.nu:
        over.update(nu=args.nu[0], nu_values=args.nu)
    if args.experiment_id == "real_graph" and args.family is None:
        over["family"] = "file"
    cfg = cfg.with_overrides(**over)
    result = run(cfg)
    if not cfg.out:
        sys.stdout.write(result.render())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hubroute", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="sample a configuration-model graph and write an edge list")
    g.add_argument("--family", choices=("power_law", "poisson"), default="power_law")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--gamma", type=float, default=2.3)
    g.add_argument("--kmin", type=int, default=2)
    g.add_argument("--kmax", type=int)
    g.add_argument("--mean-degree", type=float, default=7.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--giant", action="store_true", help="keep only the giant component")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    i = sub.add_parser("ingest", help="load an external edge list, report and clean it")
    i.add_argument("--graph-file", required=True)
    i.add_argument("--out", help="write the densified edge list here")
    i.add_argument("--mapping", help="write 'original_id dense_id' lines here")
    i.add_argument("--giant", action="store_true", help="restrict output to the giant component")
    i.set_defaults(func=cmd_ingest)

    def scheme_flags(q):
        q.add_argument("--hubs", type=int, help="hub count H (default: scaled by --nu)")
        q.add_argument("--nu", type=int, default=1, help="exponent in H ~ log^nu N, anchored at H(10000)=100")
        q.add_argument("--tiebreak", choices=TIEBREAKS, default="higher_degree")

    b = sub.add_parser("build", help="build hubs, labels and tables; write a scheme dump")
    b.add_argument("--graph-file", required=True)
    scheme_flags(b)
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("route", aliases=["trace"], help="route one pair, or stream traces with --all")
    r.add_argument("--scheme", help="scheme dump written by 'build'")
    r.add_argument("--graph-file", help="build the scheme on the fly from this edge list")
    scheme_flags(r)
    r.add_argument("--source", type=int)
    r.add_argument("--target", type=int)
    r.add_argument("--all", action="store_true", help="stream traces for a pair set")
    r.add_argument("--pairs", default="all", help="all | sample:K (with --all)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.set_defaults(func=cmd_route)

    e = sub.add_parser("experiment", help="run a reproduction experiment")
    e.add_argument("experiment_id", choices=EXPERIMENTS)
    e.add_argument("--config", help="JSON file with ExperimentConfig fields; flags override it")
    e.add_argument("--family", choices=("power_law", "poisson", "file"))
    e.add_argument("--families", type=_csv(str))
    e.add_argument("--n", type=_csv(int), help="comma-separated sizes")
    e.add_argument("--gamma", type=_csv(float), help="comma-separated exponents")
    e.add_argument("--kmin", type=_csv(int), help="comma-separated minimum degrees")
    e.add_argument("--kmax", type=int)
    e.add_argument("--mean-degree", type=float)
    e.add_argument("--nu", type=_csv(int), help="comma-separated hub-scaling exponents")
    e.add_argument("--hubs", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--realizations", type=int)
    e.add_argument("--pairs", help="all | sample:K")
    e.add_argument("--tiebreak", choices=TIEBREAKS)
    e.add_argument("--graph-file")
    e.add_argument("--out")
    e.add_argument("--format", choices=("csv", "json"))
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"hubroute: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"hubroute: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InvariantViolation as exc:
        print(f"hubroute: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"hubroute: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
