"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--n 5000] [--repeat 3]

Both backends run the same inputs; results are checked for equality before
timings are printed.
"""

import argparse
import time

import numpy as np

from hubroute import _pykernels
from hubroute.generators import PowerLawConfig, configuration_model, sample_power_law
from hubroute.graph import giant_component
from hubroute.scheme import build_scheme

try:
    from hubroute import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def workloads(k, scheme, sources, targets):
    g = scheme.graph
    n = g.node_count
    indptr, indices = g.indptr, g.indices

    def bfs():
        dist = np.empty(n, dtype=np.int32)
        parent = np.empty(n, dtype=np.int32)
        for s in sources[:20]:
            k.bfs_tree(indptr, indices, int(s), dist, parent)
        return dist.copy()

    def distances():
        dist = np.empty(n, dtype=np.int32)
        queue = np.empty(n, dtype=np.int32)
        return k.distance_summary(indptr, indices, sources[:20].astype(np.int64), dist, queue)

    def route():
        hops = np.empty(len(sources), dtype=np.int32)
        pos = np.full(n, -1, dtype=np.int32)
        nbr = np.zeros(n, dtype=np.int32)
        total = 0
        for t in targets:
            src = sources[sources != t].astype(np.int64)
            failed = k.route_to_target(indptr, indices, scheme.label_ptr, scheme.label_nodes,
                                       scheme.hub_slot, scheme.next_hop, int(t), src,
                                       hops[: len(src)], pos, nbr, n)
            assert failed == -1
            total += int(hops[: len(src)].sum())
        return total

    return {"bfs x20": bfs, "distance pass x20": distances, "route 5 targets": route}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    deg = sample_power_law(PowerLawConfig(args.n, 2.3, 2), [0, 0])
    g, _ = giant_component(configuration_model(deg, [0, 1]).graph)
    scheme = build_scheme(g, 50)
    rng = np.random.default_rng(0)
    sources = rng.permutation(g.node_count)[:2000].astype(np.int32)
    targets = rng.choice(g.node_count, 5, replace=False)
    print(f"graph: {g.node_count} nodes, {g.edge_count} edges, H=50")

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled kernels not built; timing the Python fallback only")

    timings = {}
    results = {}
    for name, mod in backends.items():
        for label, fn in workloads(mod, scheme, sources, targets).items():
            timings[name, label], results[name, label] = best_of(fn, args.repeat)

    print(f"{'workload':<20}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for label in workloads(_pykernels, scheme, sources, targets):
        py = timings["python", label]
        if "cython" in backends:
            cy = timings["cython", label]
            res_py, res_cy = results["python", label], results["cython", label]
            same = np.array_equal(np.asarray(res_py), np.asarray(res_cy))
            print(f"{label:<20}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x" + ("" if same else "  MISMATCH"))
        else:
            print(f"{label:<20}{py:>12.4f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
