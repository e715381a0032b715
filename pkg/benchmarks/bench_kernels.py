"""Time the compiled and pure-numpy kernel backends on the same random inputs.

    python benchmarks/bench_kernels.py --nodes 2000 --degree 14 --repeat 20

Each row reports the median wall time per call for both backends and their
ratio. The first call of every numba kernel is excluded as compilation.
"""
import argparse
import statistics
import time

import numpy as np

from overexposure import Network, SweepConfig, kernels, sample_params
from overexposure._jit import HAVE_NUMBA
from overexposure.cascade import decompose
from overexposure.experiment import run_trial
from overexposure.flow import FlowNetwork, min_cut
from overexposure.network import classify


def random_network(n, degree, seed):
    rng = np.random.default_rng(seed)
    m = n * degree // 2
    edges = rng.integers(0, n, size=(m, 2))
    return Network.from_edges(edges, n=n)


def median_time(fn, repeat):
    fn()  # warm-up / compile
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cases(net, phi, seed):
    params = sample_params("uniform", seed, net.node_count)
    types = classify(params, phi)
    prop = types == 4
    seeds = np.zeros(net.node_count, dtype=bool)
    seeds[np.flatnonzero(prop)[:5]] = True
    comp, k = kernels.components(net.indptr, net.indices, prop)
    boundary = types == 2
    fn = FlowNetwork.from_decomposition(decompose(net, types), 1, 1)
    cfg = SweepConfig(phi_count=100, trials=1, rng_seed=seed)
    return {
        "exposure": lambda b: kernels.exposure(net.indptr, net.indices, seeds, prop, backend=b),
        "components": lambda b: kernels.components(net.indptr, net.indices, prop, backend=b),
        "boundary_pairs": lambda b: kernels.boundary_pairs(net.indptr, net.indices, comp, k, boundary, backend=b),
        "min_cut": lambda b: min_cut(fn, backend=b),
        "trial (100 phi)": lambda b: run_trial(net, cfg, 0, backend=b),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=2000)
    ap.add_argument("--degree", type=int, default=14, help="mean degree of the random graph")
    ap.add_argument("--phi", type=float, default=0.6)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    net = random_network(args.nodes, args.degree, args.seed)
    print(f"graph: {net.node_count} nodes, {net.edge_count} edges, phi={args.phi}")
    print(f"{'kernel':<18}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, fn in cases(net, args.phi, args.seed).items():
        repeat = max(1, args.repeat // 10) if name.startswith("trial") else args.repeat
        fast = median_time(lambda: fn("numba"), repeat)
        slow = median_time(lambda: fn("numpy"), repeat)
        print(f"{name:<18}{fast * 1e3:>12.3f}{slow * 1e3:>12.3f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
