"""Command-line entry point.

Exit status: 0 success, 2 bad input, 3 solver refused (too many clusters).
Summaries go to stdout as ``key=value`` pairs on one line; timings go to
stderr so stdout is reproducible byte for byte.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from .experiment import STRATEGIES, SweepConfig, emit_csv, run_sweep
from .network import (AgentParams, EdgeListParseError, Product, format_edge_list, format_params,
                      read_edge_list, read_params, sample_params)
from .optimize import (DEFAULT_CLUSTER_LIMIT, BudgetedInstance, EnumerationLimitError, budgeted_exact,
                       budgeted_greedy, clique_reduction, optimal_generalized, optimal_unbudgeted)

EXIT_INPUT = 2
EXIT_REFUSED = 3


class InputError(Exception):
    pass


def rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _labels(xs) -> str:
    return ",".join(str(x) for x in xs)


def _load_instance(args):
    net = read_edge_list(args.graph, mode=args.mode)
    if args.params:
        params = read_params(args.params, net)
    elif args.sample:
        if args.seed is None:
            raise InputError("--sample needs --seed")
        params = sample_params(args.sample, args.seed, net.node_count)
    else:
        raise InputError("give --params FILE or --sample DIST --seed N")
    return net, params


def _product(args) -> Product:
    return Product(float(args.phi), args.p, args.q)


def cmd_solve(args) -> int:
    t0 = time.perf_counter()
    net, params = _load_instance(args)
    product = _product(args)
    solver = optimal_unbudgeted if args.basic else optimal_generalized
    res = solver(net, params, product)
    total = time.perf_counter() - t0
    labels = net.labels
    print(f"payoff={res.payoff} seeds={_labels(res.seed_labels(net))} n_seeds={len(res.seeds)} "
          f"clusters={res.cluster_count} cut={res.cut.cut_value} flow={res.cut.flow_value} "
          f"phi={product.phi!r} p={product.p} q={product.q}")
    if args.verbose:
        exp = res.exposure
        for name in ("exposed", "accepted", "rejected", "ignored"):
            print(f"{name}={_labels(sorted(int(labels[i]) for i in getattr(exp, name)))}")
    if args.dump_flow:
        with open(args.dump_flow, "w") as fh:
            fh.write(res.flow.dump())
    print(f"mincut_seconds={res.mincut_seconds!r} total_seconds={total!r}", file=sys.stderr)
    return 0


def cmd_sweep(args) -> int:
    net = read_edge_list(args.graph, mode=args.mode)
    cfg = SweepConfig(phi_count=args.phis, trials=args.trials, distribution=args.dist, p=args.p, q=args.q,
                      rng_seed=args.seed, strategies=tuple(args.strategies.split(",")),
                      timing=args.timing, workers=args.workers)
    log = open(args.log, "w") if args.log else None
    try:
        records = run_sweep(net, cfg, log=log)
    finally:
        if log:
            log.close()
    text = emit_csv(records)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_budgeted(args) -> int:
    net, params = _load_instance(args)
    inst = BudgetedInstance(net, params, _product(args), args.k)
    if args.method == "exact":
        res = budgeted_exact(inst, limit=args.limit)
    else:
        res = budgeted_greedy(inst)
    print(f"payoff={res.payoff} seeds={_labels(res.seed_labels(net))} n_seeds={len(res.seeds)} "
          f"clusters={res.cluster_count} method={args.method} k={args.k}")
    return 0


def cmd_reduce(args) -> int:
    g = read_edge_list(args.graph, mode=args.mode)
    inst = clique_reduction(g, args.k, args.epsilon)
    with open(f"{args.out}.edges", "w") as fh:
        fh.write(format_edge_list(inst.net))
    with open(f"{args.out}.params", "w") as fh:
        fh.write(format_params(inst.params, inst.net, basic=True))
    pr = inst.product
    print(f"nodes={inst.net.node_count} edges={inst.net.edge_count} p={pr.p} q={pr.q} k={inst.k} "
          f"phi={pr.phi!r} edges_file={args.out}.edges params_file={args.out}.params")
    return 0


def cmd_gen_params(args) -> int:
    net = read_edge_list(args.graph, mode=args.mode)
    params: AgentParams = sample_params(args.dist, args.seed, net.node_count)
    text = format_params(params, net)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="overexposure",
                                 description="Seed-set optimization for cascades with rejection costs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def graph_args(sp):
        sp.add_argument("--graph", required=True, help="edge-list file")
        sp.add_argument("--mode", choices=("symmetrize", "undirected"), default="symmetrize")

    def instance_args(sp):
        graph_args(sp)
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--params", help="file with 'label tau theta sigma' or 'label theta' lines")
        src.add_argument("--sample", choices=("uniform", "gauss"), help="draw thresholds instead")
        sp.add_argument("--seed", type=int, help="RNG seed for --sample")
        sp.add_argument("--phi", type=rational, required=True, help="product appeal in [0, 1]")
        sp.add_argument("--p", type=rational, default=Fraction(1), help="payoff per acceptance")
        sp.add_argument("--q", type=rational, default=Fraction(1), help="cost per rejection")

    sp = sub.add_parser("solve", help="optimal unbudgeted seed set")
    instance_args(sp)
    model = sp.add_mutually_exclusive_group()
    model.add_argument("--basic", action="store_true", help="require the two-behavior model")
    model.add_argument("--general", action="store_true", help="four-type model (default)")
    sp.add_argument("--verbose", "-v", action="store_true")
    sp.add_argument("--dump-flow", metavar="FILE", help="write the flow network as 'tail head capacity' lines")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("sweep", help="average payoffs over sampled thresholds and appeal values")
    graph_args(sp)
    sp.add_argument("--dist", choices=("uniform", "gauss"), default="uniform")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--phis", type=int, default=100)
    sp.add_argument("--p", type=rational, default=Fraction(1))
    sp.add_argument("--q", type=rational, default=Fraction(1))
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--strategies", default=",".join(STRATEGIES))
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--timing", action="store_true", help="fill the timing columns (output no longer reproducible)")
    sp.add_argument("--log", metavar="FILE", help="JSON-lines record per (trial, phi, strategy)")
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("budgeted", help="best seed set of at most k agents")
    instance_args(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--method", choices=("exact", "greedy"), default="exact")
    sp.add_argument("--limit", type=int, default=DEFAULT_CLUSTER_LIMIT, help="cluster cap for exact search")
    sp.set_defaults(func=cmd_budgeted)

    sp = sub.add_parser("reduce", help="budgeted instance encoding k-clique on a regular graph")
    graph_args(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--epsilon", type=rational, required=True)
    sp.add_argument("--out", required=True, metavar="PREFIX")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("gen-params", help="sample a threshold file")
    graph_args(sp)
    sp.add_argument("--dist", choices=("uniform", "gauss"), default="uniform")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_gen_params)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EnumerationLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except (EdgeListParseError, InputError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
