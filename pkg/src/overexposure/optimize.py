"""Seed-set solvers: min-cut optimum, appeal search, budgeted search, baselines."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._jit import njit, resolve_backend
from .cascade import ExposureResult, decompose, exposed_set
from .flow import CutResult, FlowNetwork, min_cut
from .kernels import INT64_SAFE
from .network import AgentParams, AgentType, Network, Product, classify

DEFAULT_CLUSTER_LIMIT = 25
BASELINES = ("T3", "T3_and_T4", "tau_leq_phi")


class EnumerationLimitError(RuntimeError):
    """Too many clusters for exhaustive budgeted search."""

    def __init__(self, clusters: int, limit: int):
        super().__init__(f"{clusters} clusters exceed the enumeration limit of {limit}")
        self.clusters = clusters
        self.limit = limit


@dataclass(frozen=True)
class SeedResult:
    seeds: tuple[int, ...]
    payoff: Fraction
    exposure: ExposureResult
    method: str
    cluster_count: int = 0
    flow: FlowNetwork | None = field(default=None, repr=False)
    cut: CutResult | None = field(default=None, repr=False)
    mincut_seconds: float = 0.0

    def seed_labels(self, net: Network) -> list[int]:
        return sorted(int(net.labels[s]) for s in self.seeds)


@dataclass(frozen=True)
class BudgetedInstance:
    net: Network
    params: AgentParams
    product: Product
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("budget must be non-negative")


def _result(net, params, product, seeds, method, backend=None, **extra) -> SeedResult:
    seeds = tuple(sorted(int(s) for s in seeds))
    exp = exposed_set(net, params, product, seeds, backend=backend)
    return SeedResult(seeds, exp.payoff, exp, method, **extra)


def _require_basic(types: np.ndarray) -> None:
    bad = np.flatnonzero((types == AgentType.I) | (types == AgentType.III))
    if bad.size:
        raise ValueError(
            f"agent {int(bad[0])} is Type {AgentType(types[bad[0]]).name}; "
            "this solver needs every agent to either reject or accept-and-broadcast")


# --------------------------------------------------------------------------
# unbudgeted optimum


@dataclass(frozen=True)
class _MinCutSolution:
    seeds: np.ndarray
    payoff: Fraction
    flow: FlowNetwork
    cut: CutResult
    seconds: float


def _solve_mincut(net: Network, types: np.ndarray, product: Product, backend=None) -> _MinCutSolution:
    """Optimum over the Type II/IV agents plus every Type III agent."""
    d = decompose(net, types, backend)
    fn = FlowNetwork.from_decomposition(d, product.p, product.q)
    t0 = time.perf_counter()
    cut = min_cut(fn, backend=backend)
    seconds = time.perf_counter() - t0
    silent = np.flatnonzero(types == AgentType.III)
    seeds = np.concatenate([d.canonicals[cut.selected], silent])
    value = product.p * len(silent) + fn.total_source_capacity - cut.cut_value
    return _MinCutSolution(np.sort(seeds), value, fn, cut, seconds)


def optimal_unbudgeted(net: Network, params: AgentParams, product: Product, backend=None) -> SeedResult:
    """Optimal seed set when every agent either rejects or accepts and broadcasts.

    One canonical agent per cluster on the source side of the minimum cut;
    the payoff is the total source capacity minus the cut value.
    """
    types = classify(params, product.phi)
    _require_basic(types)
    sol = _solve_mincut(net, types, product, backend)
    res = _result(net, params, product, sol.seeds, "mincut", backend,
                  cluster_count=sol.flow.cluster_count, flow=sol.flow, cut=sol.cut,
                  mincut_seconds=sol.seconds)
    return _with_payoff(res, sol.payoff)


def optimal_generalized(net: Network, params: AgentParams, product: Product, backend=None) -> SeedResult:
    """Optimal seed set under the four-type model.

    Solves the Type II/IV subproblem by min-cut and adds every silent
    acceptor (Type III), each worth exactly ``p``. Type I agents never help.
    """
    types = classify(params, product.phi)
    sol = _solve_mincut(net, types, product, backend)
    res = _result(net, params, product, sol.seeds, "mincut", backend,
                  cluster_count=sol.flow.cluster_count, flow=sol.flow, cut=sol.cut,
                  mincut_seconds=sol.seconds)
    return _with_payoff(res, sol.payoff)


def _with_payoff(res: SeedResult, payoff: Fraction) -> SeedResult:
    # reported payoff is the min-cut identity; exposure carries the direct evaluation
    return SeedResult(res.seeds, payoff, res.exposure, res.method, res.cluster_count,
                      res.flow, res.cut, res.mincut_seconds)


def optimal_scaled_payoff(net: Network, types: np.ndarray, P: int, Q: int, backend=None) -> tuple[int, float, int]:
    """Scaled optimum for the sweep: ``(payoff * scale, min-cut seconds, seed count)``."""
    product = Product(0.0, Fraction(P), Fraction(Q))
    sol = _solve_mincut(net, types, product, backend)
    return int(sol.payoff), sol.seconds, int(sol.seeds.size)


# --------------------------------------------------------------------------
# appeal search


@dataclass(frozen=True)
class PhiPiece:
    """Appeal values ``[lo, hi)`` (or the single point ``lo == hi == 1``) sharing one optimum."""

    lo: float
    hi: float
    payoff: Fraction

    def __contains__(self, phi: float) -> bool:
        return self.lo <= phi < self.hi or phi == self.lo == self.hi


@dataclass(frozen=True)
class PhiResult:
    phi: float
    result: SeedResult
    profile: tuple[PhiPiece, ...]

    def payoff_at(self, phi: float) -> Fraction:
        for piece in self.profile:
            if phi in piece:
                return piece.payoff
        raise ValueError(f"phi={phi} outside [0, 1]")


def optimal_phi(net: Network, params: AgentParams, p=1, q=1, backend=None) -> PhiResult:
    """Best appeal and seed set over ``phi`` in [0, 1].

    Agent types only change at threshold values, and every type interval is
    closed on the left, so the optimum is constant on each ``[b_k, b_{k+1})``
    between consecutive breakpoints. Each piece is evaluated at its left end
    and at its midpoint. Ties go to the smallest appeal.
    """
    cuts = np.unique(np.concatenate([[0.0, 1.0], params.tau, params.theta, params.sigma]))
    base = Product(0.0, p, q)
    pieces, best = [], None
    for lo, hi in zip(cuts.tolist(), cuts[1:].tolist() + [1.0]):
        reps = [lo] if lo == hi else [lo, (lo + hi) / 2]
        vals = []
        for phi in reps:
            res = optimal_generalized(net, params, base.with_phi(phi), backend)
            vals.append(res.payoff)
            if best is None or res.payoff > best[1].payoff:
                best = (phi, res)
        pieces.append(PhiPiece(lo, hi, max(vals)))
    return PhiResult(best[0], best[1], tuple(pieces))


# --------------------------------------------------------------------------
# budgeted search


def _best_subset_loop(caps, bptr, bagents, r, Q, budget):
    k = caps.shape[0]
    cnt = np.zeros(r, dtype=np.int64)
    chosen = np.empty(max(k, 1), dtype=np.int64)
    best_sel = np.empty(max(k, 1), dtype=np.int64)
    best_size = 0
    best = caps[:0].sum()
    cur = best
    size = 0
    i = 0
    while True:
        if size < budget and i < k:
            cur += caps[i]
            for j in range(bptr[i], bptr[i + 1]):
                a = bagents[j]
                if cnt[a] == 0:
                    cur -= Q
                cnt[a] += 1
            chosen[size] = i
            size += 1
            if cur > best:
                best = cur
                best_size = size
                for j in range(size):
                    best_sel[j] = chosen[j]
            i += 1
        else:
            if size == 0:
                break
            size -= 1
            c = chosen[size]
            cur -= caps[c]
            for j in range(bptr[c], bptr[c + 1]):
                a = bagents[j]
                cnt[a] -= 1
                if cnt[a] == 0:
                    cur += Q
            i = c + 1
    return best, best_sel[:best_size]


_best_subset_nb = njit(_best_subset_loop)


def _budget_setup(inst: BudgetedInstance, backend):
    types = classify(inst.params, inst.product.phi)
    _require_basic(types)
    d = decompose(inst.net, types, backend)
    agents, local = np.unique(d.pair_agent, return_inverse=True)
    return d, local.astype(np.int64), agents.size


def budgeted_exact(inst: BudgetedInstance, limit: int = DEFAULT_CLUSTER_LIMIT, backend=None) -> SeedResult:
    """Best seed set of at most ``k`` agents, by enumerating cluster subsets.

    One seed per chosen cluster is enough, so subsets of clusters of size at
    most ``k`` are searched depth-first with running boundary counts. Among
    equal payoffs the lexicographically smallest cluster list wins, which
    makes the empty set the answer when nothing is positive.
    """
    d, local, r = _budget_setup(inst, backend)
    if d.count > limit:
        raise EnumerationLimitError(d.count, limit)
    P, Q, scale = inst.product.scaled()
    bptr = d.boundary_slices().astype(np.int64)
    big = P * int(d.interior_sizes.sum()) + Q * r >= INT64_SAFE
    if big or resolve_backend(backend) == "numpy":
        caps = np.array([P * int(s) for s in d.interior_sizes], dtype=object)
        value, sel = _best_subset_loop(caps, bptr, local, r, Q, min(inst.k, d.count))
    else:
        value, sel = _best_subset_nb(P * d.interior_sizes, bptr, local, r, Q, min(inst.k, d.count))
    res = _result(inst.net, inst.params, inst.product, d.canonicals[np.asarray(sel, dtype=np.int64)],
                  "brute", backend, cluster_count=d.count)
    return _with_payoff(res, Fraction(int(value), scale))


def budgeted_greedy(inst: BudgetedInstance, backend=None) -> SeedResult:
    """Add the cluster with the best marginal payoff until ``k`` are chosen or none helps.

    No approximation guarantee is possible for this problem; this is a
    baseline only.
    """
    d, local, r = _budget_setup(inst, backend)
    P, Q, scale = inst.product.scaled()
    bounds = d.boundary_slices()
    covered = np.zeros(r, dtype=bool)
    free = list(range(d.count))
    picked = []
    value = 0
    while len(picked) < inst.k and free:
        gains = [P * int(d.interior_sizes[c]) - Q * int(np.count_nonzero(~covered[local[bounds[c]:bounds[c + 1]]]))
                 for c in free]
        best = int(np.argmax(gains))
        if gains[best] <= 0:
            break
        c = free.pop(best)
        picked.append(c)
        covered[local[bounds[c]:bounds[c + 1]]] = True
        value += gains[best]
    res = _result(inst.net, inst.params, inst.product, d.canonicals[picked], "greedy", backend,
                  cluster_count=d.count)
    return _with_payoff(res, Fraction(value, scale))


def clique_reduction(g: Network, k: int, epsilon) -> BudgetedInstance:
    """Budgeted instance with a positive-payoff seed set of size <= k iff ``g`` has a k-clique.

    Every edge of the d-regular graph ``g`` is subdivided by a new rejecting
    agent; original agents accept and broadcast. With ``q = 1`` and
    ``p = d - (k-1)/2 + epsilon`` a k-clique pays exactly ``k * epsilon``.
    Subdivision agents get labels above the largest label of ``g``.
    """
    epsilon = Fraction(epsilon)
    n = g.node_count
    deg = g.degrees()
    if n == 0 or not np.all(deg == deg[0]):
        raise ValueError("graph must be regular")
    d = int(deg[0])
    if k < 1 or d < k:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    if not 0 < epsilon < Fraction(1, n * n):
        raise ValueError(f"need 0 < epsilon < 1/n^2 = 1/{n * n}")
    edges = g.edges()
    m = edges.shape[0]
    mid = n + np.arange(m, dtype=np.int64)
    new_edges = np.concatenate([np.column_stack([edges[:, 0], mid]), np.column_stack([edges[:, 1], mid])])
    start = int(g.labels.max()) + 1
    labels = np.concatenate([g.labels, start + np.arange(m, dtype=np.int64)])
    net = Network.from_edges(new_edges, n=n + m, labels=labels)
    theta = np.concatenate([np.zeros(n), np.ones(m)])
    p = d - Fraction(k - 1, 2) + epsilon
    return BudgetedInstance(net, AgentParams.basic(theta), Product(0.5, p, 1), k)


# --------------------------------------------------------------------------
# baselines


def baseline_seeds(types: np.ndarray, which: str) -> np.ndarray:
    if which == "T3":
        sel = types == AgentType.III
    elif which == "T3_and_T4":
        sel = types >= AgentType.III
    elif which == "tau_leq_phi":
        sel = types >= AgentType.II
    else:
        raise ValueError(f"unknown baseline {which!r}")
    return sel


def baseline_seed(net: Network, params: AgentParams, product: Product, which: str, backend=None) -> SeedResult:
    """Seed a whole type class and let the cascade run.

    ``T3`` seeds silent acceptors, ``T3_and_T4`` every acceptor, and
    ``tau_leq_phi`` every agent who looks at the product (rejecters included;
    they pay ``-q`` and do not pass it on).
    """
    sel = baseline_seeds(classify(params, product.phi), which)
    return _result(net, params, product, np.flatnonzero(sel), which, backend)


def upper_bound(params: AgentParams, product: Product) -> Fraction:
    """``p`` times the number of agents who would accept."""
    return product.p * int(np.count_nonzero(params.theta <= product.phi))


def naive_seed(net: Network, params: AgentParams, product: Product, backend=None) -> SeedResult:
    """Seed every cluster whose own payoff is non-negative."""
    types = classify(params, product.phi)
    d = decompose(net, types, backend)
    P, Q, _ = product.scaled()
    nb = np.diff(d.boundary_slices())
    keep = P * d.interior_sizes - Q * nb >= 0
    silent = np.flatnonzero(types == AgentType.III)
    return _result(net, params, product, np.concatenate([d.canonicals[keep], silent]), "naive", backend)

