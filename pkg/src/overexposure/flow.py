"""The cluster/boundary flow network and its minimum s-t cut.

Layout: the source feeds one node per cluster with capacity ``p`` times the
interior size; each distinct boundary agent drains into the sink with
capacity ``q``; a cluster node links to each of its boundary agents with a
capacity larger than any finite cut. Cutting a source edge means "do not
seed this cluster", cutting a sink edge means "pay for exposing this agent".

All capacities are scaled to integers by the common denominator of ``p`` and
``q`` so every flow and cut value is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .cascade import Cluster, Decomposition
from .network import Product


@dataclass(frozen=True, eq=False)
class FlowNetwork:
    """Bipartite flow network; node ids are 0 (source), clusters, boundary agents, sink.

    ``canonicals[i]`` is the canonical agent of cluster node ``1 + i``;
    ``boundary_agents[j]`` is the agent behind node ``1 + k + j``. Edge ``e``
    of the middle layer joins cluster ``edge_cluster[e]`` to boundary node
    ``edge_boundary[e]``.
    """

    canonicals: np.ndarray
    interior_sizes: np.ndarray
    boundary_agents: np.ndarray
    edge_cluster: np.ndarray
    edge_boundary: np.ndarray
    p: Fraction
    q: Fraction

    @classmethod
    def from_decomposition(cls, d: Decomposition, p, q) -> "FlowNetwork":
        agents = np.unique(d.pair_agent)
        return cls(d.canonicals, d.interior_sizes, agents, d.pair_cluster,
                   np.searchsorted(agents, d.pair_agent), Fraction(p), Fraction(q))

    @property
    def cluster_count(self) -> int:
        return self.canonicals.shape[0]

    @property
    def boundary_count(self) -> int:
        return self.boundary_agents.shape[0]

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return self.cluster_count + self.boundary_count + 1

    @property
    def node_count(self) -> int:
        return self.cluster_count + self.boundary_count + 2

    def scaled(self) -> tuple[int, int, int]:
        return Product(0.0, self.p, self.q).scaled()

    def scaled_source_capacities(self) -> list[int]:
        P, _, _ = self.scaled()
        return [P * int(s) for s in self.interior_sizes]

    def scaled_infinity(self) -> int:
        """Smallest stand-in for an unbounded capacity: total finite capacity plus one."""
        P, Q, _ = self.scaled()
        return P * int(self.interior_sizes.sum()) + Q * self.boundary_count + 1

    @property
    def source_capacities(self) -> list[Fraction]:
        return [self.p * int(s) for s in self.interior_sizes]

    @property
    def total_source_capacity(self) -> Fraction:
        return self.p * int(self.interior_sizes.sum())

    def arcs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(tail, head, scaled capacity)`` for every arc, source arcs first.

        Capacities are int64 when they fit comfortably, else Python ints in an
        object array.
        """
        k, r, m = self.cluster_count, self.boundary_count, self.edge_cluster.shape[0]
        P, Q, _ = self.scaled()
        inf = self.scaled_infinity()
        tail = np.concatenate([np.zeros(k, np.int64), 1 + self.edge_cluster, 1 + k + np.arange(r)])
        head = np.concatenate([1 + np.arange(k), 1 + k + self.edge_boundary,
                               np.full(r, self.sink, np.int64)])
        dtype = np.int64 if inf < kernels.INT64_SAFE else object
        cap = np.empty(k + m + r, dtype=dtype)
        cap[:k] = [P * int(s) for s in self.interior_sizes] if dtype is object else P * self.interior_sizes
        cap[k:k + m] = inf
        cap[k + m:] = Q
        return tail.astype(np.int64), head.astype(np.int64), cap

    def dump(self) -> str:
        """Plain-text listing, one ``tail head capacity`` line per arc."""
        k = self.cluster_count
        lines = [
            f"# nodes: 0=source, 1..{k}=clusters, {k + 1}..{k + self.boundary_count}=boundary agents, "
            f"{self.sink}=sink",
        ]
        lines += [f"# cluster {1 + i} canonical agent {int(c)}" for i, c in enumerate(self.canonicals)]
        lines += [f"# boundary {1 + k + j} agent {int(a)}" for j, a in enumerate(self.boundary_agents)]
        tail, head, _ = self.arcs()
        caps = self.source_capacities + ["inf"] * self.edge_cluster.shape[0] + [self.q] * self.boundary_count
        lines += [f"{int(a)} {int(b)} {c}" for a, b, c in zip(tail, head, caps)]
        return "\n".join(lines) + "\n"


def build_flow_network(clusters: Sequence[Cluster], p, q) -> FlowNetwork:
    """Flow network for a list of clusters with disjoint interiors.

    Clusters are laid out by canonical index and boundary agents by index.
    """
    clusters = sorted(clusters, key=lambda c: c.canonical)
    seen: set[int] = set()
    for c in clusters:
        if seen & c.interior:
            raise ValueError("cluster interiors must be pairwise disjoint")
        seen |= c.interior
    agents = np.array(sorted(set().union(*(c.boundary for c in clusters))), dtype=np.int64)
    ec, eb = [], []
    for i, c in enumerate(clusters):
        for a in sorted(c.boundary):
            ec.append(i)
            eb.append(int(np.searchsorted(agents, a)))
    return FlowNetwork(
        canonicals=np.array([c.canonical for c in clusters], dtype=np.int64),
        interior_sizes=np.array([len(c.interior) for c in clusters], dtype=np.int64),
        boundary_agents=agents,
        edge_cluster=np.array(ec, dtype=np.int64),
        edge_boundary=np.array(eb, dtype=np.int64),
        p=Fraction(p),
        q=Fraction(q),
    )


@dataclass(frozen=True)
class CutResult:
    """A maximum flow together with the minimum cut read off its residual network."""

    source_side: frozenset[int]
    sink_side: frozenset[int]
    cut_value: Fraction
    flow_value: Fraction
    selected: np.ndarray  # cluster positions (0-based) on the source side


def min_cut(fn: FlowNetwork, backend=None) -> CutResult:
    """Max flow by Dinic's algorithm; the source side is the residual-reachable set.

    That source side is the inclusion-minimal one among all minimum cuts.
    """
    _, Q, scale = fn.scaled()
    tail, head, cap = fn.arcs()
    flow, reach = kernels.max_flow(fn.node_count, tail, head, cap, fn.source, fn.sink, backend=backend)
    # cut value recomputed from the arcs crossing X -> Y
    crossing = reach[tail] & ~reach[head]
    cut = int(cap[crossing].sum()) if crossing.any() else 0
    k = fn.cluster_count
    nodes = np.arange(fn.node_count)
    return CutResult(
        source_side=frozenset(nodes[reach].tolist()),
        sink_side=frozenset(nodes[~reach].tolist()),
        cut_value=Fraction(cut, scale),
        flow_value=Fraction(flow, scale),
        selected=np.flatnonzero(reach[1:1 + k]),
    )
