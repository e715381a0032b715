"""Exposure sets, payoffs and the cluster decomposition."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import kernels
from .network import AgentParams, AgentType, Network, Product, classify


@dataclass(frozen=True)
class Cluster:
    """A maximal group of broadcasting agents plus the rejecting agents it reaches.

    Seeding any interior member exposes exactly ``interior | boundary``.
    """

    canonical: int
    interior: frozenset[int]
    boundary: frozenset[int]


@dataclass(frozen=True)
class ExposureResult:
    exposed: frozenset[int]
    accepted: frozenset[int]
    rejected: frozenset[int]
    ignored: frozenset[int]
    payoff: Fraction


@dataclass(frozen=True)
class Decomposition:
    """Array form of the cluster decomposition at one appeal value.

    ``comp`` labels interior agents with their cluster id (-1 elsewhere);
    ``pair_cluster``/``pair_agent`` list every (cluster, boundary agent)
    incidence sorted by cluster then agent.
    """

    comp: np.ndarray
    canonicals: np.ndarray
    interior_sizes: np.ndarray
    pair_cluster: np.ndarray
    pair_agent: np.ndarray

    @property
    def count(self) -> int:
        return self.canonicals.shape[0]

    def boundary_slices(self) -> np.ndarray:
        return np.searchsorted(self.pair_cluster, np.arange(self.count + 1))


def seed_mask(n: int, seeds: Iterable[int]) -> np.ndarray:
    idx = np.fromiter((int(s) for s in seeds), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        bad = idx[(idx < 0) | (idx >= n)][0]
        raise IndexError(f"seed {int(bad)} out of range for {n} agents")
    mask = np.zeros(n, dtype=np.bool_)
    mask[idx] = True
    return mask


def exposure_mask(net: Network, types: np.ndarray, seeds: np.ndarray, backend=None) -> np.ndarray:
    return kernels.exposure(net.indptr, net.indices, seeds, types == AgentType.IV, backend=backend)


def scaled_payoff(types: np.ndarray, exposed: np.ndarray, P: int, Q: int) -> int:
    """Payoff times the common denominator of ``p`` and ``q``."""
    acc = int(np.count_nonzero(exposed & (types >= AgentType.III)))
    rej = int(np.count_nonzero(exposed & (types == AgentType.II)))
    return P * acc - Q * rej


def exposed_set(net: Network, params: AgentParams, product: Product, seeds: Iterable[int],
                backend=None) -> ExposureResult:
    """Everything a seed set reaches at the product's appeal.

    Seeds are always exposed, whatever their type. Only Type IV agents pass
    the product on. Exposed Type I agents are ignored (payoff 0), Type II
    reject (-q) and Types III/IV accept (+p).
    """
    types = classify(params, product.phi)
    exposed = exposure_mask(net, types, seed_mask(net.node_count, seeds), backend)
    P, Q, scale = product.scaled()

    def members(sel):
        return frozenset(np.flatnonzero(exposed & sel).tolist())

    return ExposureResult(
        exposed=members(np.ones_like(exposed)),
        accepted=members(types >= AgentType.III),
        rejected=members(types == AgentType.II),
        ignored=members(types == AgentType.I),
        payoff=Fraction(scaled_payoff(types, exposed, P, Q), scale),
    )


def payoff(net: Network, params: AgentParams, product: Product, seeds: Iterable[int],
           backend=None) -> Fraction:
    return exposed_set(net, params, product, seeds, backend).payoff


def decompose(net: Network, types: np.ndarray, backend=None) -> Decomposition:
    """Clusters over the broadcasting (Type IV) agents with Type II boundaries."""
    comp, count = kernels.components(net.indptr, net.indices, types == AgentType.IV, backend=backend)
    members = np.flatnonzero(comp >= 0)
    interior_sizes = np.bincount(comp[members], minlength=count).astype(np.int64)
    canonicals = np.full(count, -1, dtype=np.int64)
    # members ascend, so the first hit per cluster is its smallest index
    first = np.unique(comp[members], return_index=True)[1]
    canonicals[:] = members[first]
    pc, pv = kernels.boundary_pairs(net.indptr, net.indices, comp, count,
                                    types == AgentType.II, backend=backend)
    return Decomposition(comp, canonicals, interior_sizes, pc, pv)


def clusters(net: Network, params: AgentParams, product: Product, backend=None) -> list[Cluster]:
    """All distinct clusters, ordered by canonical (smallest interior) index.

    Interiors are the connected components of the broadcasting agents and
    are pairwise disjoint; boundaries may overlap. Silent acceptors (Type
    III) belong to neither.
    """
    d = decompose(net, classify(params, product.phi), backend)
    order = np.argsort(d.comp, kind="stable")
    starts = np.searchsorted(d.comp[order], np.arange(d.count + 1))
    bounds = d.boundary_slices()
    out = []
    for c in range(d.count):
        out.append(Cluster(
            canonical=int(d.canonicals[c]),
            interior=frozenset(order[starts[c]:starts[c + 1]].tolist()),
            boundary=frozenset(d.pair_agent[bounds[c]:bounds[c + 1]].tolist()),
        ))
    return out
