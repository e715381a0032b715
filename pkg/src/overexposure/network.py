"""Networks, agent thresholds, products and agent classification."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np


class EdgeListParseError(ValueError):
    """Malformed line in an edge-list or parameter file."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class AgentType(enum.IntEnum):
    """How an agent reacts to a product of a given appeal.

    I ignores it, II views and rejects, III accepts silently, IV accepts and
    passes it on to its neighbors.
    """

    I = 1  # noqa: E741
    II = 2
    III = 3
    IV = 4


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected simple graph in CSR form over dense indices ``0..n-1``.

    ``labels[i]`` is the label node ``i`` carried in the source file.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: np.ndarray

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None,
                   labels: Iterable[int] | None = None) -> "Network":
        """Build from dense-index pairs. Self-loops and duplicates are dropped."""
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if n is None:
            n = int(arr.max()) + 1 if arr.size else 0
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        arr = arr[arr[:, 0] != arr[:, 1]]
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        key = np.unique(lo * max(n, 1) + hi)
        lo, hi = key // max(n, 1), key % max(n, 1)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        lab = np.arange(n, dtype=np.int64) if labels is None else np.asarray(list(labels), dtype=np.int64)
        if lab.shape != (n,):
            raise ValueError("labels must have one entry per node")
        if np.unique(lab).size != n:
            raise ValueError("labels must be distinct")
        return cls(indptr, dst[order].astype(np.int64), lab)

    @property
    def node_count(self) -> int:
        return self.indptr.shape[0] - 1

    @property
    def edge_count(self) -> int:
        return self.indices.shape[0] // 2

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(i).tolist() for i in range(self.node_count)]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> np.ndarray:
        """Undirected edges as an ``(m, 2)`` array with ``u < v``, sorted."""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees())
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def index_of(self, label: int) -> int:
        hits = np.flatnonzero(self.labels == label)
        if hits.size == 0:
            raise KeyError(label)
        return int(hits[0])

    def label_map(self) -> dict[int, int]:
        return {int(lab): i for i, lab in enumerate(self.labels)}

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.labels, other.labels))

    def __repr__(self):
        return f"Network(nodes={self.node_count}, edges={self.edge_count})"


def parse_edge_list(text: str | Iterable[str], mode: str = "symmetrize") -> Network:
    """Parse a SNAP-style edge list.

    Lines starting with ``#`` and blank lines are skipped. Each remaining line
    needs at least two integer labels; further columns (timestamps) are
    ignored. Labels are reindexed densely in order of first appearance. A
    label that only occurs in self-loops still becomes an (isolated) node.

    ``mode`` is ``"symmetrize"`` (directed input, an undirected edge exists
    if either direction is listed) or ``"undirected"`` (each line is an
    unordered pair). Both produce the same simple undirected graph.
    """
    if mode not in ("symmetrize", "undirected"):
        raise ValueError(f"unknown mode {mode!r}")
    lines = text.splitlines() if isinstance(text, str) else text
    index: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if len(tok) < 2:
            raise EdgeListParseError(lineno, f"expected two node labels, got {line!r}")
        ends = []
        for t in tok[:2]:
            try:
                lab = int(t)
            except ValueError:
                raise EdgeListParseError(lineno, f"non-integer node label {t!r}") from None
            if lab < 0:
                raise EdgeListParseError(lineno, f"negative node label {lab}")
            ends.append(index.setdefault(lab, len(index)))
        pairs.append((ends[0], ends[1]))
    return Network.from_edges(pairs, n=len(index), labels=index.keys())


def read_edge_list(path, mode: str = "symmetrize") -> Network:
    with open(path) as fh:
        return parse_edge_list(fh, mode=mode)


def format_edge_list(net: Network) -> str:
    """Emit ``net`` as an edge list that parses back to an identical Network.

    A node with no lower-indexed neighbor is announced with a self-loop line
    so that first-appearance order reproduces the dense indexing.
    """
    out = []
    lab = net.labels
    for u in range(net.node_count):
        lower = [v for v in net.neighbors(u).tolist() if v < u]
        if not lower:
            out.append(f"{lab[u]} {lab[u]}\n")
        out.extend(f"{lab[u]} {lab[v]}\n" for v in lower)
    return "".join(out)


# --------------------------------------------------------------------------
# agent thresholds


@dataclass(frozen=True, eq=False)
class AgentParams:
    """Per-agent thresholds ``tau <= theta <= sigma`` in ``[0, 1]``.

    ``tau`` is the appeal needed to look at a product, ``theta`` to accept
    it and ``sigma`` to pass it on.
    """

    tau: np.ndarray
    theta: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        for name in ("tau", "theta", "sigma"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        if not (self.tau.shape == self.theta.shape == self.sigma.shape) or self.tau.ndim != 1:
            raise ValueError("tau, theta and sigma must be 1-d arrays of equal length")
        ok = (0 <= self.tau) & (self.tau <= self.theta) & (self.theta <= self.sigma) & (self.sigma <= 1)
        if not ok.all():
            bad = int(np.flatnonzero(~ok)[0])
            raise ValueError(f"agent {bad}: need 0 <= tau <= theta <= sigma <= 1")

    @classmethod
    def basic(cls, theta) -> "AgentParams":
        """Two-behavior model: ``tau = 0`` and ``sigma = theta``."""
        theta = np.asarray(theta, dtype=np.float64)
        return cls(np.zeros_like(theta), theta, theta.copy())

    def __len__(self):
        return self.theta.shape[0]

    @property
    def is_basic(self) -> bool:
        return bool(np.all(self.tau == 0) and np.array_equal(self.theta, self.sigma))

    def subset(self, nodes) -> "AgentParams":
        return AgentParams(self.tau[nodes], self.theta[nodes], self.sigma[nodes])

    def __eq__(self, other):
        if not isinstance(other, AgentParams):
            return NotImplemented
        return all(np.array_equal(getattr(self, a), getattr(other, a)) for a in ("tau", "theta", "sigma"))


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x)) if isinstance(x, float) else Fraction(x)


@dataclass(frozen=True)
class Product:
    """Appeal ``phi`` plus the acceptance payoff ``p`` and rejection cost ``q``.

    ``p`` and ``q`` are stored as exact fractions; floats are converted through
    their shortest decimal representation.
    """

    phi: float
    p: Fraction = field(default=Fraction(1))
    q: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        object.__setattr__(self, "p", _as_fraction(self.p))
        object.__setattr__(self, "q", _as_fraction(self.q))
        object.__setattr__(self, "phi", float(self.phi))
        if not 0 <= self.phi <= 1:
            raise ValueError(f"phi must lie in [0, 1], got {self.phi}")
        if self.p <= 0 or self.q <= 0:
            raise ValueError("p and q must be positive")

    def with_phi(self, phi: float) -> "Product":
        return Product(phi, self.p, self.q)

    def scaled(self) -> tuple[int, int, int]:
        """``(P, Q, scale)`` with ``p = P/scale`` and ``q = Q/scale`` integral."""
        scale = math.lcm(self.p.denominator, self.q.denominator)
        return int(self.p * scale), int(self.q * scale), scale


def classify(params: AgentParams, phi: float) -> np.ndarray:
    """Vector of :class:`AgentType` codes (int8) for every agent at appeal ``phi``."""
    return np.where(phi < params.tau, 1,
                    np.where(phi < params.theta, 2,
                             np.where(phi < params.sigma, 3, 4))).astype(np.int8)


def classify_agent(params: AgentParams, i: int, phi: float) -> AgentType:
    if not 0 <= i < len(params):
        raise IndexError(i)
    tau, theta, sigma = params.tau[i], params.theta[i], params.sigma[i]
    if phi < tau:
        return AgentType.I
    if phi < theta:
        return AgentType.II
    if phi < sigma:
        return AgentType.III
    return AgentType.IV


def induced_accepting_subgraph(net: Network, params: AgentParams, phi: float) -> tuple[Network, np.ndarray]:
    """Subgraph on the Type II and Type IV agents at appeal ``phi``.

    In the basic model this is the whole graph whenever no agent is Type I or
    III. Returns the subgraph (labels carried over) and the array mapping its
    dense indices back to indices of ``net``.
    """
    types = classify(params, phi)
    keep = np.flatnonzero((types == AgentType.II) | (types == AgentType.IV))
    return subgraph(net, keep), keep


def subgraph(net: Network, nodes: np.ndarray) -> Network:
    nodes = np.asarray(nodes, dtype=np.int64)
    remap = np.full(net.node_count, -1, dtype=np.int64)
    remap[nodes] = np.arange(nodes.size)
    e = net.edges()
    if e.size:
        e = remap[e]
        e = e[(e >= 0).all(axis=1)]
    return Network.from_edges(e, n=nodes.size, labels=net.labels[nodes])


# --------------------------------------------------------------------------
# sampling and parameter files

DISTRIBUTIONS = ("uniform", "gauss")


def sample_params(dist: str, rng_seed, n: int) -> AgentParams:
    """Draw three values per agent and sort them into ``(tau, theta, sigma)``.

    ``dist`` is ``"uniform"`` on [0, 1] or ``"gauss"`` (mean 0.5, sd 0.1,
    clamped to [0, 1] before sorting). ``rng_seed`` may be an int or a
    :class:`numpy.random.SeedSequence`.
    """
    rng = np.random.default_rng(rng_seed)
    if dist == "uniform":
        draws = rng.random((n, 3))
    elif dist in ("gauss", "gaussian"):
        draws = np.clip(rng.normal(0.5, 0.1, (n, 3)), 0.0, 1.0)
    else:
        raise ValueError(f"unknown distribution {dist!r}")
    draws.sort(axis=1)
    return AgentParams(draws[:, 0].copy(), draws[:, 1].copy(), draws[:, 2].copy())


def parse_params(text: str | Iterable[str], net: Network) -> AgentParams:
    """Read ``label tau theta sigma`` (or ``label theta``) lines for every agent of ``net``."""
    lines = text.splitlines() if isinstance(text, str) else text
    where = net.label_map()
    n = net.node_count
    tau, theta, sigma = np.full(n, np.nan), np.full(n, np.nan), np.full(n, np.nan)
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if len(tok) not in (2, 4):
            raise EdgeListParseError(lineno, "expected 'label theta' or 'label tau theta sigma'")
        try:
            lab = int(tok[0])
            vals = [float(t) for t in tok[1:]]
        except ValueError:
            raise EdgeListParseError(lineno, f"malformed parameter line {line!r}") from None
        if lab not in where:
            raise EdgeListParseError(lineno, f"label {lab} is not a node of the graph")
        i = where[lab]
        if len(vals) == 1:
            tau[i], theta[i], sigma[i] = 0.0, vals[0], vals[0]
        else:
            tau[i], theta[i], sigma[i] = vals
        if not 0 <= tau[i] <= theta[i] <= sigma[i] <= 1:
            raise EdgeListParseError(lineno, "need 0 <= tau <= theta <= sigma <= 1")
    missing = np.flatnonzero(np.isnan(theta))
    if missing.size:
        raise ValueError(f"no parameters for node label {int(net.labels[missing[0]])}")
    return AgentParams(tau, theta, sigma)


def read_params(path, net: Network) -> AgentParams:
    with open(path) as fh:
        return parse_params(fh, net)


def format_params(params: AgentParams, net: Network, basic: bool = False) -> str:
    if basic:
        return "".join(f"{lab} {th!r}\n" for lab, th in zip(net.labels.tolist(), params.theta.tolist()))
    return "".join(f"{lab} {a!r} {b!r} {c!r}\n" for lab, a, b, c in zip(
        net.labels.tolist(), params.tau.tolist(), params.theta.tolist(), params.sigma.tolist()))
