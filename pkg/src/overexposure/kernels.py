"""Graph kernels: exposure closure, component labelling, boundary scan, max-flow.

Each kernel has a loop form (compiled with numba when enabled) and a
vectorized numpy form. The public wrappers pick one through ``backend``
(``"numba"``, ``"numpy"`` or ``None`` for the process default, see
:mod:`overexposure._jit`). Both forms return identical results; the test
suite checks this.
"""
from __future__ import annotations

import numpy as np

from ._jit import njit, resolve_backend

# capacities at or above this bound are routed through Python integers
INT64_SAFE = 2**61


def gather_neighbors(indptr: np.ndarray, indices: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Concatenated neighbor lists of ``nodes`` (with repetition)."""
    starts = indptr[nodes]
    lens = indptr[nodes + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=indices.dtype)
    offsets = np.repeat(starts - np.cumsum(lens) + lens, lens)
    return indices[offsets + np.arange(total)]


# --------------------------------------------------------------------------
# exposure closure


def _exposure_loop(indptr, indices, seeds, propagating):
    n = seeds.shape[0]
    exposed = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    top = 0
    for v in range(n):
        if seeds[v]:
            exposed[v] = True
            stack[top] = v
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        if not propagating[v]:
            continue
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if not exposed[w]:
                exposed[w] = True
                stack[top] = w
                top += 1
    return exposed


_exposure_nb = njit(_exposure_loop)


def _exposure_np(indptr, indices, seeds, propagating):
    exposed = seeds.copy()
    frontier = np.flatnonzero(seeds & propagating)
    while frontier.size:
        nbrs = gather_neighbors(indptr, indices, frontier)
        new = np.unique(nbrs[~exposed[nbrs]])
        exposed[new] = True
        frontier = new[propagating[new]]
    return exposed


def exposure(indptr, indices, seeds, propagating, backend=None) -> np.ndarray:
    """Boolean mask of agents reached from ``seeds``.

    Every seed is exposed. An exposed agent passes exposure to all of its
    neighbors only if it is marked ``propagating``.
    """
    seeds = np.asarray(seeds, dtype=np.bool_)
    propagating = np.asarray(propagating, dtype=np.bool_)
    if resolve_backend(backend) == "numba":
        return _exposure_nb(indptr, indices, seeds, propagating)
    return _exposure_np(indptr, indices, seeds, propagating)


# --------------------------------------------------------------------------
# connected components of a node subset


def _components_loop(indptr, indices, mask):
    n = mask.shape[0]
    comp = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    c = 0
    for r in range(n):
        if mask[r] and comp[r] < 0:
            comp[r] = c
            stack[0] = r
            top = 1
            while top > 0:
                top -= 1
                v = stack[top]
                for k in range(indptr[v], indptr[v + 1]):
                    w = indices[k]
                    if mask[w] and comp[w] < 0:
                        comp[w] = c
                        stack[top] = w
                        top += 1
            c += 1
    return comp, c


_components_nb = njit(_components_loop)


def _components_np(indptr, indices, mask):
    n = mask.shape[0]
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    keep = mask[src] & mask[indices]
    src, dst = src[keep], indices[keep]
    lab = np.arange(n, dtype=np.int64)
    while True:
        new = lab.copy()
        np.minimum.at(new, src, lab[dst])
        new = new[new]
        if np.array_equal(new, lab):
            break
        lab = new
    comp = np.full(n, -1, dtype=np.int64)
    roots = np.unique(lab[mask])
    comp[mask] = np.searchsorted(roots, lab[mask])
    return comp, int(roots.size)


def components(indptr, indices, mask, backend=None) -> tuple[np.ndarray, int]:
    """Label the connected components of the subgraph induced by ``mask``.

    Returns ``(comp, count)``; ``comp[v]`` is -1 outside the mask. Component
    ids are ordered by the smallest node index they contain.
    """
    mask = np.asarray(mask, dtype=np.bool_)
    if resolve_backend(backend) == "numba":
        comp, c = _components_nb(indptr, indices, mask)
        return comp, int(c)
    return _components_np(indptr, indices, mask)


# --------------------------------------------------------------------------
# boundary incidence


def _boundary_loop(indptr, indices, comp, bmask, ncomp, capacity):
    n = bmask.shape[0]
    stamp = np.full(ncomp, -1, dtype=np.int64)
    out_c = np.empty(capacity, dtype=np.int64)
    out_v = np.empty(capacity, dtype=np.int64)
    m = 0
    for v in range(n):
        if not bmask[v]:
            continue
        for k in range(indptr[v], indptr[v + 1]):
            c = comp[indices[k]]
            if c >= 0 and stamp[c] != v:
                stamp[c] = v
                out_c[m] = c
                out_v[m] = v
                m += 1
    return out_c[:m], out_v[:m]


_boundary_nb = njit(_boundary_loop)


def _boundary_np(indptr, indices, comp, bmask, ncomp):
    n = bmask.shape[0]
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    c = comp[indices]
    keep = bmask[src] & (c >= 0)
    key = np.unique(c[keep] * n + src[keep])
    return key // n, key % n


def boundary_pairs(indptr, indices, comp, ncomp, bmask, backend=None):
    """Distinct ``(component, agent)`` pairs for ``bmask`` agents adjacent to a component.

    Sorted by component, then agent.
    """
    bmask = np.asarray(bmask, dtype=np.bool_)
    if resolve_backend(backend) == "numba":
        capacity = int(np.diff(indptr)[bmask].sum())
        pc, pv = _boundary_nb(indptr, indices, comp, bmask, ncomp, capacity)
        order = np.argsort(pc, kind="stable")
        return pc[order], pv[order]
    return _boundary_np(indptr, indices, comp, bmask, ncomp)


# --------------------------------------------------------------------------
# maximum flow (Dinic)


def _dinic_loop(n, adj_ptr, adj_edge, to, cap, s, t):
    flow = 0
    level = np.empty(n, dtype=np.int64)
    it = np.empty(n, dtype=np.int64)
    path = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    while True:
        for v in range(n):
            level[v] = -1
        level[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            for k in range(adj_ptr[v], adj_ptr[v + 1]):
                e = adj_edge[k]
                w = to[e]
                if cap[e] > 0 and level[w] < 0:
                    level[w] = level[v] + 1
                    queue[tail] = w
                    tail += 1
        if level[t] < 0:
            return flow, level
        for v in range(n):
            it[v] = adj_ptr[v]
        top = 0
        v = s
        while True:
            if v == t:
                f = cap[path[0]]
                for i in range(1, top):
                    if cap[path[i]] < f:
                        f = cap[path[i]]
                for i in range(top):
                    e = path[i]
                    cap[e] -= f
                    cap[e ^ 1] += f
                flow += f
                top = 0
                v = s
                continue
            advanced = False
            while it[v] < adj_ptr[v + 1]:
                e = adj_edge[it[v]]
                w = to[e]
                if cap[e] > 0 and level[w] == level[v] + 1:
                    path[top] = e
                    top += 1
                    v = w
                    advanced = True
                    break
                it[v] += 1
            if not advanced:
                if v == s:
                    break
                # dead end for the rest of this phase
                level[v] = -1
                top -= 1
                v = to[path[top] ^ 1]
                it[v] += 1


_dinic_nb = njit(_dinic_loop)


def max_flow(n_nodes, tail, head, cap, source, sink, backend=None):
    """Maximum ``source``-``sink`` flow by Dinic's blocking-flow phases.

    ``cap`` holds non-negative integers: an int64 array, or an object array of
    Python ints for values beyond :data:`INT64_SAFE`, which always runs on the
    uncompiled loop. Arithmetic is exact either way.

    Returns ``(flow_value, reachable)`` where ``reachable`` marks the nodes
    reachable from the source in the final residual network; this is the
    inclusion-minimal source side of a minimum cut.
    """
    tail = np.asarray(tail, dtype=np.int64)
    head = np.asarray(head, dtype=np.int64)
    m = tail.shape[0]
    to = np.empty(2 * m, dtype=np.int64)
    to[0::2] = head
    to[1::2] = tail
    owner = np.empty(2 * m, dtype=np.int64)
    owner[0::2] = tail
    owner[1::2] = head
    adj_edge = np.argsort(owner, kind="stable").astype(np.int64)
    adj_ptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=n_nodes), out=adj_ptr[1:])

    cap = np.asarray(cap)
    big = cap.dtype == object
    if big or resolve_backend(backend) == "numpy":
        rcap = [0] * (2 * m)
        rcap[0::2] = [int(c) for c in cap]
        flow, level = _dinic_loop(n_nodes, adj_ptr.tolist(), adj_edge.tolist(),
                                  to.tolist(), rcap, source, sink)
        return int(flow), level >= 0
    rcap = np.zeros(2 * m, dtype=np.int64)
    rcap[0::2] = np.asarray(cap, dtype=np.int64)
    flow, level = _dinic_nb(n_nodes, adj_ptr, adj_edge, to, rcap, source, sink)
    return int(flow), level >= 0
