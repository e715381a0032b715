from fractions import Fraction

import numpy as np
import pytest

from overexposure import Cluster, Network, Product, build_flow_network, clusters, min_cut, payoff

from conftest import random_graph
from oracles import brute_force_min_cut, random_params


def test_shared_structure(shared, unit):
    cl = clusters(shared.net, shared.params, unit)
    fn = build_flow_network(cl, 1, 1)
    assert fn.cluster_count == 2 and fn.boundary_count == 3
    assert fn.node_count == 7 and fn.sink == 6
    tail, head, cap = fn.arcs()
    inf = fn.scaled_infinity()
    assert cap[:2].tolist() == [2, 2]
    assert cap[-3:].tolist() == [1, 1, 1]
    assert np.count_nonzero(cap == inf) == 6
    assert inf > cap[cap != inf].sum()
    assert tail[:2].tolist() == [0, 0] and head[-3:].tolist() == [6, 6, 6]


def test_shared_cut(shared, unit, backend):
    fn = build_flow_network(clusters(shared.net, shared.params, unit), 1, 1)
    cut = min_cut(fn, backend=backend)
    assert cut.cut_value == cut.flow_value == 3
    assert fn.total_source_capacity - cut.cut_value == 1


def test_from_decomposition_matches_builder(nonmodular, unit):
    from overexposure.cascade import decompose
    from overexposure.network import classify
    d = decompose(nonmodular.net, classify(nonmodular.params, 0.5))
    a = type(build_flow_network([], 1, 1)).from_decomposition(d, 1, 1)
    b = build_flow_network(clusters(nonmodular.net, nonmodular.params, unit), 1, 1)
    for t, u in zip(a.arcs(), b.arcs()):
        assert t.tolist() == u.tolist()


def test_empty_network(backend):
    fn = build_flow_network([], 1, 1)
    assert fn.node_count == 2
    cut = min_cut(fn, backend=backend)
    assert cut.cut_value == 0 and cut.selected.size == 0
    assert cut.source_side == {0} and cut.sink_side == {1}


def test_single_cluster():
    # interior of size 1, boundary of 3: seeding loses, cut takes the source edge
    fn = build_flow_network([Cluster(0, frozenset({0}), frozenset({1, 2, 3}))], 1, 1)
    cut = min_cut(fn)
    assert cut.cut_value == 1
    assert cut.selected.size == 0


def test_cluster_without_boundary_always_selected():
    fn = build_flow_network([Cluster(4, frozenset({4, 5}), frozenset())], 1, 1)
    cut = min_cut(fn)
    assert cut.cut_value == 0 and cut.selected.tolist() == [0]


def test_overlapping_interiors_rejected():
    with pytest.raises(ValueError):
        build_flow_network([Cluster(0, frozenset({0, 1}), frozenset()),
                            Cluster(1, frozenset({1}), frozenset())], 1, 1)


def test_boundary_matching():
    cl = [Cluster(5, frozenset({5}), frozenset({9, 2})), Cluster(0, frozenset({0, 1}), frozenset({2}))]
    fn = build_flow_network(cl, 1, 1)
    assert fn.canonicals.tolist() == [0, 5]
    assert fn.boundary_agents.tolist() == [2, 9]
    pairs = {(int(fn.canonicals[c]), int(fn.boundary_agents[b])) for c, b in zip(fn.edge_cluster, fn.edge_boundary)}
    assert pairs == {(0, 2), (5, 2), (5, 9)}


def test_rational_scaling():
    cl = [Cluster(0, frozenset({0, 1}), frozenset({2}))]
    fn = build_flow_network(cl, "1/3", "1/2")
    _, _, cap = fn.arcs()
    assert cap[0] == 4 and cap[-1] == 3
    cut = min_cut(fn)
    assert cut.cut_value == Fraction(1, 2)
    assert fn.total_source_capacity - cut.cut_value == Fraction(1, 6)


def test_huge_capacities_take_exact_path():
    cl = [Cluster(0, frozenset({0}), frozenset({1}))]
    fn = build_flow_network(cl, Fraction(2**70 + 1, 2**3), 1)
    _, _, cap = fn.arcs()
    assert cap.dtype == object
    cut = min_cut(fn)
    assert cut.cut_value == 1 and cut.selected.tolist() == [0]


def random_case(rng):
    n = int(rng.integers(2, 14))
    net = Network.from_edges(random_graph(rng, n), n=n)
    params = random_params(rng, n, basic=True)
    product = Product(float(rng.random()), int(rng.integers(1, 4)), int(rng.integers(1, 4)))
    return net, params, product


def test_cut_certificates_and_identity(backend):
    rng = np.random.default_rng(30)
    for _ in range(120):
        net, params, product = random_case(rng)
        cl = clusters(net, params, product)
        fn = build_flow_network(cl, product.p, product.q)
        cut = min_cut(fn, backend=backend)
        tail, head, cap = fn.arcs()
        # max-flow / min-cut certificate
        assert cut.cut_value == cut.flow_value
        assert cut.cut_value <= product.q * fn.boundary_count
        assert cut.cut_value <= fn.total_source_capacity
        # no infinite arc crosses the cut
        inf = fn.scaled_infinity()
        for a, b, c in zip(tail, head, cap):
            if c == inf:
                assert not (a in cut.source_side and b in cut.sink_side)
        # enumerated min cut agrees on small networks
        if fn.node_count <= 14:
            arcs = list(zip(tail.tolist(), head.tolist(), cap.tolist()))
            _, _, scale = fn.scaled()
            assert brute_force_min_cut(fn.node_count, arcs, fn.source, fn.sink) == cut.cut_value * scale
        # the source side, seeded, earns exactly capacity minus cut
        seeds = fn.canonicals[cut.selected]
        assert payoff(net, params, product, seeds) == fn.total_source_capacity - cut.cut_value


def test_dump_format(shared, unit):
    fn = build_flow_network(clusters(shared.net, shared.params, unit), 1, "1/2")
    lines = fn.dump().splitlines()
    body = [ln for ln in lines if not ln.startswith("#")]
    assert len(body) == 2 + 6 + 3
    assert body[0] == "0 1 2"
    assert body[2].endswith(" inf")
    assert body[-1] == "5 6 1/2"
    assert any("canonical agent" in ln for ln in lines)
