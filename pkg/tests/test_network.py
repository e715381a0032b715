import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overexposure import (AgentParams, AgentType, EdgeListParseError, Network, Product, classify,
                          classify_agent, format_edge_list, induced_accepting_subgraph, parse_edge_list,
                          parse_params, sample_params)
from overexposure.network import format_params

from conftest import random_graph


def edge_set(net):
    return {tuple(sorted((int(net.labels[a]), int(net.labels[b])))) for a, b in net.edges()}


def test_parse_simple_path():
    net = parse_edge_list("1 2\n2 3\n")
    assert net.node_count == 3
    assert edge_set(net) == {(1, 2), (2, 3)}
    assert net.labels.tolist() == [1, 2, 3]


def test_parse_dedups_and_drops_timestamps():
    net = parse_edge_list("# comment\n5 7 1082040961\n7 5 1082041000\n")
    assert net.node_count == 2
    assert edge_set(net) == {(5, 7)}


def test_parse_reindexes_in_first_appearance_order():
    net = parse_edge_list("10 3\n3 99\n\n99 10\n")
    assert net.labels.tolist() == [10, 3, 99]
    assert net.adjacency == [[1, 2], [0, 2], [0, 1]]


def test_self_loops_dropped_but_node_kept():
    net = parse_edge_list("4 4\n1 2\n")
    assert net.node_count == 3
    assert net.edge_count == 1
    assert net.neighbors(0).size == 0


def test_modes_agree():
    text = "1 2\n2 1\n3 1\n"
    assert parse_edge_list(text, mode="symmetrize") == parse_edge_list(text, mode="undirected")
    with pytest.raises(ValueError):
        parse_edge_list(text, mode="directed")


@pytest.mark.parametrize("text, line", [
    ("1 2\n3\n", 2),
    ("# x\n1 a\n", 2),
    ("1 2\n2 3\n-1 4\n", 3),
    ("1.5 2\n", 1),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(EdgeListParseError) as err:
        parse_edge_list(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_empty_input():
    net = parse_edge_list("# nothing\n")
    assert net.node_count == 0
    assert net.edge_count == 0


def test_network_invariants_symmetric_simple():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(1, 30))
        net = Network.from_edges(random_graph(rng, n) + [(0, 0)], n=n)
        adj = net.adjacency
        for i, nb in enumerate(adj):
            assert i not in nb
            assert nb == sorted(set(nb))
            for j in nb:
                assert i in adj[j]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)), max_size=60))
def test_round_trip(pairs):
    text = "".join(f"{a} {b}\n" for a, b in pairs)
    net = parse_edge_list(text)
    again = parse_edge_list(format_edge_list(net))
    assert again == net
    assert parse_edge_list(format_edge_list(again)) == net


# --------------------------------------------------------------------------
# classification


@pytest.mark.parametrize("params, phi, expected", [
    ((0.1, 0.4, 0.8), 0.5, AgentType.III),
    ((0.1, 0.4, 0.8), 0.05, AgentType.I),
    ((0.0, 0.3, 0.3), 0.3, AgentType.IV),
    ((0.1, 0.4, 0.8), 0.1, AgentType.II),
    ((0.1, 0.4, 0.8), 0.4, AgentType.III),
    ((0.1, 0.4, 0.8), 0.8, AgentType.IV),
])
def test_classify_agent(params, phi, expected):
    p = AgentParams(*([x] for x in params))
    assert classify_agent(p, 0, phi) is expected
    assert classify(p, phi)[0] == expected


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=3, max_size=3), st.floats(0, 1))
def test_classification_partitions(vals, phi):
    tau, theta, sigma = sorted(vals)
    p = AgentParams([tau], [theta], [sigma])
    holds = [phi < tau, tau <= phi < theta, theta <= phi < sigma, phi >= sigma]
    assert sum(holds) == 1
    assert classify_agent(p, 0, phi) == AgentType(holds.index(True) + 1)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=20), st.floats(0, 1))
def test_basic_model_has_only_types_two_and_four(theta, phi):
    types = classify(AgentParams.basic(theta), phi)
    assert set(types.tolist()) <= {AgentType.II, AgentType.IV}


def test_agent_params_validation():
    with pytest.raises(ValueError):
        AgentParams([0.5], [0.4], [0.6])
    with pytest.raises(ValueError):
        AgentParams([0.0], [0.4], [1.2])
    with pytest.raises(IndexError):
        classify_agent(AgentParams.basic([0.1]), 3, 0.5)


def test_product_validation_and_scaling():
    assert Product(0.3, "1/3", "1/2").scaled() == (2, 3, 6)
    assert Product(0.3, 0.1, 2).p == Product(0.3, "1/10", 2).p
    for bad in ((1.5, 1, 1), (0.5, 0, 1), (0.5, 1, -1)):
        with pytest.raises(ValueError):
            Product(*bad)


# --------------------------------------------------------------------------
# sampling


def test_sample_empty():
    assert len(sample_params("uniform", 1, 0)) == 0


@pytest.mark.parametrize("dist", ["uniform", "gauss"])
def test_sample_sorted_and_in_range(dist):
    for seed in range(5):
        p = sample_params(dist, seed, 500)
        assert np.all(p.tau <= p.theta) and np.all(p.theta <= p.sigma)
        assert p.tau.min() >= 0 and p.sigma.max() <= 1


def test_sample_deterministic():
    a = sample_params("uniform", 42, 100)
    b = sample_params("uniform", 42, 100)
    assert a == b
    assert a.theta.tobytes() == b.theta.tobytes()
    assert sample_params("uniform", 43, 100) != a


def test_gauss_centered():
    p = sample_params("gauss", 0, 20000)
    assert abs(p.theta.mean() - 0.5) < 0.01
    with pytest.raises(ValueError):
        sample_params("cauchy", 0, 3)


# --------------------------------------------------------------------------
# subgraphs and parameter files


def test_induced_subgraph_shared(shared):
    sub, keep = induced_accepting_subgraph(shared.net, shared.params, 0.5)
    # basic model: every agent is Type II or IV, so everything is kept
    assert keep.size == 7
    accepting = shared.params.theta <= 0.5
    acc_edges = {tuple(sorted((int(sub.labels[a]), int(sub.labels[b])))) for a, b in sub.edges()
                 if accepting[keep[a]] and accepting[keep[b]]}
    assert acc_edges == {(1, 2), (6, 7)}


def test_induced_subgraph_empty_below_tau():
    p = AgentParams([0.5, 0.6], [0.7, 0.8], [0.9, 0.9])
    sub, keep = induced_accepting_subgraph(Network.from_edges([(0, 1)]), p, 0.2)
    assert sub.node_count == 0 and keep.size == 0


def test_induced_subgraph_matches_filter():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = 12
        edges = random_graph(rng, n)
        d = np.sort(rng.random((n, 3)), axis=1)
        params = AgentParams(d[:, 0], d[:, 1], d[:, 2])
        phi = float(rng.random())
        net = Network.from_edges(edges, n=n)
        sub, keep = induced_accepting_subgraph(net, params, phi)
        kind = [(2 if params.tau[i] <= phi < params.theta[i] else 4 if phi >= params.sigma[i] else 0)
                for i in range(n)]
        want_nodes = [i for i in range(n) if kind[i] in (2, 4)]
        assert keep.tolist() == want_nodes
        want = {(a, b) for a, b in edges if a in want_nodes and b in want_nodes}
        got = {tuple(sorted((int(keep[a]), int(keep[b])))) for a, b in sub.edges()}
        assert got == want


def test_params_file_round_trip(shared):
    net = shared.net
    p = sample_params("uniform", 5, net.node_count)
    assert parse_params(format_params(p, net), net) == p
    basic = parse_params("1 0.4\n2 0.4\n3 0.6\n4 0.6\n5 0.6\n6 0.4\n7 0.4\n", net)
    assert basic == shared.params


@pytest.mark.parametrize("text", [
    "1 0.4\n",                      # missing agents
    "1 0.4 0.3 0.5\n",              # unsorted
    "1 0.1 0.2\n",                  # three columns
    "99 0.1\n",                     # unknown label
])
def test_params_file_errors(shared, text):
    with pytest.raises(ValueError):
        parse_params(text, shared.net)
