import sys

import numpy as np
import pytest

from overexposure import AgentParams, Product, parse_edge_list

SHARED_EDGES = [(1, 4), (1, 2), (1, 5), (1, 3), (2, 4), (2, 5), (2, 3), (3, 6), (3, 7),
                  (4, 6), (4, 7), (5, 6), (5, 7), (6, 7)]
SHARED_ACCEPTING = {1, 2, 6, 7}

# the 5-6 edge appears twice on purpose; the parser deduplicates it
NONMODULAR_EDGES = [(1, 2), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5), (3, 4), (3, 5), (5, 6), (6, 4),
                  (5, 6), (1, 3), (4, 7), (5, 7), (6, 7)]
NONMODULAR_ACCEPTING = {1, 2, 3, 6, 7}

# labels 1..7; thresholds 0.2, 0.2, 0.5, 1, 1, 1, 1
NONMONO_EDGES = [(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (3, 6), (3, 7), (4, 5), (4, 6), (4, 7),
                 (5, 6), (5, 7), (6, 7)]
NONMONO_THETA = {1: 0.2, 2: 0.2, 3: 0.5, 4: 1.0, 5: 1.0, 6: 1.0, 7: 1.0}


def edge_text(edges):
    return "".join(f"{a} {b}\n" for a, b in edges)


def basic_instance(edges, theta_by_label):
    net = parse_edge_list(edge_text(edges))
    theta = [theta_by_label[int(lab)] for lab in net.labels]
    return net, AgentParams.basic(theta)


class Instance:
    def __init__(self, edges, theta_by_label):
        self.net, self.params = basic_instance(edges, theta_by_label)
        self.idx = self.net.label_map()

    def dense(self, labels):
        return [self.idx[x] for x in labels]

    def labels(self, dense):
        return {int(self.net.labels[i]) for i in dense}


@pytest.fixture
def shared():
    return Instance(SHARED_EDGES, {i: 0.4 if i in SHARED_ACCEPTING else 0.6 for i in range(1, 8)})


@pytest.fixture
def nonmodular():
    return Instance(NONMODULAR_EDGES, {i: 0.4 if i in NONMODULAR_ACCEPTING else 0.6 for i in range(1, 8)})


@pytest.fixture
def nonmono():
    return Instance(NONMONO_EDGES, NONMONO_THETA)


@pytest.fixture
def unit():
    return Product(0.5, 1, 1)


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    return request.param


def random_graph(rng, n, density=None):
    density = rng.uniform(0.1, 0.6) if density is None else density
    iu = np.triu_indices(n, 1)
    keep = rng.random(iu[0].size) < density
    return list(zip(iu[0][keep].tolist(), iu[1][keep].tolist()))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
