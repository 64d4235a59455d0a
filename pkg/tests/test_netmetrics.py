import random

import pytest

from litprop.conversation import CharacterNetwork
from litprop.errors import UnknownNode
from litprop.netmetrics import all_features, node_features

from oracles import (
    avg_neighbor_degree_oracle,
    betweenness_oracle,
    closeness_oracle,
    effective_size_oracle,
    triangles_oracle,
)


def net_from_edges(nodes, edges):
    net = CharacterNetwork()
    for v in nodes:
        net.add_node(v)
    for u, v in edges:
        net.add_edge(u, v)
    return net


def adjacency(net):
    return {v: set(net.neighbors(v)) for v in net.nodes()}


def test_path_graph_center():
    net = net_from_edges([0, 1, 2], [(0, 1), (1, 2)])
    f = node_features(net, 1)
    assert f.betweenness == pytest.approx(1.0)
    assert f.closeness == pytest.approx(1.0)
    assert f.triangles == 0
    assert f.effective_size == pytest.approx(2.0)
    assert f.efficiency == pytest.approx(1.0)
    end = node_features(net, 0)
    assert end.closeness == pytest.approx((1 + 0.5) / 2)
    assert end.betweenness == pytest.approx(0.0)


def test_star_center():
    net = net_from_edges([0, 1, 2, 3], [(0, 1), (0, 2), (0, 3)])
    f = node_features(net, 0)
    assert f.avg_neighbor_degree == pytest.approx(1.0)
    assert f.effective_size == pytest.approx(3.0)
    assert f.efficiency == pytest.approx(1.0)
    assert f.triangles == 0


def test_triangle_k3():
    net = net_from_edges([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
    for v in (0, 1, 2):
        f = node_features(net, v)
        assert f.triangles == 1
        assert f.effective_size == pytest.approx(1.0)
        assert f.efficiency == pytest.approx(0.5)
        assert f.betweenness == pytest.approx(0.0)


def test_k4_triangles():
    net = net_from_edges(range(4), [(a, b) for a in range(4) for b in range(a + 1, 4)])
    features = all_features(net)
    assert all(features[v].triangles == 3 for v in range(4))


def test_isolated_singleton_is_all_zero():
    net = net_from_edges([0, 1, 5], [(0, 1)])
    f = node_features(net, 5)
    assert f.closeness == 0.0
    assert f.betweenness == 0.0
    assert f.avg_neighbor_degree == 0.0
    assert f.effective_size == 0.0
    assert f.efficiency == 0.0
    assert f.triangles == 0


def test_empty_graph():
    assert all_features(CharacterNetwork()) == {}


def test_unknown_node():
    net = net_from_edges([0], [])
    with pytest.raises(UnknownNode):
        node_features(net, 9)


def test_closeness_classic_variant():
    net = net_from_edges([0, 1, 2], [(0, 1), (1, 2)])
    f = node_features(net, 0, closeness_variant="classic")
    assert f.closeness == pytest.approx(2 / 3)
    disconnected = net_from_edges([0, 1, 2], [(0, 1)])
    assert node_features(disconnected, 0, closeness_variant="classic").closeness == 0.0


def random_graph(rng, max_nodes=7):
    n = rng.randint(0, max_nodes)
    p = rng.uniform(0.15, 0.75)
    nodes = list(range(n))
    edges = [(a, b) for a in nodes for b in nodes[a + 1 :] if rng.random() < p]
    return net_from_edges(nodes, edges)


@pytest.mark.parametrize("seed", [0, 1])
def test_measures_match_enumeration_oracles(seed):
    rng = random.Random(seed)
    for _ in range(150):
        net = random_graph(rng)
        adj = adjacency(net)
        features = all_features(net)
        for v in net.nodes():
            f = features[v]
            assert f.closeness == pytest.approx(closeness_oracle(adj, v), abs=1e-9)
            assert f.betweenness == pytest.approx(betweenness_oracle(adj, v), abs=1e-9)
            assert f.avg_neighbor_degree == pytest.approx(avg_neighbor_degree_oracle(adj, v), abs=1e-9)
            assert f.effective_size == pytest.approx(effective_size_oracle(adj, v), abs=1e-9)
            assert f.triangles == triangles_oracle(adj, v)
            expected_eff = effective_size_oracle(adj, v) / len(adj[v]) if adj[v] else 0.0
            assert f.efficiency == pytest.approx(expected_eff, abs=1e-9)


def test_tree_betweenness_equals_pair_counting():
    # on a tree every pair has a unique path; betweenness of v is the number
    # of pairs whose path passes through v, normalized
    net = net_from_edges(range(6), [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)])
    features = all_features(net)
    n = 6
    pairs_through = {0: 0, 2: 0, 4: 0, 5: 0, 1: 7, 3: 7}
    for v, expected in pairs_through.items():
        normalized = expected / ((n - 1) * (n - 2) / 2)
        assert features[v].betweenness == pytest.approx(normalized, abs=1e-12)


def test_isomorphism_invariance():
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
    net = net_from_edges(range(4), edges)
    relabel = {0: 10, 1: 11, 2: 12, 3: 13}
    other = net_from_edges(relabel.values(), [(relabel[a], relabel[b]) for a, b in edges])
    f1 = all_features(net)
    f2 = all_features(other)
    for v in range(4):
        assert f1[v] == f2[relabel[v]]


def test_weights_are_ignored_by_measures():
    light = net_from_edges([0, 1, 2], [(0, 1), (1, 2)])
    heavy = CharacterNetwork()
    heavy.add_edge(0, 1, 5)
    heavy.add_edge(1, 2, 9)
    assert all_features(light) == all_features(heavy)
