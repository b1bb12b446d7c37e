from __future__ import annotations

import pytest

from poisecast import graphs
from poisecast.graphs import Graph, NodeWeights, connected_components
from poisecast.separator import (
    PathSeparator,
    SeparatorNotFound,
    find_3path_separator,
    verify_separator,
)


def unit(g):
    return NodeWeights.uniform(g.n)


def test_middle_vertex_separates_a_path():
    g = graphs.path_graph(5)
    sep = PathSeparator(2, [[2]])
    assert verify_separator(g, unit(g), sep)


def test_star_center_alone():
    g = graphs.star_graph(4)
    sep = find_3path_separator(g, unit(g))
    assert sep.nodes == {0}
    assert verify_separator(g, unit(g), sep)


def test_grid_4x4_balanced():
    g = graphs.grid_graph(4, 4)
    w = unit(g)
    sep = find_3path_separator(g, w)
    assert verify_separator(g, w, sep)
    for comp in connected_components(g, sep.nodes):
        assert 2 * len(comp) <= g.n


def test_grid_8x8_balanced():
    g = graphs.grid_graph(8, 8)
    w = unit(g)
    sep = find_3path_separator(g, w)
    assert len(sep.paths) <= 3
    assert verify_separator(g, w, sep)


def test_weighted_balance_with_zero_weight_nodes():
    g = graphs.path_graph(7)
    w = NodeWeights([0, 0, 5, 0, 5, 0, 0])
    sep = find_3path_separator(g, w)
    assert verify_separator(g, w, sep)
    for comp in connected_components(g, sep.nodes):
        assert 2 * sum(w[v] for v in comp) <= w.total()


def test_separator_within_component_only():
    g = graphs.grid_graph(3, 3)
    component = {0, 1, 2, 3, 6}  # an L-shaped region after removing the rest
    sub = set(component)
    w = unit(g)
    sep = find_3path_separator(g, w, sub)
    assert sep.nodes <= sub
    assert verify_separator(g, w, sep, sub)


def test_verify_rejects_non_shortest_path():
    g = graphs.cycle_graph(6)
    bogus = PathSeparator(0, [[0, 1, 2, 3, 4]])  # dist(0,4) is 2, not 4
    assert not verify_separator(g, unit(g), bogus)


def test_verify_rejects_unbalanced():
    g = graphs.path_graph(6)
    end = PathSeparator(0, [[0]])
    assert not verify_separator(g, unit(g), end)


def test_non_planar_component_rejected():
    g = graphs.complete_graph(6)
    with pytest.raises(SeparatorNotFound):
        find_3path_separator(g, unit(g))


def test_separator_deterministic():
    g = graphs.grid_graph(5, 5)
    a = find_3path_separator(g, unit(g))
    b = find_3path_separator(g, unit(g))
    assert a.paths == b.paths


def test_small_components_swallowed_whole():
    # every component of up to 4 nodes disappears entirely, which keeps the
    # gossip decomposition depth logarithmic
    for g in (graphs.path_graph(3), graphs.path_graph(4),
              graphs.cycle_graph(4), graphs.star_graph(3),
              graphs.complete_graph(4), Graph(2, [(0, 1)])):
        sep = find_3path_separator(g, unit(g))
        assert sep.nodes == set(range(g.n)), g
