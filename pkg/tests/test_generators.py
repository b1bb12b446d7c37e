from __future__ import annotations

import numpy as np
import pytest

from poisecast.generators import (
    BadParams,
    certify_straight_line_planar,
    dary_tree,
    generate_instance,
    random_planar_triangulation,
)
from poisecast.graphs import write_graph


def test_grid_instance_counts():
    inst = generate_instance("grid", {"rows": 3, "cols": 3})
    assert inst.graph.n == 9 and inst.graph.m == 12


def test_dary_tree_node_count():
    g = dary_tree(3, 3)
    assert g.n == 40  # (3^4 - 1) / 2
    assert g.m == 39
    degrees = sorted(g.degree(v) for v in range(g.n))
    assert degrees[-1] == 4  # internal node: parent + 3 children


def test_random_planar_passes_certificate():
    g, pts = random_planar_triangulation(20, seed=1)
    assert g.n == 20
    assert certify_straight_line_planar(g, pts)
    assert g.m <= 3 * g.n - 6


def test_random_planar_connected():
    from poisecast.graphs import connected_components

    for seed in range(5):
        g, _ = random_planar_triangulation(15, seed=seed)
        assert len(connected_components(g)) == 1


def test_generators_seed_deterministic():
    a = generate_instance("random-planar", {"n": 18, "k": 4}, seed=7)
    b = generate_instance("random-planar", {"n": 18, "k": 4}, seed=7)
    assert write_graph(a.graph) == write_graph(b.graph)
    assert a.demands.pairs == b.demands.pairs
    c = generate_instance("random-planar", {"n": 18, "k": 4}, seed=8)
    assert write_graph(a.graph) != write_graph(c.graph) or a.demands.pairs != c.demands.pairs


def test_gossip_demands():
    inst = generate_instance("path", {"n": 3, "gossip": True})
    assert inst.demands.k == 6


def test_explicit_pairs():
    inst = generate_instance("grid", {"rows": 2, "cols": 2, "pairs": [[0, 3]]})
    assert inst.demands.pairs == ((0, 3),)


def test_bad_params():
    with pytest.raises(BadParams):
        generate_instance("grid", {"rows": 0, "cols": 3})
    with pytest.raises(BadParams):
        generate_instance("nonsense", {})
    with pytest.raises(BadParams):
        generate_instance("grid", {"rows": 2, "cols": 2, "bogus": 1})


def test_crossing_certificate_rejects_k4_drawn_badly():
    from poisecast.graphs import complete_graph

    g = complete_graph(4)
    square = np.array([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    assert not certify_straight_line_planar(g, square)  # diagonals cross
