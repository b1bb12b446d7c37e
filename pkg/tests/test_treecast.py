from __future__ import annotations

import pytest

from poisecast import graphs
from poisecast.models import PossessionState, simulate_telephone
from poisecast.treecast import (
    NotATree,
    path_relay_schedule,
    path_shuttle_schedule,
    tree_broadcast_schedule,
    tree_gather_schedule,
)


def path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def test_broadcast_path_is_pipeline():
    sched = tree_broadcast_schedule(path_edges(4), 0)
    assert len(sched) == 3
    g = graphs.path_graph(4)
    final = simulate_telephone(g, PossessionState.originators(4), sched)
    assert all(final.has(v, 0) for v in range(4))


def test_broadcast_star_one_call_per_round():
    edges = [(0, i) for i in range(1, 6)]
    sched = tree_broadcast_schedule(edges, 0)
    assert len(sched) == 5
    g = graphs.star_graph(5)
    final = simulate_telephone(g, PossessionState.originators(6), sched)
    assert all(final.has(v, 0) for v in range(6))


def test_broadcast_complete_binary_depth_two():
    edges = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]
    sched = tree_broadcast_schedule(edges, 0)
    assert len(sched) == 4
    g = graphs.Graph(7, edges)
    final = simulate_telephone(g, PossessionState.originators(7), sched)
    assert all(final.has(v, 0) for v in range(7))


def test_broadcast_rejects_cycle():
    with pytest.raises(NotATree):
        tree_broadcast_schedule([(0, 1), (1, 2), (0, 2)], 0)


def test_broadcast_rejects_disconnected():
    with pytest.raises(NotATree):
        tree_broadcast_schedule([(0, 1), (2, 3)], 0)


def test_gather_reverses_and_collects():
    edges = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]
    fwd = tree_broadcast_schedule(edges, 0)
    back = tree_gather_schedule(edges, 0)
    assert len(back) == len(fwd) == 4
    assert back.rounds == tuple(reversed(fwd.rounds))
    g = graphs.Graph(7, edges)
    final = simulate_telephone(g, PossessionState.originators(7), back)
    assert final.holds(0) == frozenset(range(7))


def test_gather_then_broadcast_on_path():
    edges = path_edges(4)
    sched = tree_gather_schedule(edges, 0).concat(tree_broadcast_schedule(edges, 0))
    assert len(sched) == 6
    g = graphs.path_graph(4)
    final = simulate_telephone(g, PossessionState.originators(4), sched)
    assert all(final.holds(v) == frozenset(range(4)) for v in range(4))


def test_shuttle_three_node_path():
    g = graphs.path_graph(3)
    sched = path_shuttle_schedule([0, 1, 2], 4)
    final = simulate_telephone(g, PossessionState.originators(3), sched)
    assert final.has(2, 0) and final.has(0, 2)


def test_shuttle_two_node_path_repeats_matching():
    sched = path_shuttle_schedule([0, 1], 3)
    assert sched.rounds == (((0, 1),), ((0, 1),), ((0, 1),))


def test_shuttle_saturates_in_two_len_rounds():
    n = 6
    g = graphs.path_graph(n)
    sched = path_shuttle_schedule(list(range(n)), 2 * n)
    final = simulate_telephone(g, PossessionState.originators(n), sched)
    full = frozenset(range(n))
    assert all(final.holds(v) == full for v in range(n))


def test_shuttle_monotone_in_rounds():
    n = 5
    g = graphs.path_graph(n)
    prev = PossessionState.originators(n)
    for rounds in range(1, 2 * n + 1):
        cur = simulate_telephone(
            g, PossessionState.originators(n), path_shuttle_schedule(list(range(n)), rounds)
        )
        assert cur.dominates(prev)
        prev = cur


def test_relay_moves_one_message():
    g = graphs.path_graph(4)
    sched = path_relay_schedule([0, 1, 2, 3])
    assert len(sched) == 3
    final = simulate_telephone(g, PossessionState.originators(4), sched)
    assert final.has(3, 0)


def test_broadcast_length_within_poise_log_factor():
    import math

    from poisecast.generators import dary_tree
    from poisecast.rounding import PoiseTree

    catalog = [
        graphs.path_graph(12).edges,
        graphs.star_graph(9).edges,
        dary_tree(2, 4).edges,
        dary_tree(3, 3).edges,  # the broadcast-needs-degree-squared shape
        dary_tree(4, 2).edges,
        tuple((0, i) for i in range(1, 4)) + tuple((3, i) for i in range(4, 9)),
    ]
    worst = 0.0
    for edges in catalog:
        tree = PoiseTree(edges, 0)
        n = len(tree.nodes)
        factor = math.log2(n) / max(1.0, math.log2(math.log2(n)))
        length = len(tree_broadcast_schedule(edges, 0))
        worst = max(worst, length / (tree.poise * factor))
    assert worst <= 1.5, worst
