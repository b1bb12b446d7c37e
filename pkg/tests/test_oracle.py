from __future__ import annotations

import pytest

from poisecast import graphs
from poisecast.graphs import DemandSet
from poisecast.models import (
    PossessionState,
    check_demands_met,
    simulate_radio,
    simulate_telephone,
)
from poisecast.oracle import (
    OracleExceeded,
    brute_force_radio,
    brute_force_telephone,
    _maximal_matchings,
)


def test_maximal_matchings_triangle():
    g = graphs.complete_graph(3)
    ms = _maximal_matchings(g)
    assert sorted(ms) == [((0, 1),), ((0, 2),), ((1, 2),)]


def test_telephone_k3_broadcast():
    g = graphs.complete_graph(3)
    res = brute_force_telephone(g, DemandSet.rooted(0, [1, 2]), 6)
    assert res.length == 2  # also the information-theoretic log2(3) bound


def test_telephone_path_broadcast_diameter():
    g = graphs.path_graph(4)
    res = brute_force_telephone(g, DemandSet.rooted(0, [1, 2, 3]), 8)
    assert res.length == 3


def test_telephone_star_center_broadcast():
    g = graphs.star_graph(3)
    res = brute_force_telephone(g, DemandSet.rooted(0, [1, 2, 3]), 8)
    assert res.length == 3


def test_telephone_witness_validates():
    g = graphs.grid_graph(2, 3)
    demands = DemandSet([(0, 5), (4, 1)])
    res = brute_force_telephone(g, demands, 10)
    final = simulate_telephone(
        g, PossessionState.for_demands(g.n, demands), res.schedule
    )
    assert check_demands_met(final, demands)[0]
    assert len(res.schedule) == res.length


def test_telephone_adjacent_pair_single_round():
    g = graphs.path_graph(3)
    res = brute_force_telephone(g, DemandSet([(0, 1)]), 3)
    assert res.length == 1


def test_telephone_exceeded():
    g = graphs.path_graph(5)
    with pytest.raises(OracleExceeded):
        brute_force_telephone(g, DemandSet([(0, 4)]), 2)


def test_radio_two_nodes_both_semantics():
    g = graphs.path_graph(2)
    gossip = DemandSet.gossip(2)
    assert brute_force_radio(g, gossip, 4, rx_while_tx=True).length == 1
    assert brute_force_radio(g, gossip, 4, rx_while_tx=False).length == 2


def test_radio_path3_gossip_golden():
    g = graphs.path_graph(3)
    res = brute_force_radio(g, DemandSet.gossip(3), 8)
    assert res.length == 3
    final = simulate_radio(g, PossessionState.originators(3), res.schedule)
    assert check_demands_met(final, DemandSet.gossip(3))[0]


def test_radio_star_gossip_golden():
    g = graphs.star_graph(2)
    res = brute_force_radio(g, DemandSet.gossip(3), 8)
    assert res.length == 3


def test_radio_path4_gossip_golden():
    g = graphs.path_graph(4)
    assert brute_force_radio(g, DemandSet.gossip(4), 10).length == 3


def test_radio_interference_is_modeled():
    # broadcast from the middle of a path: one round despite two neighbors
    g = graphs.path_graph(3)
    res = brute_force_radio(g, DemandSet([(1, 0), (1, 2)]), 4)
    assert res.length == 1
    # but informing the middle from both ends cannot happen simultaneously
    res = brute_force_radio(g, DemandSet([(0, 1), (2, 1)]), 6)
    assert res.length == 2


def test_oracle_beats_or_matches_pipeline():
    from poisecast.multicast import planar_mc_multicast

    g = graphs.grid_graph(2, 3)
    demands = DemandSet([(0, 5), (2, 3)])
    opt = brute_force_telephone(g, demands, 10).length
    sched, _ = planar_mc_multicast(g, demands, rng_seed=0)
    assert opt <= len(sched)
