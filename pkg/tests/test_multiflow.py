from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poisecast.graphs import MultiGraph
from poisecast.multiflow import (
    EvennessViolated,
    break_cycles_to_in_forest,
    exhaustive_pack_value,
    extract_stars,
    pack_tpaths,
    terminal_cut,
)


def mg_from(edges, n, mult=1):
    mg = MultiGraph(n)
    for u, v in edges:
        mg.add_edge(u, v, mult)
    return mg


def test_terminal_cut_cycle():
    mg = mg_from([(0, 1), (1, 2), (2, 3), (0, 3)], 4)
    for t in range(4):
        assert terminal_cut(mg, range(4), t) == 2


def test_terminal_cut_single_edge():
    mg = mg_from([(0, 1)], 2)
    assert terminal_cut(mg, [0, 1], 0) == 1


def test_terminal_cut_doubled_path():
    mg = mg_from([(0, 1), (1, 2)], 3, mult=2)
    assert terminal_cut(mg, [0, 2], 0) == 2


def test_pack_cycle_all_terminals():
    mg = mg_from([(0, 1), (1, 2), (2, 3), (0, 3)], 4)
    packing = pack_tpaths(mg, range(4))
    assert packing.value == 4
    assert all(len(p) == 2 for p, _ in packing.paths)


def test_pack_doubled_star():
    mg = mg_from([(0, 1), (0, 2), (0, 3)], 4, mult=2)
    packing = pack_tpaths(mg, [1, 2, 3])
    assert packing.value == 3
    assert packing.endpoint_count(1) == 2


def test_pack_single_doubled_edge():
    mg = mg_from([(0, 1)], 2, mult=2)
    packing = pack_tpaths(mg, [0, 1])
    assert packing.value == 2


def test_pack_rejects_odd_inner():
    mg = mg_from([(0, 1), (1, 2), (1, 3)], 4)
    with pytest.raises(EvennessViolated):
        pack_tpaths(mg, [0, 2, 3])


def test_pack_matches_exhaustive_on_doubled_grid_corner():
    edges = [(0, 1), (1, 2), (0, 3), (1, 4), (2, 5), (3, 4), (4, 5)]
    mg = mg_from(edges, 6, mult=1)
    # double everything so inner vertices are even
    mg2 = MultiGraph(6, {e: 2 * m for e, m in mg.mult.items()})
    terminals = [0, 2, 5]
    packing = pack_tpaths(mg2, terminals)
    lam = {t: terminal_cut(mg2, terminals, t) for t in terminals}
    assert packing.value == sum(lam.values()) // 2
    assert packing.value == exhaustive_pack_value(mg2, terminals)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_pack_value_always_hits_bound(data):
    n = data.draw(st.integers(3, 6))
    possible = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = data.draw(
        st.lists(st.sampled_from(possible), min_size=1, max_size=6, unique=True)
    )
    mg = MultiGraph(n)
    for u, v in chosen:
        mg.add_edge(u, v, 2)  # doubling keeps every vertex even
    terms = data.draw(
        st.lists(st.integers(0, n - 1), min_size=2, max_size=n, unique=True)
    )
    packing = pack_tpaths(mg, terms)
    lam = {t: terminal_cut(mg, terms, t) for t in terms}
    assert packing.value == sum(lam.values()) // 2
    packing.validate(mg)


def test_break_cycles_two_cycle():
    kept = break_cycles_to_in_forest({0: 1, 1: 0})
    assert len(kept) == 1


def test_break_cycles_in_star_untouched():
    arcs = {1: 0, 2: 0, 3: 0}
    assert break_cycles_to_in_forest(arcs) == arcs


def test_break_cycles_cycle_plus_pendant():
    kept = break_cycles_to_in_forest({0: 1, 1: 2, 2: 0, 3: 0})
    assert len(kept) == 3
    # result is acyclic: following arcs always terminates
    for start in kept:
        seen = set()
        u = start
        while u in kept:
            assert u not in seen
            seen.add(u)
            u = kept[u]


def test_break_cycles_rejects_self_loop():
    with pytest.raises(ValueError):
        break_cycles_to_in_forest({0: 0})


def test_extract_stars_two_arc_path():
    stars = extract_stars({0: 1, 1: 2})
    assert stars.arc_count == 1


def test_extract_stars_in_star():
    stars = extract_stars({i: 0 for i in range(1, 6)})
    assert stars.arc_count == 5
    assert stars.stars == {0: [1, 2, 3, 4, 5]}


def test_extract_stars_binary_tree_depth_two():
    # root 0; level-1 nodes 1,2; leaves 3..6
    forest = {1: 0, 2: 0, 3: 1, 4: 1, 5: 2, 6: 2}
    stars = extract_stars(forest)
    assert stars.arc_count == 4
    assert set(stars.stars) == {1, 2}


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_forest_and_star_bounds_random(data):
    n = data.draw(st.integers(2, 50))
    arcs = {}
    for u in range(n):
        if data.draw(st.booleans()):
            v = data.draw(st.integers(0, n - 1))
            if v != u:
                arcs[u] = v
    kept = break_cycles_to_in_forest(arcs)
    assert 2 * len(kept) >= len(arcs)
    stars = extract_stars(kept)
    assert 2 * stars.arc_count >= len(kept)
    assert 3 * stars.arc_count >= len(arcs) or len(arcs) == 0
    # stars really are stars: no kept tail is also a head
    heads = set(stars.arcs.values())
    assert not heads & set(stars.arcs)
