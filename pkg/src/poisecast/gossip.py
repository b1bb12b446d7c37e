"""Radio gossip on planar graphs: gather everything at a root along recursive
path separators, then broadcast back out.

Gathering works level by level, deepest first.  Within a level, messages on
the separator paths funnel to landmark nodes spaced 2L+1 apart (three path
classes in series, pipelined so designated receivers always hear exactly one
transmitter), every landmark is matched to an earlier-level path node at most
L hops away with every target serving at most 3L landmarks, and the final hop
onto the earlier paths runs in interference-free slots grouped by path class
and position shift mod 3.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .graphs import (
    DemandSet,
    Graph,
    NodeWeights,
    bfs_distances,
    connected_components,
    eccentricity_and_diameter,
)
from .maxflow import FlowNet
from .models import PossessionState, RadioSchedule, check_demands_met, simulate_radio
from .separator import find_3path_separator


class InterferenceDetected(AssertionError):
    """A designated reception had more than one transmitting neighbor."""


class MatchingInfeasible(RuntimeError):
    """No full landmark matching at this L; the candidate is too small."""


class SeparatorEntry:
    """One component's separator at one decomposition level."""

    def __init__(self, comp: frozenset[int], root: int,
                 paths: Sequence[Sequence[int]], spacing: int):
        self.comp = comp
        self.root = root
        self.paths = tuple(tuple(p) for p in paths)
        # landmark positions: 0, 2L+1, 4L+2, ... along each path
        self.landmark_positions = tuple(
            tuple(range(0, len(p), spacing)) for p in self.paths
        )

    def landmarks(self) -> set[int]:
        out = set()
        for path, positions in zip(self.paths, self.landmark_positions):
            for pos in positions:
                out.add(path[pos])
        return out

    def nodes(self) -> set[int]:
        out = set()
        for p in self.paths:
            out.update(p)
        return out


class GossipDecomposition:
    """Levels of separator paths; level i strips P_i from what remains."""

    def __init__(self, g: Graph, cand: int):
        self.g = g
        self.L = cand
        self.levels: list[list[SeparatorEntry]] = []
        self.locate: dict[int, tuple[int, int, int, int]] = {}
        # node -> (level index 0-based, entry index, path class, position)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def removed_at(self, level_idx: int) -> set[int]:
        out: set[int] = set()
        for entry in self.levels[level_idx]:
            out |= entry.nodes()
        return out

    def prefix_union(self, level_idx: int) -> set[int]:
        out: set[int] = set()
        for j in range(level_idx):
            out |= self.removed_at(j)
        return out

    def root(self) -> int:
        return self.levels[0][0].root


def decompose(g: Graph, cand: int) -> GossipDecomposition:
    """Recursive unit-weight 3-path separator decomposition."""
    if cand < 1:
        raise ValueError("L must be at least 1")
    eccentricity_and_diameter(g)  # raises on a disconnected graph
    decomp = GossipDecomposition(g, cand)
    weights = NodeWeights.uniform(g.n)
    spacing = 2 * cand + 1
    remaining = set(range(g.n))
    max_depth = max(1, math.ceil(math.log2(g.n))) if g.n > 1 else 1
    while remaining:
        comps = connected_components(g, set(range(g.n)) - remaining)
        entries = []
        for comp in comps:
            sep = find_3path_separator(g, weights, comp)
            entries.append(SeparatorEntry(frozenset(comp), sep.root, sep.paths,
                                          spacing))
        level_idx = len(decomp.levels)
        for eidx, entry in enumerate(entries):
            for cls, path in enumerate(entry.paths):
                for pos, node in enumerate(path):
                    decomp.locate.setdefault(node, (level_idx, eidx, cls, pos))
        decomp.levels.append(entries)
        for entry in entries:
            remaining -= entry.nodes()
        if len(decomp.levels) > max_depth:
            raise AssertionError(
                f"decomposition depth exceeded ceil(log2 n) = {max_depth}"
            )
    return decomp


def _validated_rounds(g: Graph, rounds: list[tuple[set[int], list[tuple[int, int]]]]
                      ) -> list[tuple[int, ...]]:
    """Check every designated (tx -> rx) reception against the radio rule."""
    out = []
    for tx, designated in rounds:
        for sender, receiver in designated:
            hot = [x for x in g.adj[receiver] if x in tx]
            if hot != [sender]:
                raise InterferenceDetected(
                    f"receiver {receiver} hears {hot}, wanted [{sender}]"
                )
        out.append(tuple(sorted(tx)))
    return out


def gather_on_paths(g: Graph, decomp: GossipDecomposition,
                    level_idx: int) -> RadioSchedule:
    """Funnel path messages to the landmarks: per class, 2L pipelined rounds."""
    cand = decomp.L
    all_rounds: list[tuple[set[int], list[tuple[int, int]]]] = []
    for cls in range(3):
        by_round: dict[int, set[int]] = {}
        designated: dict[int, list[tuple[int, int]]] = {}
        spacing_check: dict[tuple[int, int, str], list[int]] = {}
        for eidx, entry in enumerate(decomp.levels[level_idx]):
            if cls >= len(entry.paths):
                continue
            path = entry.paths[cls]
            marks = set(entry.landmark_positions[cls])
            for pos, node in enumerate(path):
                if pos in marks:
                    continue
                below = max(m for m in marks if m < pos)
                above = min((m for m in marks if m > pos), default=None)
                if above is None or pos - below < above - pos:
                    delta = pos - below
                    rnd = 2 * cand - delta + 1  # right of the landmark
                    receiver = path[pos - 1]
                    side = "R"
                else:
                    delta = above - pos
                    rnd = 2 * cand - delta  # left of the landmark
                    receiver = path[pos + 1]
                    side = "L"
                by_round.setdefault(rnd, set()).add(node)
                designated.setdefault(rnd, []).append((node, receiver))
                spacing_check.setdefault((eidx, rnd, side), []).append(pos)
        # same-direction transmitters of one path keep the landmark spacing
        for positions in spacing_check.values():
            positions.sort()
            for a, b in zip(positions, positions[1:]):
                if b - a < 2 * cand + 1:
                    raise InterferenceDetected(
                        f"same-round transmitters {a} and {b} too close"
                    )
        for rnd in sorted(by_round):
            all_rounds.append((by_round[rnd], designated[rnd]))
    return RadioSchedule(_validated_rounds(g, all_rounds))


class LandmarkMatching:
    def __init__(self, assign: dict[int, int], witness: dict[int, tuple[int, ...]],
                 comp_of: dict[int, frozenset[int]], cls_of: dict[int, int]):
        self.assign = assign        # landmark -> earlier-path node
        self.witness = witness      # landmark -> path ending at its target
        self.comp_of = comp_of
        self.cls_of = cls_of


def find_landmark_matching(g: Graph, decomp: GossipDecomposition,
                           level_idx: int) -> LandmarkMatching:
    """Max-flow matching of every landmark to a prefix-path node at most L
    hops away, targets serving at most 3L landmarks each."""
    cand = decomp.L
    prefix = sorted(decomp.prefix_union(level_idx))
    if not prefix:
        raise ValueError("no earlier paths; matching undefined at the top level")
    prefix_set = set(prefix)

    landmarks: list[tuple[int, frozenset[int], int]] = []
    for entry in decomp.levels[level_idx]:
        seen: set[int] = set()
        for cls, (path, positions) in enumerate(
            zip(entry.paths, entry.landmark_positions)
        ):
            for pos in positions:
                node = path[pos]
                if node not in seen:
                    seen.add(node)
                    landmarks.append((node, entry.comp, cls))
    landmarks.sort()

    dists: dict[int, list[int]] = {}
    edges: dict[int, list[int]] = {}
    for v, comp, _cls in landmarks:
        dist = bfs_distances(g, v, comp)
        dists[v] = dist
        reach = []
        for u in prefix:
            if any(dist[w] >= 0 and dist[w] <= cand - 1 for w in g.adj[u]
                   if w in comp):
                reach.append(u)
        edges[v] = reach

    vs = [v for v, _c, _k in landmarks]
    u_ids = {u: len(vs) + 1 + j for j, u in enumerate(prefix)}
    net = FlowNet(len(vs) + len(prefix) + 2)
    source, sink = 0, len(vs) + len(prefix) + 1
    v_edge: dict[tuple[int, int], int] = {}
    for idx, v in enumerate(vs):
        net.add_edge(source, idx + 1, 1)
        for u in edges[v]:
            v_edge[(v, u)] = net.add_edge(idx + 1, u_ids[u], 1)
    for u in prefix:
        net.add_edge(u_ids[u], sink, 3 * cand)
    flow = net.max_flow(source, sink)
    if flow < len(vs):
        raise MatchingInfeasible(
            f"matched {flow} of {len(vs)} landmarks at L={cand}"
        )

    assign: dict[int, int] = {}
    witness: dict[int, tuple[int, ...]] = {}
    comp_of: dict[int, frozenset[int]] = {}
    cls_of: dict[int, int] = {}
    for v, comp, cls in landmarks:
        target = None
        for u in edges[v]:
            eid = v_edge[(v, u)]
            if net.flow_on(eid, 1) == 1:
                target = u
                break
        assert target is not None
        dist = dists[v]
        w = min(
            (x for x in g.adj[target] if x in comp and 0 <= dist[x] <= cand - 1),
            key=lambda x: (dist[x], x),
        )
        witness[v] = _bfs_path(g, v, w, comp) + (target,)
        assign[v] = target
        comp_of[v] = comp
        cls_of[v] = cls
    return LandmarkMatching(assign, witness, comp_of, cls_of)


def _bfs_path(g: Graph, s: int, t: int, allowed: Iterable[int]) -> tuple[int, ...]:
    allowed_set = set(allowed)
    dist = bfs_distances(g, t, allowed_set)
    path = [s]
    while path[-1] != t:
        path.append(
            min(w for w in g.adj[path[-1]]
                if w in allowed_set and dist[w] == dist[path[-1]] - 1)
        )
    return tuple(path)


def move_to_prefix(g: Graph, decomp: GossipDecomposition, level_idx: int,
                   matching: LandmarkMatching) -> RadioSchedule:
    """Relay landmark messages along their witness paths (per class, in
    series), then hop them onto the earlier paths in slots bucketed by
    (earlier level, path class, position mod 3)."""
    cand = decomp.L
    rounds: list[tuple[set[int], list[tuple[int, int]]]] = []

    for cls in range(3):
        by_round: dict[int, set[int]] = {}
        designated: dict[int, list[tuple[int, int]]] = {}
        for v in sorted(matching.assign):
            if matching.cls_of[v] != cls:
                continue
            relay = matching.witness[v][:-1]  # stop one short of the target
            for j in range(len(relay) - 1):
                by_round.setdefault(j + 1, set()).add(relay[j])
                designated.setdefault(j + 1, []).append((relay[j], relay[j + 1]))
        for rnd in sorted(by_round):
            rounds.append((by_round[rnd], designated[rnd]))

    by_bucket: dict[tuple[int, int, int], dict[int, list[int]]] = {}
    for v in sorted(matching.assign):
        u = matching.assign[v]
        sender = matching.witness[v][-2]
        lvl, _entry, cls, pos = decomp.locate[u]
        bucket = (lvl, cls, pos % 3)
        by_bucket.setdefault(bucket, {}).setdefault(u, []).append(sender)
    for bucket in sorted(by_bucket):
        targets = by_bucket[bucket]
        slot_count = max(len(set(ws)) for ws in targets.values())
        for slot in range(slot_count):
            tx: set[int] = set()
            designated_slot: list[tuple[int, int]] = []
            for u in sorted(targets):
                senders = sorted(set(targets[u]))
                if slot < len(senders):
                    tx.add(senders[slot])
                    designated_slot.append((senders[slot], u))
            rounds.append((tx, designated_slot))
    return RadioSchedule(_validated_rounds(g, rounds))


def final_sweep(g: Graph, decomp: GossipDecomposition) -> RadioSchedule:
    """Pipelined relays moving everything on the top-level paths to the root,
    one path class at a time."""
    (entry,) = decomp.levels[0]
    rounds: list[tuple[set[int], list[tuple[int, int]]]] = []
    for path in entry.paths:
        n = len(path)
        for pos in range(n - 1, 0, -1):
            rounds.append(({path[pos]}, [(path[pos], path[pos - 1])]))
    return RadioSchedule(_validated_rounds(g, rounds))


def broadcast_back(g: Graph, root: int) -> RadioSchedule:
    """Deterministic BFS-layer broadcast with greedy interference-free
    batching: no batch puts two transmitters next to one target."""
    dist = bfs_distances(g, root)
    layers: dict[int, list[int]] = {}
    for v in range(g.n):
        layers.setdefault(dist[v], []).append(v)
    rounds: list[set[int]] = []
    for d in sorted(layers):
        if d + 1 not in layers:
            break
        targets = set(layers[d + 1])
        batches: list[tuple[set[int], set[int]]] = []  # (transmitters, covered)
        for v in sorted(layers[d]):
            tneigh = {w for w in g.adj[v] if w in targets}
            if not tneigh:
                continue
            placed = False
            for btx, bcover in batches:
                if not (bcover & tneigh):
                    btx.add(v)
                    bcover |= tneigh
                    placed = True
                    break
            if not placed:
                batches.append(({v}, set(tneigh)))
        rounds.extend(btx for btx, _ in batches)
    return RadioSchedule(rounds)


class GossipMetrics:
    def __init__(self):
        self.L = 0
        self.depth = 0
        self.gather_length = 0
        self.length = 0
        self.attempted: list[int] = []

    def summary(self) -> str:
        return f"L={self.L} depth={self.depth} length={self.length}"


def radio_gossip(g: Graph, rng_seed: int = 0) -> tuple[RadioSchedule, GossipMetrics]:
    """Doubling search over the assumed optimum L; the smallest candidate
    whose gathering succeeds wins, then a layered broadcast spreads the
    gathered messages back.  The result is simulator-verified all-pairs."""
    metrics = GossipMetrics()
    if g.n == 1:
        return RadioSchedule([]), metrics
    if g.n == 2:
        sched = RadioSchedule([[0], [1]])
        metrics.L = 2
        metrics.length = 2
        metrics.gather_length = 1
        return sched, metrics
    _ecc, diam = eccentricity_and_diameter(g)
    cand = max(3, diam)
    while True:
        metrics.attempted.append(cand)
        try:
            gather, decomp = _build_gather(g, cand)
            break
        except MatchingInfeasible:
            if cand >= 2 * g.n:
                raise AssertionError("gathering failed even at L = 2n")
            cand = min(2 * cand, 2 * g.n)
    root = decomp.root()
    state = simulate_radio(g, PossessionState.originators(g.n), gather)
    if state.holds(root) != frozenset(range(g.n)):
        raise AssertionError("root missed messages after gathering")
    spread = broadcast_back(g, root)
    sched = gather.concat(spread)
    final = simulate_radio(g, PossessionState.originators(g.n), sched)
    ok, unmet = check_demands_met(final, DemandSet.gossip(g.n))
    if not ok:
        raise AssertionError(f"gossip schedule missed pairs: {unmet[:5]}...")
    metrics.L = cand
    metrics.depth = decomp.depth
    metrics.gather_length = len(gather)
    metrics.length = len(sched)
    return sched, metrics


def _build_gather(g: Graph, cand: int) -> tuple[RadioSchedule, GossipDecomposition]:
    decomp = decompose(g, cand)
    sched = RadioSchedule([])
    for level_idx in range(decomp.depth - 1, 0, -1):
        sched = sched.concat(gather_on_paths(g, decomp, level_idx))
        matching = find_landmark_matching(g, decomp, level_idx)
        sched = sched.concat(move_to_prefix(g, decomp, level_idx, matching))
    sched = sched.concat(final_sweep(g, decomp))
    return sched, decomp
