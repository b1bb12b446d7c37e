"""Recursive planar multicommodity multicast scheduling.

One recursion node: solve the poise LP on the component, find a 3-path
separator weighted by demand incidence, send the pairs whose flow crosses the
separator (by at least gamma) through it -- gather to the separator via a
rounded low-poise tree on an augmented instance, shuttle along the separator
path, multicast back out -- and recurse in parallel on the components for the
remaining pairs.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .graphs import DemandSet, Graph, connected_components, shortest_path
from .lp import PoiseFractional, build_poise_lp, solve_lp
from .models import (
    PossessionState,
    TelephoneSchedule,
    check_demands_met,
    simulate_telephone,
)
from .rounding import PoiseTree, round_poise_tree
from .separator import PathSeparator, find_3path_separator
from .treecast import path_relay_schedule, path_shuttle_schedule, tree_gather_schedule


class InsufficientCrossingFlow(RuntimeError):
    """K1 pair kept less than gamma/3 crossing mass; contradicts the split."""


class DummyEdgeScheduled(AssertionError):
    """A schedule touched an auxiliary binary-tree edge."""


class UnroutablePair(RuntimeError):
    """A K2 pair failed to land inside a single child component."""


def demand_gamma(k: int) -> float:
    """Split threshold 1/log2(k), clamped to 1/2 for tiny instances."""
    if k < 2:
        raise ValueError("gamma needs k >= 2")
    return min(0.5, 1.0 / math.log2(k))


def split_demands(frac: PoiseFractional, sep: PathSeparator, gamma: float
                  ) -> tuple[list[int], list[int], dict[int, int]]:
    """Classify pairs by the flow mass their decomposition sends through the
    separator; crossing pairs are assigned the separator path carrying the
    most mass (ties to the smallest path index)."""
    if not 0 < gamma < 1:
        raise ValueError("gamma must be in (0, 1)")
    k1: list[int] = []
    k2: list[int] = []
    assign: dict[int, int] = {}
    sep_nodes = sep.nodes
    path_sets = [set(p) for p in sep.paths]
    for i in range(len(frac.pairs)):
        crossing = sum(
            w for p, w in frac.paths_for(i) if sep_nodes & set(p)
        )
        if crossing >= gamma - 1e-12:
            k1.append(i)
            masses = [
                sum(w for p, w in frac.paths_for(i) if ps & set(p))
                for ps in path_sets
            ]
            best = max(range(len(masses)), key=lambda j: (masses[j], -j))
            assign[i] = best
        else:
            k2.append(i)
    return k1, k2, assign


def scale_k1(frac: PoiseFractional, k1: Sequence[int], assign: dict[int, int],
             sep: PathSeparator, gamma: float) -> PoiseFractional:
    """Keep only decomposition paths meeting each pair's assigned separator
    path, rescale to unit mass (factor <= 3/gamma), and truncate largest
    weights first so each pair's total is exactly one."""
    path_sets = [set(p) for p in sep.paths]
    new_pairs = []
    decomposition: dict[int, list[tuple[tuple[int, ...], float]]] = {}
    max_factor = 1.0
    for new_idx, i in enumerate(k1):
        target = path_sets[assign[i]]
        kept = [(p, w) for p, w in frac.paths_for(i) if target & set(p)]
        mass = sum(w for _, w in kept)
        if mass < gamma / 3 - 1e-9:
            raise InsufficientCrossingFlow(
                f"pair {frac.pairs[i]} keeps only {mass:.6f} crossing mass"
            )
        factor = min(3.0 / gamma, 1.0 / mass)
        max_factor = max(max_factor, factor)
        scaled = sorted(
            ((p, w * factor) for p, w in kept), key=lambda pw: (-pw[1], pw[0])
        )
        total = 0.0
        out = []
        for p, w in scaled:
            if total >= 1.0 - 1e-12:
                break
            w = min(w, 1.0 - total)
            out.append((p, w))
            total += w
        # mass * factor >= 1 by construction, so truncation reached exactly 1
        decomposition[new_idx] = [(p, w / total) for p, w in out]
        new_pairs.append(frac.pairs[i])
    x = {e: min(1.0, v * max_factor) for e, v in frac.x.items()}
    return PoiseFractional(
        new_pairs,
        frac.value * max_factor,
        frac.l1 * max_factor,
        frac.l2 * max_factor,
        x,
        decomposition,
    )


class AugmentedInstance:
    """Component graph plus a balanced binary tree hung off a separator path.

    The tree's leaves are the path nodes, its internal nodes are dummies, and
    its root becomes the root of the Steiner poise instance whose terminals
    are the endpoints of the crossing pairs.
    """

    def __init__(self, g: Graph, component: Iterable[int],
                 sep_path: Sequence[int], pairs: Sequence[tuple[int, int]]):
        comp = sorted(set(component))
        self.to_aug = {v: i for i, v in enumerate(comp)}
        self.to_orig = {i: v for v, i in self.to_aug.items()}
        edges = [
            (self.to_aug[u], self.to_aug[v])
            for u, v in g.edges
            if u in self.to_aug and v in self.to_aug
        ]
        self.path_leaves = [self.to_aug[v] for v in sep_path]
        next_id = len(comp)
        self.dummies: set[int] = set()
        level = list(self.path_leaves)
        while len(level) > 1:
            nxt = []
            for j in range(0, len(level) - 1, 2):
                parent = next_id
                next_id += 1
                self.dummies.add(parent)
                edges.append((level[j], parent))
                edges.append((level[j + 1], parent))
                nxt.append(parent)
            if len(level) % 2 == 1:
                nxt.append(level[-1])
            level = nxt
        self.root = level[0]
        self.graph = Graph(next_id, edges)
        self.terminals = sorted(
            {self.to_aug[s] for s, _ in pairs} | {self.to_aug[t] for _, t in pairs}
        )
        self.tree_depth = max(0, math.ceil(math.log2(len(sep_path)))) if len(sep_path) > 1 else 0


def build_augmented_instance(g: Graph, component: Iterable[int],
                             sep_path: Sequence[int],
                             pairs: Sequence[tuple[int, int]]) -> AugmentedInstance:
    if not sep_path:
        raise ValueError("separator path must be nonempty")
    if not pairs:
        raise ValueError("need at least one crossing pair")
    return AugmentedInstance(g, component, sep_path, pairs)


def schedule_k1(aug: AugmentedInstance, tree: PoiseTree,
                sep_path: Sequence[int]) -> TelephoneSchedule:
    """Gather to the separator path, shuttle along it both ways, multicast
    back out; auxiliary tree edges are never scheduled."""
    real_edges = [
        (u, v) for u, v in tree.edges
        if u not in aug.dummies and v not in aug.dummies
    ]
    path_aug = set(aug.path_leaves)
    adj: dict[int, list[int]] = {}
    for u, v in real_edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    real_nodes = set(adj) | (set(tree.nodes) - aug.dummies)

    comps: list[set[int]] = []
    seen: set[int] = set()
    for start in sorted(real_nodes):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj.get(u, ()):
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        comps.append(comp)

    gathers = []
    for comp in comps:
        anchors = sorted(comp & path_aug)
        if not anchors:
            raise DummyEdgeScheduled(
                "tree component reaches the root without touching the path"
            )
        comp_edges = [(u, v) for u, v in real_edges if u in comp and v in comp]
        gathers.append(tree_gather_schedule(comp_edges, anchors[0]))
    gather = TelephoneSchedule.merge_parallel(gathers)
    shuttle = path_shuttle_schedule(list(aug.path_leaves), 2 * len(sep_path))
    spread = TelephoneSchedule(list(reversed(gather.rounds)))

    sched_aug = gather.concat(shuttle).concat(spread)
    for rnd in sched_aug.rounds:
        for u, v in rnd:
            if u in aug.dummies or v in aug.dummies:
                raise DummyEdgeScheduled(f"dummy edge ({u}, {v}) scheduled")
    return TelephoneSchedule(
        [
            [(aug.to_orig[u], aug.to_orig[v]) for u, v in rnd]
            for rnd in sched_aug.rounds
        ]
    )


class MulticastMetrics:
    def __init__(self):
        self.depth = 0
        self.lp_root = 0.0
        self.node_lp_values: list[tuple[int, float]] = []  # (depth, value)
        self.scale_factors: list[float] = []
        self.length = 0

    def record_node(self, depth: int, lp_value: float) -> None:
        self.depth = max(self.depth, depth)
        self.node_lp_values.append((depth, lp_value))

    def cumulative_scale_bound(self, gamma: float) -> float:
        """Worst (1/(1-gamma))^depth * 3/gamma over visited nodes."""
        worst = 0.0
        for depth, _v in self.node_lp_values:
            worst = max(worst, (1.0 / (1.0 - gamma)) ** depth * 3.0 / gamma)
        return worst

    def summary(self) -> str:
        return f"depth={self.depth} lp_root={self.lp_root:.6f} length={self.length}"


def planar_mc_multicast(g: Graph, demands: DemandSet, rng_seed: int = 0,
                        lp_engine: str = "highs",
                        ) -> tuple[TelephoneSchedule, MulticastMetrics]:
    """Schedule all demand pairs; the returned schedule is simulator-verified
    before being handed back."""
    metrics = MulticastMetrics()
    if demands.k == 0:
        return TelephoneSchedule([]), metrics
    gamma = demand_gamma(demands.k) if demands.k >= 2 else 0.5
    sched = _solve_node(
        g, sorted(set(range(g.n))), list(dict.fromkeys(demands.pairs)), gamma,
        0, rng_seed, lp_engine, metrics,
    )
    init = PossessionState.for_demands(g.n, demands)
    final = simulate_telephone(g, init, sched)
    ok, unmet = check_demands_met(final, demands)
    if not ok:
        raise AssertionError(f"multicast schedule missed pairs: {unmet}")
    metrics.length = len(sched)
    return sched, metrics


def _solve_node(g: Graph, component: list[int], pairs: list[tuple[int, int]],
                gamma: float, depth: int, rng_seed: int, lp_engine: str,
                metrics: MulticastMetrics) -> TelephoneSchedule:
    if not pairs:
        return TelephoneSchedule([])
    if len(pairs) == 1:
        s, t = pairs[0]
        path = shortest_path(g, s, t, component)
        if path is None:
            raise UnroutablePair(f"pair ({s}, {t}) disconnected in component")
        return path_relay_schedule(path)

    sub, remap = g.induced(component)
    back = {i: v for v, i in remap.items()}
    sub_pairs = [(remap[s], remap[t]) for s, t in pairs]

    pieces = connected_components(sub)
    if len(pieces) > 1:
        # demands may legally live in different components; treat each piece
        # as its own instance and run them side by side
        piece_of = {v: idx for idx, piece in enumerate(pieces) for v in piece}
        grouped: dict[int, list[tuple[int, int]]] = {}
        for s, t in sub_pairs:
            if piece_of[s] != piece_of[t]:
                raise UnroutablePair(f"pair ({back[s]}, {back[t]}) disconnected")
            grouped.setdefault(piece_of[s], []).append((s, t))
        sides = [
            _solve_node(sub, sorted(pieces[idx]), grouped[idx], gamma, depth,
                        rng_seed * 53 + idx, lp_engine, metrics)
            for idx in sorted(grouped)
        ]
        merged = TelephoneSchedule.merge_parallel(sides)
        return TelephoneSchedule(
            [[(back[u], back[v]) for u, v in rnd] for rnd in merged.rounds]
        )

    sub_demands = DemandSet(sub_pairs, sub.n)
    frac = solve_lp(build_poise_lp(sub, sub_demands), engine=lp_engine)
    metrics.record_node(depth, frac.value)
    if depth == 0:
        metrics.lp_root = frac.value

    weights = sub_demands.node_weights(sub.n)
    sep = find_3path_separator(sub, weights)
    k1, k2, assign = split_demands(frac, sep, gamma)

    parts: list[TelephoneSchedule] = []
    if k1:
        scaled = scale_k1(frac, k1, assign, sep, gamma)
        metrics.scale_factors.append(scaled.value / max(frac.value, 1e-12))
        for j in range(len(sep.paths)):
            members = [i for i in k1 if assign[i] == j]
            if not members:
                continue
            group_pairs = [sub_pairs[i] for i in members]
            aug = build_augmented_instance(
                sub, range(sub.n), sep.paths[j], group_pairs
            )
            aug_pairs = DemandSet.rooted(
                aug.root,
                sorted({aug.to_aug[v] for p in group_pairs for v in p}),
            )
            aug_frac = solve_lp(build_poise_lp(aug.graph, aug_pairs), engine=lp_engine)
            tree = round_poise_tree(
                aug.graph, aug.root, [t for _r, t in aug_pairs.pairs], aug_frac,
                rng_seed=rng_seed * 7_368_787 + depth * 131 + j,
            )
            part = schedule_k1(aug, tree, sep.paths[j])
            parts.append(
                TelephoneSchedule(
                    [[(back[u], back[v]) for u, v in rnd] for rnd in part.rounds]
                )
            )

    children: list[TelephoneSchedule] = []
    if k2:
        comps = connected_components(sub, sep.nodes)
        comp_of = {}
        for ci, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = ci
        grouped: dict[int, list[tuple[int, int]]] = {}
        for i in k2:
            s, t = sub_pairs[i]
            if s not in comp_of or t not in comp_of or comp_of[s] != comp_of[t]:
                raise UnroutablePair(
                    f"K2 pair {sub_pairs[i]} split across components"
                )
            grouped.setdefault(comp_of[s], []).append((s, t))
        for ci in sorted(grouped):
            child = _solve_node(
                sub, sorted(comps[ci]), grouped[ci], gamma, depth + 1,
                rng_seed * 31 + ci + 1, lp_engine, metrics,
            )
            children.append(
                TelephoneSchedule(
                    [[(back[u], back[v]) for u, v in rnd] for rnd in child.rounds]
                )
            )

    sched = TelephoneSchedule([])
    for part in parts:
        sched = sched.concat(part)
    if children:
        sched = sched.concat(TelephoneSchedule.merge_parallel(children))
    return sched
