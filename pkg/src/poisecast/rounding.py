"""Round a fractional poise solution into a low-poise Steiner tree.

Works in phases over a shrinking set of cluster centers.  Each phase scales
the per-center path decomposition onto an integer grid, doubles it, packs
center-to-center paths by pairing the resulting strands through the root,
randomly keeps one short path per center, and extracts stars from the kept
arcs so a constant fraction of the clusters merge.  Paths longer than four
times the fractional value are discarded and seeded retries handle the
unlucky draws.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .graphs import Graph, MultiGraph
from .lp import PoiseFractional
from .multiflow import break_cycles_to_in_forest, extract_stars

DEFAULT_GRID = 1024


class GridTooCoarse(ValueError):
    """A center has no decomposition paths to place on the integer grid."""


class MergeFailure(RuntimeError):
    """Center merging kept too few paths across the whole retry budget."""


class PoiseTree:
    """Tree spanning root + terminals with its measured poise."""

    def __init__(self, edges: Iterable[tuple[int, int]], root: int,
                 iterations: int = 0):
        self.edges = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        self.root = root
        self.iterations = iterations
        self.merge_path_lengths: list[int] = []
        nodes = {root}
        for u, v in self.edges:
            nodes.add(u)
            nodes.add(v)
        self.nodes = frozenset(nodes)
        adj: dict[int, list[int]] = {v: [] for v in nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        if len(self.edges) != len(nodes) - 1:
            raise ValueError("edge count does not match a tree")
        dist = self._bfs(adj, root)
        if any(d < 0 for d in dist.values()):
            raise ValueError("tree is not connected")
        self.depth = max(dist.values(), default=0)
        far = max(dist, key=lambda v: (dist[v], v))
        dist2 = self._bfs(adj, far)
        self.diameter = max(dist2.values(), default=0)
        self.max_degree = max((len(a) for a in adj.values()), default=0)
        self.poise = self.diameter + self.max_degree

    @staticmethod
    def _bfs(adj: dict[int, list[int]], src: int) -> dict[int, int]:
        dist = {v: -1 for v in adj}
        dist[src] = 0
        frontier = [src]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if dist[v] < 0:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        return dist

    def spans(self, nodes: Iterable[int]) -> bool:
        return set(nodes) <= self.nodes

    def __repr__(self) -> str:
        return (
            f"PoiseTree(root={self.root}, nodes={len(self.nodes)}, "
            f"poise={self.poise})"
        )


def scale_to_multigraph(frac: PoiseFractional, centers: Sequence[int],
                        grid: int = DEFAULT_GRID
                        ) -> tuple[MultiGraph, dict[int, list[tuple[tuple[int, ...], int]]]]:
    """Place each center's decomposition on an integer grid and double it.

    Returns the doubled multigraph together with, per center, the doubled
    strand walks (center -> root) and their multiplicities.  Largest-remainder
    repair keeps every center's pre-doubling total at exactly `grid`.
    """
    if grid < 1:
        raise GridTooCoarse("grid must be at least 1")
    pair_of = {t: i for i, (_s, t) in enumerate(frac.pairs)}
    node_count = 1 + max(
        max((max(p) for p, _ in frac.paths_for(i)), default=0)
        for i in range(len(frac.pairs))
    )
    mg = MultiGraph(max(node_count, 2))
    strands: dict[int, list[tuple[tuple[int, ...], int]]] = {}
    for t in sorted(centers):
        if t not in pair_of:
            raise ValueError(f"center {t} has no demand pair")
        paths = frac.paths_for(pair_of[t])
        if not paths:
            raise GridTooCoarse(f"center {t} has no decomposition paths")
        floors = [int(math.floor(w * grid)) for _, w in paths]
        remainders = [w * grid - f for (_, w), f in zip(paths, floors)]
        deficit = grid - sum(floors)
        order = sorted(range(len(paths)), key=lambda j: (-remainders[j], j))
        for j in order[:deficit]:
            floors[j] += 1
        out = []
        for (path, _w), mult in zip(paths, floors):
            if mult == 0:
                continue
            doubled = 2 * mult
            strand = tuple(reversed(path))  # stored source->sink; strand runs t->root
            out.append((strand, doubled))
            for a, b in zip(path, path[1:]):
                mg.add_edge(a, b, doubled)
        strands[t] = out
    return mg, strands


def _excise_repeats(walk: Sequence[int]) -> list[int]:
    w = list(walk)
    changed = True
    while changed:
        changed = False
        seen: dict[int, int] = {}
        for idx, v in enumerate(w):
            if v in seen:
                del w[seen[v] + 1 : idx + 1]
                changed = True
                break
            seen[v] = idx
    return w


def _split_at_terminals(walk: Sequence[int],
                        terminals: set[int]) -> list[tuple[int, ...]]:
    pieces = []
    start = 0
    for idx in range(1, len(walk) - 1):
        if walk[idx] in terminals:
            pieces.append(tuple(walk[start : idx + 1]))
            start = idx
    pieces.append(tuple(walk[start:]))
    return [p for p in pieces if len(p) >= 2 and p[0] != p[-1]]


def pair_strands(strands: dict[int, list[tuple[tuple[int, ...], int]]]
                 ) -> list[tuple[tuple[int, ...], int]]:
    """Glue center->root strands of distinct centers into center-to-center
    walks, largest remaining totals first, then simplify the walks.

    Every strand copy of every center gets used, so each center ends up as an
    endpoint of its full strand count (2 * grid before any length pruning).
    """
    centers = sorted(strands)
    chips = {t: [(list(w), int(c)) for w, c in strands[t]] for t in centers}
    remaining = {t: sum(c for _, c in chips[t]) for t in centers}
    total = sum(remaining.values())
    terminal_set = set(centers)
    out: list[tuple[tuple[int, ...], int]] = []
    while total > 0:
        live = sorted(
            (t for t in centers if remaining[t] > 0),
            key=lambda t: (-remaining[t], t),
        )
        if len(live) < 2:
            raise MergeFailure("strand pairing left a single live center")
        c1, c2 = live[0], live[1]
        third = remaining[live[2]] if len(live) > 2 else 0
        cap = (total - 2 * third) // 2
        take = min(chips[c1][0][1], chips[c2][0][1], max(1, cap))
        w1, m1 = chips[c1][0]
        w2, m2 = chips[c2][0]
        glued = w1[:-1] + list(reversed(w2))
        walk = _excise_repeats(glued)
        for piece in _split_at_terminals(walk, terminal_set):
            out.append((piece, take))
        for c, m, w in ((c1, m1, w1), (c2, m2, w2)):
            if m - take == 0:
                chips[c].pop(0)
            else:
                chips[c][0] = (w, m - take)
            remaining[c] -= take
        total -= 2 * take
    return out


class PathSelection:
    """Outcome of congestion-aware random path picks."""

    def __init__(self, picks: dict[int, tuple[int, ...] | None], congestion: int,
                 within_bound: bool):
        self.picks = picks
        self.congestion = congestion
        self.within_bound = within_bound


def congestion_round_paths(candidates: dict[int, list[tuple[tuple[int, ...], int]]],
                           limit: float, rng_seed: int,
                           max_len: float | None = None,
                           attempts: int = 64) -> PathSelection:
    """Pick at most one candidate path per terminal, resampling until node
    congestion is at most `limit` (keeps the best try and flags otherwise).

    A pick longer than `max_len` hops counts as no pick for that terminal.
    """
    rng = np.random.default_rng(rng_seed)
    terms = sorted(candidates)
    best: PathSelection | None = None
    for _ in range(max(1, attempts)):
        picks: dict[int, tuple[int, ...] | None] = {}
        for t in terms:
            opts = candidates[t]
            weights = np.array([c for _, c in opts], dtype=np.float64)
            j = int(rng.choice(len(opts), p=weights / weights.sum()))
            path = tuple(opts[j][0])
            if max_len is not None and len(path) - 1 > max_len:
                picks[t] = None
            else:
                picks[t] = path
        load: dict[int, int] = {}
        for p in picks.values():
            if p is None:
                continue
            for v in p:
                load[v] = load.get(v, 0) + 1
        congestion = max(load.values(), default=0)
        if best is None or congestion < best.congestion:
            best = PathSelection(picks, congestion, congestion <= limit)
        if congestion <= limit:
            return best
    assert best is not None
    return best


class ClusterState:
    """Centered partition of the live terminals plus the accumulated merge
    subgraph.

    Invariant (checked after every phase): each member sits within
    4 * value * iteration hops of its cluster center inside the subgraph,
    which is what keeps the final tree diameter proportional to the number
    of phases.
    """

    def __init__(self, terminals: Iterable[int]):
        self.clusters: dict[int, set[int]] = {t: {t} for t in terminals}
        self.h_edges: set[tuple[int, int]] = set()
        self.iteration = 0

    @property
    def centers(self) -> list[int]:
        return sorted(self.clusters)

    def apply_merge(self, result: "MergeResult") -> None:
        self.iteration += 1
        for _tail, path in sorted(result.paths.items()):
            for a, b in zip(path, path[1:]):
                self.h_edges.add((min(a, b), max(a, b)))
        for tail, head in sorted(result.heads.items()):
            self.clusters[head] |= self.clusters.pop(tail)

    def check_radius(self, value: float) -> None:
        adj: dict[int, list[int]] = {}
        for u, v in self.h_edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        limit = 4.0 * value * self.iteration
        for center, members in self.clusters.items():
            dist = {center: 0}
            frontier = [center]
            while frontier:
                nxt = []
                for u in frontier:
                    for v in adj.get(u, ()):
                        if v not in dist:
                            dist[v] = dist[u] + 1
                            nxt.append(v)
                frontier = nxt
            for t in members:
                if dist.get(t, -1) < 0 or dist[t] > limit + 1e-9:
                    raise AssertionError(
                        f"member {t} is {dist.get(t)} hops from center "
                        f"{center}, over the {limit:.2f} radius"
                    )


class MergeResult:
    """Star-arranged center-to-center merge paths from one phase."""

    def __init__(self, paths: dict[int, tuple[int, ...]], heads: dict[int, int],
                 selection: PathSelection, attempts: int):
        self.paths = paths      # tail center -> path (tail first)
        self.heads = heads      # tail center -> star head center
        self.selection = selection
        self.attempts = attempts

    @property
    def count(self) -> int:
        return len(self.paths)


def merge_centers(frac: PoiseFractional, centers: Sequence[int], value: float,
                  rng_seed: int, grid: int = DEFAULT_GRID,
                  max_attempts: int = 64) -> MergeResult:
    """One merge phase: pack strands, keep one random short path per center,
    and star-extract the kept arcs.  Retries with fresh randomness until at
    least max(1, |centers|/8) merges survive."""
    centers = sorted(set(centers))
    if len(centers) < 2:
        raise ValueError("merging needs at least two centers")
    mg, strands = scale_to_multigraph(frac, centers, grid)
    packing = pair_strands(strands)
    length_cap = 4.0 * value

    incident: dict[int, list[tuple[tuple[int, ...], int]]] = {t: [] for t in centers}
    for path, mult in packing:
        for end in (path[0], path[-1]):
            oriented = path if path[0] == end else tuple(reversed(path))
            incident[end].append((oriented, mult))
    for t in centers:
        incident[t].sort()
        # pairing hands every center its full strand budget back
        if sum(c for _, c in incident[t]) < 2 * grid:
            raise MergeFailure(f"center {t} holds fewer than 2*grid packing paths")

    need = max(1, math.ceil(len(centers) / 8))
    best: MergeResult | None = None
    for attempt in range(max_attempts):
        selection = congestion_round_paths(
            incident, limit=4.0 * value,
            rng_seed=(rng_seed * 1_000_003 + attempt) & 0x7FFFFFFF,
            max_len=length_cap, attempts=8,
        )
        arcs: dict[int, int] = {}
        chosen: dict[int, tuple[int, ...]] = {}
        for t in centers:
            path = selection.picks.get(t)
            if path is None:
                continue
            other = path[-1]
            if other == t:
                continue
            arcs[t] = other
            chosen[t] = path
        forest = break_cycles_to_in_forest(arcs)
        stars = extract_stars(forest)
        paths = {tail: chosen[tail] for tail in stars.arcs}
        result = MergeResult(paths, dict(stars.arcs), selection, attempt + 1)
        if best is None or result.count > best.count:
            best = result
        if result.count >= need:
            return result
    assert best is not None
    if best.count >= 1:
        return best
    raise MergeFailure(
        f"kept {best.count} paths for {len(centers)} centers after "
        f"{max_attempts} attempts"
    )


def round_poise_tree(g: Graph, root: int, terminals: Iterable[int],
                     frac: PoiseFractional, rng_seed: int = 0,
                     grid: int = DEFAULT_GRID) -> PoiseTree:
    """Merge clusters phase by phase, then return the pruned shortest-path
    tree of the accumulated subgraph from the root."""
    terminals = sorted(set(terminals) - {root})
    if not terminals:
        raise ValueError("need at least one terminal besides the root")
    pair_of = {t: i for i, (_s, t) in enumerate(frac.pairs)}
    for t in terminals:
        if t not in pair_of:
            raise ValueError(f"terminal {t} missing from the fractional solution")

    k = len(terminals)
    cap = max(5, math.ceil(math.log(k, 4 / 3)) + 3) if k > 1 else 1
    state = ClusterState(terminals)
    merge_lengths: list[int] = []
    while len(state.clusters) > 1:
        if state.iteration >= cap:
            raise MergeFailure(
                f"cluster merging did not finish within {cap} phases"
            )
        result = merge_centers(
            frac, state.centers, frac.value,
            rng_seed=(rng_seed * 9_176_131 + state.iteration + 1) & 0x7FFFFFFF,
            grid=grid,
        )
        state.apply_merge(result)
        state.check_radius(frac.value)
        merge_lengths.extend(len(p) - 1 for p in result.paths.values())

    (final_center,) = state.centers
    root_paths = frac.paths_for(pair_of[final_center])
    anchor = min(root_paths, key=lambda pw: (len(pw[0]), pw[0]))[0]
    h_edges = set(state.h_edges)
    for a, b in zip(anchor, anchor[1:]):
        h_edges.add((min(a, b), max(a, b)))

    tree_edges = _shortest_path_tree_edges(g.n, h_edges, root, set(terminals))
    tree = PoiseTree(tree_edges, root, state.iteration)
    tree.merge_path_lengths = merge_lengths
    return tree


def _shortest_path_tree_edges(n: int, edges: set[tuple[int, int]], root: int,
                              keep: set[int]) -> list[tuple[int, int]]:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for v in adj:
        adj[v].sort()
    parent = {root: -1}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj.get(u, ()):  # BFS tree, smallest-id parents first
                if v not in parent:
                    parent[v] = u
                    nxt.append(v)
        frontier = nxt
    missing = keep - set(parent)
    if missing:
        raise MergeFailure(f"accumulated subgraph misses terminals {sorted(missing)}")
    # prune to the union of root->terminal tree paths
    needed = {root}
    for t in keep:
        v = t
        while v not in needed:
            needed.add(v)
            v = parent[v]
    return [
        (min(v, parent[v]), max(v, parent[v]))
        for v in needed
        if parent.get(v, -1) != -1
    ]
