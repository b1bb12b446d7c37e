"""Terminal-path packing in inner-Eulerian multigraphs and the functional
digraph forest/star extraction, the two combinatorial subroutines behind
center merging.

The packing works by complete splitting-off: at each non-terminal vertex,
incident edge copies are paired and replaced by shortcuts whenever doing so
keeps every terminal's cut value lambda(t, T-t) intact.  When no non-terminal
edges remain, the surviving edges are exactly a maximum collection of
edge-disjoint terminal-to-terminal paths.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .maxflow import FlowNet
from .graphs import MultiGraph


class EvennessViolated(ValueError):
    """A non-terminal vertex has odd degree; the packing bound needs parity."""


class PackingShortfall(RuntimeError):
    """Packing value fell below sum(lambda)/2; indicates an implementation bug."""


def terminal_cut(mg: MultiGraph, terminals: Iterable[int], t: int) -> int:
    """Exact lambda(t, T-t): min edge cut separating t from the other terminals."""
    tset = sorted(set(terminals))
    if t not in tset:
        raise ValueError(f"{t} is not a terminal")
    if len(tset) < 2:
        raise ValueError("need at least two terminals")
    sink = mg.n
    net = FlowNet(mg.n + 1)
    for (u, v), m in sorted(mg.mult.items()):
        net.add_undirected(u, v, m)
    inf = mg.total_edges() + 1
    for other in tset:
        if other != t:
            net.add_edge(other, sink, inf)
    return net.max_flow(t, sink)


class TPathPacking:
    """Edge-disjoint terminal paths with multiplicities."""

    def __init__(self, paths: Sequence[tuple[tuple[int, ...], int]],
                 terminals: Iterable[int]):
        self.paths = [(tuple(p), int(c)) for p, c in paths]
        self.terminals = sorted(set(terminals))

    @property
    def value(self) -> int:
        return sum(c for _, c in self.paths)

    def endpoint_count(self, t: int) -> int:
        return sum(c for p, c in self.paths if p[0] == t or p[-1] == t)

    def incident(self, t: int) -> list[tuple[tuple[int, ...], int]]:
        return [(p, c) for p, c in self.paths if p[0] == t or p[-1] == t]

    def edge_usage(self) -> dict[tuple[int, int], int]:
        usage: dict[tuple[int, int], int] = {}
        for p, c in self.paths:
            for a, b in zip(p, p[1:]):
                e = (a, b) if a < b else (b, a)
                usage[e] = usage.get(e, 0) + c
        return usage

    def validate(self, mg: MultiGraph) -> None:
        tset = set(self.terminals)
        for p, c in self.paths:
            if c < 1 or len(p) < 2:
                raise AssertionError(f"degenerate path {p} x{c}")
            if p[0] not in tset or p[-1] not in tset or p[0] == p[-1]:
                raise AssertionError(f"path endpoints not distinct terminals: {p}")
            if any(v in tset for v in p[1:-1]):
                raise AssertionError(f"interior terminal in path {p}")
            if len(set(p)) != len(p):
                raise AssertionError(f"path repeats a vertex: {p}")
        for e, used in self.edge_usage().items():
            if used > mg.mult.get(e, 0):
                raise AssertionError(f"edge {e} used {used} > multiplicity")


def _normalize_walk(walk: tuple[int, ...],
                    terminals: set[int]) -> list[tuple[int, ...]]:
    """Excise repeated-vertex loops, then split at any interior terminal."""
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
    pieces = []
    start = 0
    for idx in range(1, len(w) - 1):
        if w[idx] in terminals:
            pieces.append(tuple(w[start : idx + 1]))
            start = idx
    pieces.append(tuple(w[start:]))
    return [p for p in pieces if len(p) >= 2]


def _lambdas(mg: MultiGraph, tset: list[int]) -> dict[int, int]:
    return {t: terminal_cut(mg, tset, t) for t in tset}


def pack_tpaths(mg: MultiGraph, terminals: Iterable[int],
                allow_fallback: bool = True) -> TPathPacking:
    """Maximum T-path packing of value sum(lambda)/2 exactly.

    Precondition: every non-terminal vertex has even degree (counting
    multiplicity).  Raises EvennessViolated otherwise and PackingShortfall if
    the splitting engine misses the bound (a bug, not a legitimate outcome).
    """
    tset = sorted(set(terminals))
    if len(tset) < 2:
        raise ValueError("need at least two terminals")
    tmem = set(tset)
    for v in range(mg.n):
        if v not in tmem and mg.degree(v) % 2 != 0:
            raise EvennessViolated(f"non-terminal {v} has odd degree")

    lam = _lambdas(mg, tset)
    bound = sum(lam.values())
    assert bound % 2 == 0, "sum of lambdas is odd despite even inner degrees"
    bound //= 2

    packing = None
    try:
        packing = _pack_by_splitting(mg, tset, lam)
    except PackingShortfall:
        pass
    if (packing is None or packing.value < bound) and allow_fallback \
            and mg.total_edges() <= 20:
        packing = _pack_exhaustive(mg, tset)
    if packing is None:
        raise PackingShortfall("splitting engine stuck and fallback unavailable")
    packing.validate(mg)
    if packing.value < bound:
        raise PackingShortfall(
            f"packed {packing.value} < bound {bound}"
        )
    for t in tset:
        if packing.endpoint_count(t) > lam[t]:
            raise PackingShortfall(f"terminal {t} over its cut value")
    return packing


def _pack_by_splitting(mg: MultiGraph, tset: list[int],
                       lam: dict[int, int]) -> TPathPacking:
    tmem = set(tset)
    # entries: (u, v, walk from u to v) -> multiplicity
    entries: dict[tuple[int, int, tuple[int, ...]], int] = {}
    for (u, v), m in sorted(mg.mult.items()):
        entries[(u, v, (u, v))] = m

    def current_multigraph() -> MultiGraph:
        out = MultiGraph(mg.n)
        for (u, v, _w), m in entries.items():
            if m > 0 and u != v:
                out.add_edge(u, v, m)
        return out

    def lam_preserved() -> bool:
        cur = current_multigraph()
        return all(terminal_cut(cur, tset, t) >= lam[t] for t in tset)

    def incident(v: int):
        out = []
        for key, m in entries.items():
            if m > 0 and (key[0] == v or key[1] == v):
                out.append(key)
        out.sort()
        return out

    def oriented(key, frm: int) -> tuple[int, ...]:
        u, v, walk = key
        return walk if walk[0] == frm else tuple(reversed(walk))

    def try_split(e1, e2, count: int) -> bool:
        """Tentatively split `count` copies of (e1, e2) through v, keep if
        every lambda survives."""
        entries[e1] -= count
        entries[e2] -= count
        new_key = None
        u = e1[0] if e1[1] == v else e1[1]
        w = e2[0] if e2[1] == v else e2[1]
        if u != w:
            walk = oriented(e1, u)[:-1] + oriented(e2, v)
            a, b = (u, w) if u < w else (w, u)
            nwalk = walk if walk[0] == a else tuple(reversed(walk))
            new_key = (a, b, nwalk)
            entries[new_key] = entries.get(new_key, 0) + count
        if lam_preserved():
            return True
        entries[e1] += count
        entries[e2] += count
        if new_key is not None:
            entries[new_key] -= count
            if entries[new_key] == 0:
                del entries[new_key]
        return False

    inner = [v for v in range(mg.n) if v not in tmem]
    for v in inner:
        while True:
            inc = incident(v)
            if not inc:
                break
            e1 = inc[0]
            progressed = False
            for e2 in inc:
                if e2 == e1:
                    avail = entries[e1] // 2
                else:
                    avail = min(entries[e1], entries[e2])
                if avail < 1:
                    continue
                # largest batch that keeps every terminal cut; monotone in count
                lo, hi, best = 1, avail, 0
                while lo <= hi:
                    mid = (lo + hi) // 2
                    if try_split(e1, e2, mid):
                        best = mid
                        lo = mid + 1
                        # roll back; the final commit happens below
                        _undo_split(entries, e1, e2, mid, v)
                    else:
                        hi = mid - 1
                if best >= 1:
                    ok = try_split(e1, e2, best)
                    assert ok
                    progressed = True
                    break
            if not progressed:
                raise PackingShortfall(f"no admissible split at vertex {v}")
        # drop exhausted entries touching v
        for key in [k for k, m in entries.items() if m == 0]:
            del entries[key]

    paths: list[tuple[tuple[int, ...], int]] = []
    for (u, v, walk), m in sorted(entries.items()):
        if m <= 0 or u == v:
            continue
        for piece in _normalize_walk(walk, tmem):
            paths.append((piece, m))
    return TPathPacking(paths, tset)


def _undo_split(entries, e1, e2, count: int, v: int) -> None:
    entries[e1] += count
    entries[e2] += count
    u = e1[0] if e1[1] == v else e1[1]
    w = e2[0] if e2[1] == v else e2[1]
    if u == w:
        return
    walk_u = e1[2] if e1[2][0] == u else tuple(reversed(e1[2]))
    walk_v = e2[2] if e2[2][0] == v else tuple(reversed(e2[2]))
    walk = walk_u[:-1] + walk_v
    a, b = (u, w) if u < w else (w, u)
    nwalk = walk if walk[0] == a else tuple(reversed(walk))
    key = (a, b, nwalk)
    entries[key] -= count
    if entries[key] == 0:
        del entries[key]


def _enumerate_tpaths(mg: MultiGraph, tset: list[int]) -> list[tuple[int, ...]]:
    """All simple paths between distinct terminals with no interior terminal."""
    tmem = set(tset)
    adj: dict[int, list[int]] = {v: [] for v in range(mg.n)}
    for (u, v) in mg.mult:
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v] = sorted(set(adj[v]))
    out: set[tuple[int, ...]] = set()

    def dfs(path: list[int]) -> None:
        cur = path[-1]
        for nxt in adj[cur]:
            if nxt in path:
                continue
            if nxt in tmem:
                if nxt > path[0]:
                    out.add(tuple(path) + (nxt,))
                continue
            path.append(nxt)
            dfs(path)
            path.pop()

    for t in tset:
        dfs([t])
    return sorted(out)


def _pack_exhaustive(mg: MultiGraph, tset: list[int]) -> TPathPacking:
    """Branch-and-bound maximum packing; intended for <= 20 edge copies."""
    candidates = _enumerate_tpaths(mg, tset)
    edge_lists = [
        [tuple(sorted(e)) for e in zip(p, p[1:])] for p in candidates
    ]
    caps = dict(mg.mult)
    best: list[tuple[tuple[int, ...], int]] = []
    best_val = 0

    def rec(idx: int, chosen: list[tuple[tuple[int, ...], int]], val: int,
            cap_left: int) -> None:
        nonlocal best, best_val
        if val > best_val:
            best_val = val
            best = list(chosen)
        if idx == len(candidates) or val + cap_left // 1 <= best_val:
            return
        path = candidates[idx]
        edges = edge_lists[idx]
        fit = min(caps[e] for e in edges)
        for c in range(fit, -1, -1):
            if c:
                for e in edges:
                    caps[e] -= c
                chosen.append((path, c))
            rec(idx + 1, chosen, val + c, cap_left - c * len(edges))
            if c:
                chosen.pop()
                for e in edges:
                    caps[e] += c

    rec(0, [], 0, mg.total_edges())
    return TPathPacking(best, tset)


def exhaustive_pack_value(mg: MultiGraph, terminals: Iterable[int]) -> int:
    """Independent oracle: maximum T-path packing value by exhaustive search."""
    return _pack_exhaustive(mg, sorted(set(terminals))).value


# ---------------------------------------------------------------------------
# functional digraphs: forests and stars
# ---------------------------------------------------------------------------

def break_cycles_to_in_forest(arcs: dict[int, int]) -> dict[int, int]:
    """Keep >= half the arcs of a functional digraph so every component is an
    inward arborescence; one arc (smallest tail) leaves each directed cycle."""
    for u, v in arcs.items():
        if u == v:
            raise ValueError(f"self-loop at {u}")
    kept = dict(arcs)
    color: dict[int, int] = {}  # 0 visiting, 1 done
    for start in sorted(kept):
        if color.get(start) == 1:
            continue
        trail = []
        u = start
        while u in kept and color.get(u) is None:
            color[u] = 0
            trail.append(u)
            u = kept[u]
        if u in color and color[u] == 0:
            # found a new cycle; drop its smallest-tail arc
            cyc = trail[trail.index(u):]
            del kept[min(cyc)]
        for w in trail:
            color[w] = 1
    return kept


class InForestStars:
    """Vertex-disjoint stars: arcs from leaf centers into one star head."""

    def __init__(self, arcs: dict[int, int]):
        self.arcs = dict(arcs)
        self.stars: dict[int, list[int]] = {}
        for tail, head in sorted(arcs.items()):
            self.stars.setdefault(head, []).append(tail)

    @property
    def arc_count(self) -> int:
        return len(self.arcs)


def extract_stars(forest: dict[int, int]) -> InForestStars:
    """Pick, per in-tree, the larger parity class of arc levels (ties: even).

    Arc level = hop distance of its head to the tree root; either parity
    class forms vertex-disjoint stars.
    """
    depth: dict[int, int] = {}

    def depth_of(u: int) -> int:
        chain = []
        while u in forest and u not in depth:
            chain.append(u)
            u = forest[u]
        base = depth.get(u, 0)
        if u not in forest:
            depth[u] = 0
        for w in reversed(chain):
            base += 1
            depth[w] = base
        return depth[chain[0]] if chain else depth[u]

    root_of: dict[int, int] = {}

    def find_root(u: int) -> int:
        seen = []
        while u in forest and u not in root_of:
            seen.append(u)
            u = forest[u]
        r = root_of.get(u, u)
        for w in seen:
            root_of[w] = r
        return r

    by_tree: dict[int, dict[int, list[tuple[int, int]]]] = {}
    for tail in sorted(forest):
        head = forest[tail]
        depth_of(tail)
        r = find_root(tail)
        parity = depth[head] % 2
        by_tree.setdefault(r, {0: [], 1: []})[parity].append((tail, head))

    kept: dict[int, int] = {}
    for r in sorted(by_tree):
        classes = by_tree[r]
        pick = classes[0] if len(classes[0]) >= len(classes[1]) else classes[1]
        for tail, head in pick:
            kept[tail] = head
    return InForestStars(kept)
