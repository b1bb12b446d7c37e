"""Balanced vertex separators made of up to three shortest paths from one root.

The separator theorem for planar graphs guarantees that some triple of
root-to-node paths of any BFS tree splits the component into weight-halves,
so the search walks candidate pools of growing size (single tree paths,
fundamental-cycle pairs, all pairs, then triples seeded by the best pairs)
and keeps the verified candidate that shrinks the heaviest remaining
component the most.  Every returned separator passes verify_separator, which
is the contract downstream algorithms rely on; planarity itself is the
caller's declaration.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _accel
from .graphs import Graph, NodeWeights


class SeparatorNotFound(RuntimeError):
    """No verified 3-path separator; the planarity declaration is suspect."""


class PathSeparator:
    """Root plus up to three root-anchored shortest paths; nodes = union."""

    def __init__(self, root: int, paths: Sequence[Sequence[int]]):
        self.root = root
        self.paths: tuple[tuple[int, ...], ...] = tuple(
            tuple(p) for p in paths if len(p) > 0
        )
        if not self.paths:
            self.paths = ((root,),)
        for p in self.paths:
            if p[0] != root:
                raise ValueError("every separator path starts at the root")
        nodes: set[int] = set()
        for p in self.paths:
            nodes.update(p)
        self.nodes = frozenset(nodes)

    def __repr__(self) -> str:
        return f"PathSeparator(root={self.root}, paths={len(self.paths)}, size={len(self.nodes)})"


def _bfs_parents(g: Graph, root: int, allowed: set[int]) -> dict[int, int]:
    parent = {root: -1}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for v in g.adj[u]:
                if v in allowed and v not in parent:
                    parent[v] = u
                    nxt.append(v)
        frontier = nxt
    return parent


def _tree_path(parent: dict[int, int], u: int) -> tuple[int, ...]:
    path = [u]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    path.reverse()
    return tuple(path)


class _BalanceChecker:
    def __init__(self, g: Graph, weights: NodeWeights, component: set[int]):
        self.indptr, self.indices = g.csr()
        self.base = np.zeros(g.n, dtype=np.bool_)
        for v in component:
            self.base[v] = True
        self.w = np.array(
            [weights[v] if v in component else 0 for v in range(g.n)],
            dtype=np.int64,
        )
        self.total = int(self.w.sum())

    def heaviest_after(self, removed: Iterable[int]) -> int:
        mask = self.base.copy()
        for v in removed:
            mask[v] = False
        return int(
            _accel.max_component_weight(self.indptr, self.indices, mask, self.w)
        )


def find_3path_separator(g: Graph, weights: NodeWeights,
                         component: Iterable[int] | None = None) -> PathSeparator:
    """Weight-balanced separator of the induced component using <= 3 shortest
    paths from the component's smallest node id."""
    comp = set(component) if component is not None else set(range(g.n))
    if not comp:
        raise ValueError("empty component")
    ncomp = len(comp)
    checker = _BalanceChecker(g, weights, comp)
    if checker.total < 1:
        raise ValueError("component weight must be at least 1")
    root = min(comp)
    parent = _bfs_parents(g, root, comp)
    if len(parent) != ncomp:
        raise ValueError("component is not connected")
    medges = sum(1 for u, v in g.edges if u in comp and v in comp)
    if ncomp >= 3 and medges > 3 * ncomp - 6:
        raise SeparatorNotFound(
            f"component has {medges} edges on {ncomp} nodes; not planar"
        )

    paths = {u: _tree_path(parent, u) for u in comp}
    half = checker.total  # compare 2 * heaviest <= total

    best: tuple[tuple[int, int, int, tuple], PathSeparator] | None = None

    def consider(chosen: Sequence[int]) -> None:
        nonlocal best
        cand = PathSeparator(root, [paths[u] for u in chosen])
        heaviest = checker.heaviest_after(cand.nodes)
        if 2 * heaviest > half:
            return
        # deepest shrink first: small components must vanish entirely to keep
        # recursive decompositions logarithmically deep
        key = (heaviest, len(cand.paths), len(cand.nodes), cand.paths)
        if best is None or key < best[0]:
            best = (key, cand)

    for u in sorted(comp):  # single tree paths
        consider([u])
    for u, v in g.edges:  # fundamental-cycle pairs
        if u in comp and v in comp and parent.get(v) != u and parent.get(u) != v:
            consider([u, v])
    if best is None or ncomp <= 24:
        ordered = sorted(comp)
        for i, u in enumerate(ordered):  # all pairs
            for v in ordered[i + 1 :]:
                consider([u, v])
    if best is None or ncomp <= 16:
        scored = []
        for u in sorted(comp):
            for v in sorted(comp):
                if v <= u:
                    continue
                sep = set(paths[u]) | set(paths[v])
                scored.append((checker.heaviest_after(sep), u, v))
        scored.sort()
        seeds = scored if ncomp <= 16 else scored[:50]
        for _heavy, u, v in seeds:  # triples seeded by the most balanced pairs
            for w in sorted(comp):
                if w in (u, v):
                    continue
                consider([u, v, w])
            if best is not None and ncomp > 16:
                break
    if best is None:
        raise SeparatorNotFound(
            f"no balanced <=3-path separator from root {root} "
            f"(component size {ncomp})"
        )
    return best[1]


def verify_separator(g: Graph, weights: NodeWeights, sep: PathSeparator,
                     component: Iterable[int] | None = None) -> bool:
    """Re-check both separator invariants: every path prefix is a shortest
    path from the root inside the component, and removal leaves only
    components of at most half the total weight."""
    comp = set(component) if component is not None else set(range(g.n))
    if sep.root not in comp or not sep.nodes <= comp:
        return False
    indptr, indices = g.csr()
    mask = np.zeros(g.n, dtype=np.bool_)
    for v in comp:
        mask[v] = True
    dist = _accel.bfs_dists(
        indptr, indices, np.array([sep.root], dtype=np.int64), mask
    )
    for p in sep.paths:
        for i, v in enumerate(p):
            if dist[v] != i:
                return False
        for a, b in zip(p, p[1:]):
            if b not in g.adj[a]:
                return False
    checker = _BalanceChecker(g, weights, comp)
    return 2 * checker.heaviest_after(sep.nodes) <= checker.total
