"""Seed-deterministic instance generation with planarity certification.

Random planar graphs come from a Delaunay triangulation of jitter-perturbed
lattice points, which is planar by construction; the straight-line embedding
is still checked for edge crossings as an explicit certificate.
"""

from __future__ import annotations

import math
import numpy as np
from scipy.spatial import Delaunay

from .graphs import DemandSet, Graph, grid_graph, path_graph, star_graph


class BadParams(ValueError):
    pass


class Instance:
    def __init__(self, graph: Graph, demands: DemandSet | None,
                 positions: np.ndarray | None, meta: dict):
        self.graph = graph
        self.demands = demands
        self.positions = positions
        self.meta = meta


def dary_tree(branching: int, depth: int) -> Graph:
    """Complete tree: every internal node has `branching` children."""
    if branching < 1 or depth < 0:
        raise BadParams("dary-tree needs branching >= 1 and depth >= 0")
    edges = []
    next_id = 1
    frontier = [0]
    for _level in range(depth):
        new_frontier = []
        for parent in frontier:
            for _ in range(branching):
                edges.append((parent, next_id))
                new_frontier.append(next_id)
                next_id += 1
        frontier = new_frontier
    return Graph(next_id, edges)


def _segments_cross(p1, p2, p3, p4) -> bool:
    """Proper crossing of open segments (shared endpoints do not count)."""

    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if v > 1e-12:
            return 1
        if v < -1e-12:
            return -1
        return 0

    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    return d1 * d2 < 0 and d3 * d4 < 0


def certify_straight_line_planar(g: Graph, positions: np.ndarray) -> bool:
    """No two edges of the straight-line drawing properly cross."""
    pts = [tuple(map(float, positions[v])) for v in range(g.n)]
    edges = g.edges
    for i in range(len(edges)):
        a, b = edges[i]
        for j in range(i + 1, len(edges)):
            c, d = edges[j]
            if len({a, b, c, d}) < 4:
                continue
            if _segments_cross(pts[a], pts[b], pts[c], pts[d]):
                return False
    return True


def random_planar_triangulation(n: int, seed: int) -> tuple[Graph, np.ndarray]:
    """Delaunay triangulation of a jittered lattice: planar and connected."""
    if n < 3:
        raise BadParams("random-planar needs n >= 3")
    side = math.ceil(math.sqrt(n))
    rng = np.random.default_rng(seed)
    pts = []
    for idx in range(n):
        r, c = divmod(idx, side)
        jitter = rng.uniform(-0.3, 0.3, 2)
        pts.append((c + jitter[0], r + jitter[1]))
    pts = np.array(pts)
    tri = Delaunay(pts)
    edges = set()
    for simplex in tri.simplices:
        for a in range(3):
            u, v = int(simplex[a]), int(simplex[(a + 1) % 3])
            edges.add((min(u, v), max(u, v)))
    g = Graph(n, sorted(edges))
    if not certify_straight_line_planar(g, pts):
        raise AssertionError("Delaunay output failed the planarity certificate")
    return g, pts


def random_demands(g: Graph, k: int, seed: int) -> DemandSet:
    if k < 1:
        raise BadParams("need k >= 1 demand pairs")
    if g.n < 2:
        raise BadParams("demands need at least two nodes")
    rng = np.random.default_rng(seed + 0x9E37)
    pairs = []
    seen = set()
    guard = 0
    while len(pairs) < k:
        s, t = (int(x) for x in rng.integers(0, g.n, 2))
        guard += 1
        if guard > 10_000 * k:
            raise BadParams(f"could not draw {k} distinct pairs on n={g.n}")
        if s == t or (s, t) in seen:
            continue
        seen.add((s, t))
        pairs.append((s, t))
    return DemandSet(pairs, g.n)


def generate_instance(kind: str, params: dict, seed: int = 0) -> Instance:
    """Deterministic instance per (kind, params, seed).

    Demand selection: params may carry k (random pairs), gossip=True
    (all pairs), or pairs (explicit list).
    """
    params = dict(params)
    k = params.pop("k", None)
    gossip = params.pop("gossip", False)
    explicit = params.pop("pairs", None)
    positions = None
    if kind == "grid":
        rows, cols = int(params.pop("rows")), int(params.pop("cols"))
        if rows < 1 or cols < 1:
            raise BadParams("grid needs rows, cols >= 1")
        g = grid_graph(rows, cols)
        positions = np.array([(i % cols, i // cols) for i in range(g.n)], dtype=float)
    elif kind == "path":
        g = path_graph(int(params.pop("n")))
    elif kind == "star":
        g = star_graph(int(params.pop("leaves")))
    elif kind == "dary-tree":
        g = dary_tree(int(params.pop("d")), int(params.pop("depth")))
    elif kind == "random-planar":
        g, positions = random_planar_triangulation(int(params.pop("n")), seed)
    else:
        raise BadParams(f"unknown instance kind: {kind}")
    if params:
        raise BadParams(f"unused params for {kind}: {sorted(params)}")

    demands = None
    if explicit is not None:
        demands = DemandSet([(int(s), int(t)) for s, t in explicit], g.n)
    elif gossip:
        demands = DemandSet.gossip(g.n)
    elif k is not None:
        demands = random_demands(g, int(k), seed)
    return Instance(g, demands, positions, {"kind": kind, "seed": seed})
