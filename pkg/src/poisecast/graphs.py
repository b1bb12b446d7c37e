"""Graph, multigraph and demand-set types plus the traversal primitives
shared by every scheduler module.

Node ids are dense integers 0..n-1 and every deterministic tie-break is by
smallest id, so repeated runs produce identical schedules.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _accel


class GraphFormatError(ValueError):
    """Malformed graph or demand text input."""


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable undirected simple graph on nodes 0..n-1."""

    __slots__ = ("n", "edges", "adj", "_indptr", "_indices")

    def __init__(self, node_count: int, edges: Iterable[tuple[int, int]]):
        if node_count < 1:
            raise ValueError("graph needs at least one node")
        self.n = int(node_count)
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge endpoint out of range: ({u}, {v})")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            seen.add(_norm_edge(u, v))
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(seen))
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for v in range(self.n):
            indptr[v + 1] = indptr[v] + len(self.adj[v])
        self._indptr = indptr
        self._indices = np.fromiter(
            (w for a in self.adj for w in a), dtype=np.int64, count=int(indptr[-1])
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        return self._indptr, self._indices

    def induced(self, nodes: Sequence[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on `nodes`, relabeled densely by sorted order.

        Returns the subgraph and the old-id -> new-id mapping.
        """
        order = sorted(set(nodes))
        remap = {v: i for i, v in enumerate(order)}
        sub_edges = [
            (remap[u], remap[v]) for u, v in self.edges if u in remap and v in remap
        ]
        return Graph(len(order), sub_edges), remap

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph) and self.n == other.n and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class MultiGraph:
    """Undirected multigraph: unordered pairs with positive multiplicity."""

    __slots__ = ("n", "mult")

    def __init__(self, node_count: int, edge_mult: dict[tuple[int, int], int] | None = None):
        if node_count < 1:
            raise ValueError("multigraph needs at least one node")
        self.n = int(node_count)
        self.mult: dict[tuple[int, int], int] = {}
        if edge_mult:
            for (u, v), m in edge_mult.items():
                self.add_edge(u, v, m)

    def add_edge(self, u: int, v: int, count: int = 1) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
            raise ValueError(f"bad multigraph edge ({u}, {v})")
        if count < 1:
            raise ValueError("multiplicity must be positive")
        e = _norm_edge(u, v)
        self.mult[e] = self.mult.get(e, 0) + count

    def total_edges(self) -> int:
        return sum(self.mult.values())

    def degree(self, v: int) -> int:
        return sum(m for (a, b), m in self.mult.items() if a == v or b == v)

    def neighbors(self, v: int) -> list[int]:
        out = set()
        for a, b in self.mult:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return sorted(out)

    def copy(self) -> "MultiGraph":
        return MultiGraph(self.n, dict(self.mult))

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, copies={self.total_edges()})"


class DemandSet:
    """Source-sink pairs to be connected by a schedule."""

    __slots__ = ("pairs",)

    def __init__(self, pairs: Iterable[tuple[int, int]], node_count: int | None = None):
        out = []
        for s, t in pairs:
            if s == t:
                raise ValueError(f"demand pair with equal endpoints: ({s}, {t})")
            if node_count is not None and not (0 <= s < node_count and 0 <= t < node_count):
                raise ValueError(f"demand endpoint out of range: ({s}, {t})")
            out.append((int(s), int(t)))
        self.pairs: tuple[tuple[int, int], ...] = tuple(out)

    @property
    def k(self) -> int:
        return len(self.pairs)

    def sources(self) -> list[int]:
        return sorted({s for s, _ in self.pairs})

    def node_weights(self, node_count: int) -> "NodeWeights":
        """weight(v) = number of distinct pairs containing v."""
        w = [0] * node_count
        for s, t in set(self.pairs):
            w[s] += 1
            w[t] += 1
        return NodeWeights(w)

    @classmethod
    def rooted(cls, root: int, terminals: Iterable[int]) -> "DemandSet":
        return cls([(root, t) for t in terminals if t != root])

    @classmethod
    def gossip(cls, node_count: int) -> "DemandSet":
        return cls(
            [(s, t) for s in range(node_count) for t in range(node_count) if s != t]
        )

    def __iter__(self):
        return iter(self.pairs)

    def __repr__(self) -> str:
        return f"DemandSet(k={self.k})"


class NodeWeights:
    """Nonnegative integer node weights (demand incidence counts)."""

    __slots__ = ("weight",)

    def __init__(self, weight: Sequence[int]):
        if any(w < 0 for w in weight):
            raise ValueError("weights must be nonnegative")
        self.weight: tuple[int, ...] = tuple(int(w) for w in weight)

    def __getitem__(self, v: int) -> int:
        return self.weight[v]

    def __len__(self) -> int:
        return len(self.weight)

    def total(self, nodes: Iterable[int] | None = None) -> int:
        if nodes is None:
            return sum(self.weight)
        return sum(self.weight[v] for v in nodes)

    @classmethod
    def uniform(cls, node_count: int, value: int = 1) -> "NodeWeights":
        return cls([value] * node_count)


# ---------------------------------------------------------------------------
# traversals
# ---------------------------------------------------------------------------

def bfs_distances(g: Graph, source: int, allowed: Iterable[int] | None = None) -> list[int]:
    """Hop distances from `source` within the induced subgraph on `allowed`.

    Unreachable (or disallowed) nodes get -1.
    """
    indptr, indices = g.csr()
    mask = np.ones(g.n, dtype=np.bool_)
    if allowed is not None:
        mask[:] = False
        for v in allowed:
            mask[v] = True
    src = np.array([source], dtype=np.int64)
    return [int(d) for d in _accel.bfs_dists(indptr, indices, src, mask)]


def shortest_path(g: Graph, u: int, v: int,
                  allowed: Iterable[int] | None = None) -> list[int] | None:
    """Minimum-hop u->v path, lexicographically smallest among ties.

    Returns None when u and v are in different components.
    """
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError("shortest_path endpoints out of range")
    allowed_set = None if allowed is None else set(allowed)
    if allowed_set is not None and (u not in allowed_set or v not in allowed_set):
        return None
    if u == v:
        return [u]
    dist_to_v = bfs_distances(g, v, allowed_set)
    if dist_to_v[u] < 0:
        return None
    path = [u]
    cur = u
    while cur != v:
        cur = min(
            w
            for w in g.adj[cur]
            if dist_to_v[w] == dist_to_v[cur] - 1
            and (allowed_set is None or w in allowed_set)
        )
        path.append(cur)
    return path


def connected_components(g: Graph, removed: Iterable[int] = ()) -> list[set[int]]:
    """Components of the graph minus `removed`, ordered by minimum node id."""
    removed_set = set(removed)
    indptr, indices = g.csr()
    mask = np.ones(g.n, dtype=np.bool_)
    for v in removed_set:
        mask[v] = False
    labels = _accel.component_labels(indptr, indices, mask)
    out: dict[int, set[int]] = {}
    for v in range(g.n):
        if labels[v] >= 0:
            out.setdefault(int(labels[v]), set()).add(v)
    # labels are already assigned in min-node-id order
    return [out[i] for i in sorted(out)]


def eccentricity_and_diameter(g: Graph) -> tuple[list[int], int]:
    """Exact hop eccentricities and diameter by all-sources BFS.

    Raises ValueError on a disconnected graph.
    """
    indptr, indices = g.csr()
    dists = _accel.bfs_all_dists(indptr, indices, g.n)
    if np.any(dists < 0):
        raise ValueError("eccentricity requires a connected graph")
    ecc = [int(x) for x in dists.max(axis=1)]
    return ecc, max(ecc) if ecc else 0


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

def write_graph(g: Graph) -> str:
    """Bit-exact graph format: `n m` then one `u v` line per edge, u < v."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    lines = [ln for ln in text.splitlines()]
    if not lines:
        raise GraphFormatError("empty graph file")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise GraphFormatError(f"bad header line: {lines[0]!r}") from exc
    edges = []
    for ln in lines[1 : m + 1]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"bad edge line: {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if u >= v:
            raise GraphFormatError(f"edge must satisfy u < v: {ln!r}")
        edges.append((u, v))
    if len(edges) != m:
        raise GraphFormatError(f"expected {m} edges, found {len(edges)}")
    return Graph(n, edges)


def read_multigraph(text: str) -> MultiGraph:
    """Same layout as the graph format, repeated lines add multiplicity."""
    lines = text.splitlines()
    if not lines:
        raise GraphFormatError("empty graph file")
    n, m = (int(x) for x in lines[0].split())
    mg = MultiGraph(n)
    count = 0
    for ln in lines[1 : m + 1]:
        u, v = (int(x) for x in ln.split())
        mg.add_edge(u, v)
        count += 1
    if count != m:
        raise GraphFormatError(f"expected {m} edges, found {count}")
    return mg


def write_demands(d: DemandSet) -> str:
    lines = [str(d.k)]
    lines.extend(f"{s} {t}" for s, t in d.pairs)
    return "\n".join(lines) + "\n"


def read_demands(text: str, node_count: int | None = None) -> DemandSet:
    lines = text.splitlines()
    if not lines:
        raise GraphFormatError("empty demand file")
    k = int(lines[0].split()[0])
    pairs = []
    for ln in lines[1 : k + 1]:
        s, t = (int(x) for x in ln.split())
        pairs.append((s, t))
    if len(pairs) != k:
        raise GraphFormatError(f"expected {k} pairs, found {len(pairs)}")
    return DemandSet(pairs, node_count)


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    edges = [(i, i + 1) for i in range(n - 1)]
    if n > 2:
        edges.append((0, n - 1))
    return Graph(n, edges)


def star_graph(leaves: int) -> Graph:
    """Center is node 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def grid_graph(rows: int, cols: int) -> Graph:
    """rows x cols grid; node id = r * cols + c."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)
