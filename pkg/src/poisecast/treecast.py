"""Telephone schedules on trees and paths.

Broadcast on a tree uses the classic bottom-up completion-time rule (serve
children in decreasing completion time), which is optimal on trees; gathering
is the same schedule reversed.  The path shuttle alternates the even and odd
matchings of a path, which saturates possession along it in 2*len rounds.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .models import TelephoneSchedule


class NotATree(ValueError):
    """Edge set is not a tree containing the requested root."""


def _tree_adj(edges: Iterable[tuple[int, int]], root: int) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {root: []}
    seen = set()
    for u, v in edges:
        if u == v:
            raise NotATree(f"self-loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise NotATree(f"repeated edge {key}")
        seen.add(key)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if len(seen) != len(adj) - 1:
        raise NotATree("edge count is not node count minus one")
    # connectivity check doubles as cycle detection given the count above
    stack, visited = [root], {root}
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in visited:
                visited.add(v)
                stack.append(v)
    if len(visited) != len(adj):
        raise NotATree("edges do not form one tree containing the root")
    for v in adj:
        adj[v].sort()
    return adj


def broadcast_length(edges: Iterable[tuple[int, int]], root: int) -> int:
    """Optimal number of rounds to inform the whole tree from `root`."""
    return len(tree_broadcast_schedule(edges, root))


def tree_broadcast_schedule(edges: Iterable[tuple[int, int]],
                            root: int) -> TelephoneSchedule:
    """Optimal tree broadcast: each informed node calls its children in
    decreasing order of subtree completion time."""
    edges = list(edges)
    adj = _tree_adj(edges, root)

    children: dict[int, list[int]] = {}
    order = []
    stack = [(root, -1)]
    while stack:
        u, parent = stack.pop()
        kids = [w for w in adj[u] if w != parent]
        children[u] = kids
        order.append(u)
        for w in kids:
            stack.append((w, u))

    complete: dict[int, int] = {}
    for u in reversed(order):
        kids = sorted(children[u], key=lambda w: (-complete[w], w))
        children[u] = kids
        complete[u] = max(
            (j + 1 + complete[w] for j, w in enumerate(kids)), default=0
        )

    total = complete[root]
    rounds: list[list[tuple[int, int]]] = [[] for _ in range(total)]
    inform = {root: 0}
    queue = [root]
    while queue:
        u = queue.pop(0)
        for j, w in enumerate(children[u]):
            t = inform[u] + j + 1
            inform[w] = t
            rounds[t - 1].append((u, w))
            queue.append(w)
    return TelephoneSchedule(rounds)


def tree_gather_schedule(edges: Iterable[tuple[int, int]],
                         root: int) -> TelephoneSchedule:
    """Reverse of the broadcast rounds; collects every tree message at root."""
    fwd = tree_broadcast_schedule(edges, root)
    return TelephoneSchedule(list(reversed(fwd.rounds)))


def path_shuttle_schedule(path: Sequence[int], rounds: int) -> TelephoneSchedule:
    """Alternate the even matching {(p0,p1),(p2,p3),..} and the odd one."""
    if rounds < 0:
        raise ValueError("rounds must be nonnegative")
    even = [(path[i], path[i + 1]) for i in range(0, len(path) - 1, 2)]
    odd = [(path[i], path[i + 1]) for i in range(1, len(path) - 1, 2)]
    if not odd:
        odd = even  # two-node path: the single matching just repeats
    return TelephoneSchedule([even if r % 2 == 0 else odd for r in range(rounds)])


def path_relay_schedule(path: Sequence[int]) -> TelephoneSchedule:
    """One call per round moving a message from path[0] to path[-1]."""
    return TelephoneSchedule(
        [[(path[i], path[i + 1])] for i in range(len(path) - 1)]
    )
