"""Exhaustive schedule-length oracles for desk-scale instances.

Breadth-first search over possession states, one layer per round, with exact
deduplication and Pareto dominance pruning (a state that holds pointwise more
messages can never be worse).  Telephone rounds range over maximal matchings,
which is lossless because possession is monotone; radio rounds range over all
nonempty transmitter subsets, which interference makes genuinely necessary.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Sequence

from .graphs import DemandSet, Graph
from .models import RadioSchedule, TelephoneSchedule


class OracleExceeded(RuntimeError):
    """Search hit the round bound or the state budget."""


class OracleResult:
    def __init__(self, length: int, schedule, states_explored: int):
        self.length = length
        self.schedule = schedule
        self.states_explored = states_explored


def _message_index(demands: DemandSet) -> dict[int, int]:
    return {s: i for i, s in enumerate(demands.sources())}


def _initial_masks(n: int, demands: DemandSet,
                   msg_idx: dict[int, int]) -> tuple[int, ...]:
    masks = [0] * n
    for s, _t in demands:
        masks[s] |= 1 << msg_idx[s]
    return tuple(masks)


def _prune_dominated(states: dict) -> dict:
    order = sorted(states, key=lambda st: (-sum(m.bit_count() for m in st), st))
    kept: list[tuple[int, ...]] = []
    out = {}
    for st in order:
        if any(all(a & b == b for a, b in zip(win, st)) for win in kept):
            continue
        kept.append(st)
        out[st] = states[st]
    return out


def _search(start: tuple[int, ...], done: Callable,
            expand: Callable, max_rounds: int, state_budget: int,
            what: str) -> tuple[int, list, int]:
    if done(start):
        return 0, [], 1
    explored = 1
    generations: list[dict] = []  # round r: state -> (state at r-1, action)
    frontier: Iterable[tuple[int, ...]] = (start,)
    seen = {start}
    for rnd in range(1, max_rounds + 1):
        gen: dict = {}
        for masks in frontier:
            for action, key in expand(masks):
                if key in seen or key in gen:
                    continue
                gen[key] = (masks, action)
                explored += 1
                if explored > state_budget:
                    raise OracleExceeded(f"{what} oracle state budget hit")
                if done(key):
                    generations.append(gen)
                    return rnd, _trace(generations, key), explored
        gen = _prune_dominated(gen)
        generations.append(gen)
        seen |= set(gen)
        frontier = tuple(gen)
        if not frontier:
            break
    raise OracleExceeded(f"no {what} schedule within {max_rounds} rounds")


def _trace(generations: list[dict], final: tuple[int, ...]) -> list:
    actions = []
    state = final
    for gen in reversed(generations):
        state, action = gen[state]
        actions.append(action)
    actions.reverse()
    return actions


def _maximal_matchings(g: Graph) -> list[tuple[tuple[int, int], ...]]:
    edges = g.edges
    out: list[tuple[tuple[int, int], ...]] = []

    def rec(idx: int, used: int, cur: list[tuple[int, int]]) -> None:
        if idx == len(edges):
            for u, v in edges:
                if not (used >> u & 1) and not (used >> v & 1):
                    return  # extendable, hence not maximal
            out.append(tuple(cur))
            return
        u, v = edges[idx]
        if not (used >> u & 1) and not (used >> v & 1):
            cur.append((u, v))
            rec(idx + 1, used | 1 << u | 1 << v, cur)
            cur.pop()
        rec(idx + 1, used, cur)

    rec(0, 0, [])
    return out


def brute_force_telephone(g: Graph, demands: DemandSet, max_rounds: int,
                          state_budget: int = 2_000_000) -> OracleResult:
    """Exact minimum telephone schedule length, with a witness schedule."""
    msg_idx = _message_index(demands)
    start = _initial_masks(g.n, demands, msg_idx)
    wanted = [(t, 1 << msg_idx[s]) for s, t in sorted(set(demands.pairs))]
    matchings = _maximal_matchings(g)

    def done(masks: Sequence[int]) -> bool:
        return all(masks[t] & bit for t, bit in wanted)

    def expand(masks: tuple[int, ...]):
        for matching in matchings:
            new = list(masks)
            for u, v in matching:
                merged = new[u] | new[v]
                new[u] = merged
                new[v] = merged
            yield matching, tuple(new)

    length, actions, explored = _search(
        start, done, expand, max_rounds, state_budget, "telephone"
    )
    return OracleResult(length, TelephoneSchedule(actions), explored)


def brute_force_radio(g: Graph, demands: DemandSet, max_rounds: int,
                      state_budget: int = 2_000_000,
                      rx_while_tx: bool = True) -> OracleResult:
    """Exact minimum radio schedule length, with a witness schedule.

    rx_while_tx selects whether a transmitter can also receive in the same
    round; both semantics are exposed so the two can be compared.
    """
    msg_idx = _message_index(demands)
    start = _initial_masks(g.n, demands, msg_idx)
    wanted = [(t, 1 << msg_idx[s]) for s, t in sorted(set(demands.pairs))]
    subsets = [
        tuple(v for v in range(g.n) if tx >> v & 1)
        for tx in range(1, 1 << g.n)
    ]

    def done(masks: Sequence[int]) -> bool:
        return all(masks[t] & bit for t, bit in wanted)

    def expand(masks: tuple[int, ...]):
        for tx in subsets:
            txset = set(tx)
            new = list(masks)
            for w in range(g.n):
                if not rx_while_tx and w in txset:
                    continue
                sender = -1
                hits = 0
                for x in g.adj[w]:
                    if x in txset:
                        hits += 1
                        sender = x
                        if hits > 1:
                            break
                if hits == 1:
                    new[w] |= masks[sender]
            key = tuple(new)
            if key != masks:
                yield tx, key

    length, actions, explored = _search(
        start, done, expand, max_rounds, state_budget, "radio"
    )
    return OracleResult(length, RadioSchedule(actions), explored)


def min_poise_tree(g: Graph, root: int, terminals: Iterable[int]) -> int:
    """Exhaustive minimum poise over all trees spanning root + terminals.

    Enumerates edge subsets, so only sensible for small sparse graphs
    (roughly n <= 10, m <= 16).
    """
    need = set(terminals) | {root}
    best = None
    edges = g.edges
    for size in range(len(need) - 1, g.n):
        for subset in itertools.combinations(range(len(edges)), size):
            nodes: set[int] = set()
            for idx in subset:
                u, v = edges[idx]
                nodes.add(u)
                nodes.add(v)
            if len(nodes) != size + 1 or not need <= nodes:
                continue  # either has a cycle or misses a required node
            adj = {v: [] for v in nodes}
            for idx in subset:
                u, v = edges[idx]
                adj[u].append(v)
                adj[v].append(u)
            start = next(iter(nodes))
            seen = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(nodes):
                continue
            diameter = 0
            for s in nodes:
                dist = {s: 0}
                queue = [s]
                while queue:
                    u = queue.pop(0)
                    for w in adj[u]:
                        if w not in dist:
                            dist[w] = dist[u] + 1
                            queue.append(w)
                diameter = max(diameter, max(dist.values()))
            poise = diameter + max(len(a) for a in adj.values())
            if best is None or poise < best:
                best = poise
    if best is None:
        raise ValueError("no tree spans the root and terminals")
    return best
