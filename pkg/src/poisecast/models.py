"""Telephone and radio communication semantics.

Telephone: each round is a matching of graph edges; a call exchanges every
message both endpoints hold.  Radio: each round is a transmitter set; a node
receives the union of a neighbor's messages only when exactly one of its
neighbors transmits.  A radio node may transmit and receive in the same round
(reception depends only on its own neighborhood).

Message ids are originating node ids throughout, which makes gossip and
demand checking share one possession representation.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .graphs import DemandSet, Graph


class InvalidSchedule(ValueError):
    """Round violates the model: non-matching, non-edge, or bad node id."""


class PossessionState:
    """Which messages each node holds, as per-node bitmasks over message ids."""

    __slots__ = ("masks",)

    def __init__(self, masks: Sequence[int]):
        self.masks: tuple[int, ...] = tuple(masks)

    @classmethod
    def empty(cls, node_count: int) -> "PossessionState":
        return cls([0] * node_count)

    @classmethod
    def originators(cls, node_count: int) -> "PossessionState":
        """Every node starts holding its own message (gossip start)."""
        return cls([1 << v for v in range(node_count)])

    @classmethod
    def for_demands(cls, node_count: int, demands: DemandSet) -> "PossessionState":
        masks = [0] * node_count
        for s, _ in demands:
            masks[s] |= 1 << s
        return cls(masks)

    @property
    def n(self) -> int:
        return len(self.masks)

    def holds(self, v: int) -> frozenset[int]:
        mask = self.masks[v]
        return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)

    def has(self, v: int, message: int) -> bool:
        return bool(self.masks[v] >> message & 1)

    def dominates(self, other: "PossessionState") -> bool:
        return all(a & b == b for a, b in zip(self.masks, other.masks))

    def __eq__(self, other) -> bool:
        return isinstance(other, PossessionState) and self.masks == other.masks

    def __hash__(self) -> int:
        return hash(self.masks)


class TelephoneSchedule:
    """Ordered rounds, each a set of disjoint node pairs (edges of G)."""

    __slots__ = ("rounds",)

    def __init__(self, rounds: Iterable[Iterable[tuple[int, int]]]):
        norm = []
        for rnd in rounds:
            pairs = tuple(sorted((min(u, v), max(u, v)) for u, v in rnd))
            norm.append(pairs)
        self.rounds: tuple[tuple[tuple[int, int], ...], ...] = tuple(norm)

    def __len__(self) -> int:
        return len(self.rounds)

    def validate(self, g: Graph) -> None:
        edge_set = set(g.edges)
        for i, rnd in enumerate(self.rounds):
            busy: set[int] = set()
            for u, v in rnd:
                if (u, v) not in edge_set:
                    raise InvalidSchedule(f"round {i}: ({u}, {v}) is not an edge")
                if u in busy or v in busy:
                    raise InvalidSchedule(f"round {i}: node in two calls")
                busy.add(u)
                busy.add(v)

    def concat(self, other: "TelephoneSchedule") -> "TelephoneSchedule":
        return TelephoneSchedule(self.rounds + other.rounds)

    @staticmethod
    def merge_parallel(parts: Sequence["TelephoneSchedule"]) -> "TelephoneSchedule":
        """Zip schedules round-by-round; parts must touch disjoint node sets."""
        depth = max((len(p) for p in parts), default=0)
        rounds = []
        for i in range(depth):
            merged: list[tuple[int, int]] = []
            busy: set[int] = set()
            for p in parts:
                if i < len(p.rounds):
                    for u, v in p.rounds[i]:
                        if u in busy or v in busy:
                            raise InvalidSchedule(
                                "parallel schedules share a node"
                            )
                        busy.add(u)
                        busy.add(v)
                        merged.append((u, v))
            rounds.append(merged)
        return TelephoneSchedule(rounds)

    def to_text(self) -> str:
        lines = [" ".join(f"{u}-{v}" for u, v in rnd) for rnd in self.rounds]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> "TelephoneSchedule":
        rounds = []
        for ln in text.splitlines():
            pairs = []
            for tok in ln.split():
                u, _, v = tok.partition("-")
                pairs.append((int(u), int(v)))
            rounds.append(pairs)
        return cls(rounds)


class RadioSchedule:
    """Ordered rounds, each a set of transmitting nodes."""

    __slots__ = ("rounds",)

    def __init__(self, rounds: Iterable[Iterable[int]]):
        self.rounds: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(set(r))) for r in rounds
        )

    def __len__(self) -> int:
        return len(self.rounds)

    def validate(self, g: Graph) -> None:
        for i, rnd in enumerate(self.rounds):
            for v in rnd:
                if not 0 <= v < g.n:
                    raise InvalidSchedule(f"round {i}: unknown node {v}")

    def concat(self, other: "RadioSchedule") -> "RadioSchedule":
        return RadioSchedule(self.rounds + other.rounds)

    def to_text(self) -> str:
        lines = [" ".join(str(v) for v in rnd) for rnd in self.rounds]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> "RadioSchedule":
        return cls([[int(tok) for tok in ln.split()] for ln in text.splitlines()])


def simulate_telephone(g: Graph, init: PossessionState,
                       sched: TelephoneSchedule) -> PossessionState:
    """Run the matching rounds; both call endpoints end with the union."""
    sched.validate(g)
    masks = list(init.masks)
    for rnd in sched.rounds:
        for u, v in rnd:
            merged = masks[u] | masks[v]
            masks[u] = merged
            masks[v] = merged
    return PossessionState(masks)


def simulate_radio(g: Graph, init: PossessionState,
                   sched: RadioSchedule) -> PossessionState:
    """Run the transmitter rounds under the unique-broadcasting-neighbor rule."""
    sched.validate(g)
    masks = list(init.masks)
    for rnd in sched.rounds:
        tx = set(rnd)
        gains: list[tuple[int, int]] = []
        for w in range(g.n):
            sender = -1
            count = 0
            for x in g.adj[w]:
                if x in tx:
                    count += 1
                    sender = x
                    if count > 1:
                        break
            if count == 1:
                gains.append((w, masks[sender]))
        for w, add in gains:
            masks[w] |= add
    return PossessionState(masks)


def check_demands_met(final: PossessionState,
                      demands: DemandSet) -> tuple[bool, list[tuple[int, int]]]:
    """True when every sink holds its source's message; lists unmet pairs."""
    unmet = [(s, t) for s, t in demands if not final.has(t, s)]
    return (not unmet, unmet)
