"""Compact edge-flow form of the poise LP and its path decomposition.

Variables: x(e) in [0,1] per edge, a unit s_i -> t_i flow per demand pair
(two arcs per edge), and scalar budgets L1 (degree) and L2 (length).
Objective: minimize L1 + L2.  Total flow mass stands in for the per-path
length sum, which matches the path formulation by flow decomposition.

Undirected capacity is enforced jointly on the two arcs of an edge so the
pair cannot use 2*x(e) worth of capacity.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from . import simplex
from .graphs import DemandSet, Graph, bfs_distances

FEAS_TOL = 1e-9


class InfeasiblePair(Exception):
    """A demand pair is disconnected in the input graph."""


class DecompositionResidue(Exception):
    """Flow left over after path extraction and cycle removal exceeds tolerance."""


class PoiseLP:
    """Compact LP instance with a deterministic variable ordering.

    Layout: x(e) for edges in sorted order, then per pair i the arc flows
    (u->v, v->u) per edge, then L1 and L2.
    """

    def __init__(self, g: Graph, demands: DemandSet):
        for s, t in demands:
            if bfs_distances(g, s)[t] < 0:
                raise InfeasiblePair(f"pair ({s}, {t}) is disconnected")
        self.g = g
        self.pairs = demands.pairs
        self.m = g.m
        self.k = len(self.pairs)
        self.nvar = self.m + 2 * self.m * self.k + 2
        self._mats = None

    # variable index helpers
    def xi(self, e_idx: int) -> int:
        return e_idx

    def fi(self, pair: int, e_idx: int, backward: bool) -> int:
        return self.m + pair * 2 * self.m + 2 * e_idx + (1 if backward else 0)

    @property
    def l1_idx(self) -> int:
        return self.nvar - 2

    @property
    def l2_idx(self) -> int:
        return self.nvar - 1

    def matrices(self):
        """(c, A_ub, b_ub, A_eq, b_eq) with x(e) <= 1 left to variable bounds."""
        if self._mats is not None:
            return self._mats
        g, m, k = self.g, self.m, self.k
        c = np.zeros(self.nvar)
        c[self.l1_idx] = 1.0
        c[self.l2_idx] = 1.0

        ub_rows: list[tuple[list[int], list[float]]] = []
        # degree: sum_{e in delta(v)} x(e) - L1 <= 0
        incident: list[list[int]] = [[] for _ in range(g.n)]
        for e_idx, (u, v) in enumerate(g.edges):
            incident[u].append(e_idx)
            incident[v].append(e_idx)
        for v in range(g.n):
            cols = [self.xi(e) for e in incident[v]] + [self.l1_idx]
            vals = [1.0] * len(incident[v]) + [-1.0]
            ub_rows.append((cols, vals))
        # joint arc capacity: f_i(uv) + f_i(vu) - x(e) <= 0
        for i in range(k):
            for e_idx in range(m):
                cols = [self.fi(i, e_idx, False), self.fi(i, e_idx, True), self.xi(e_idx)]
                ub_rows.append((cols, [1.0, 1.0, -1.0]))
        # length: total flow mass - L2 <= 0
        for i in range(k):
            cols = [self.fi(i, e, d) for e in range(m) for d in (False, True)]
            cols.append(self.l2_idx)
            ub_rows.append((cols, [1.0] * (2 * m) + [-1.0]))

        eq_rows: list[tuple[list[int], list[float], float]] = []
        # conservation: out - in = +1 at source, -1 at sink, 0 elsewhere
        for i, (s, t) in enumerate(self.pairs):
            per_node: list[tuple[list[int], list[float]]] = [
                ([], []) for _ in range(g.n)
            ]
            for e_idx, (u, v) in enumerate(g.edges):
                fwd, bwd = self.fi(i, e_idx, False), self.fi(i, e_idx, True)
                per_node[u][0].extend([fwd, bwd])
                per_node[u][1].extend([1.0, -1.0])
                per_node[v][0].extend([fwd, bwd])
                per_node[v][1].extend([-1.0, 1.0])
            for v in range(g.n):
                rhs = 1.0 if v == s else (-1.0 if v == t else 0.0)
                eq_rows.append((per_node[v][0], per_node[v][1], rhs))

        def build(rows):
            data, ri, ci = [], [], []
            for r, (cols, vals, *_rest) in enumerate(rows):
                ri.extend([r] * len(cols))
                ci.extend(cols)
                data.extend(vals)
            return sp.csr_matrix(
                (data, (ri, ci)), shape=(len(rows), self.nvar), dtype=np.float64
            )

        a_ub = build(ub_rows)
        b_ub = np.zeros(len(ub_rows))
        a_eq = build(eq_rows)
        b_eq = np.array([r[2] for r in eq_rows])
        self._mats = (c, a_ub, b_ub, a_eq, b_eq)
        return self._mats

    def var_name(self, j: int) -> str:
        if j < self.m:
            u, v = self.g.edges[j]
            return f"x_{u}_{v}"
        if j == self.l1_idx:
            return "L1"
        if j == self.l2_idx:
            return "L2"
        off = j - self.m
        i, rest = divmod(off, 2 * self.m)
        e_idx, backward = divmod(rest, 2)
        u, v = self.g.edges[e_idx]
        return f"f_{i}_{v}_{u}" if backward else f"f_{i}_{u}_{v}"

    def dump(self) -> str:
        """LP text interchange format: objective, constraints, bounds."""
        c, a_ub, b_ub, a_eq, b_eq = self.matrices()

        def expr(row) -> str:
            terms = []
            for j, val in zip(row.indices, row.data):
                name = self.var_name(j)
                if val == 1.0:
                    terms.append(f"+ {name}")
                elif val == -1.0:
                    terms.append(f"- {name}")
                else:
                    terms.append(f"{'+' if val >= 0 else '-'} {abs(val):g} {name}")
            text = " ".join(terms)
            return text[2:] if text.startswith("+ ") else text

        n_deg = self.g.n
        n_cap = self.k * self.m
        names = [f"deg_{v}" for v in range(n_deg)]
        names += [
            f"cap_{i}_{u}_{v}"
            for i in range(self.k)
            for (u, v) in self.g.edges
        ]
        names += [f"len_{i}" for i in range(self.k)]
        assert len(names) == a_ub.shape[0]
        lines = [f"\\ poise LP: n={self.g.n} m={self.m} k={self.k}"]
        lines.append("Minimize")
        lines.append(" obj: L1 + L2")
        lines.append("Subject To")
        for r in range(a_ub.shape[0]):
            lines.append(f" {names[r]}: {expr(a_ub.getrow(r))} <= {b_ub[r]:g}")
        for r in range(a_eq.shape[0]):
            i, v = divmod(r, self.g.n)
            lines.append(f" cons_{i}_{v}: {expr(a_eq.getrow(r))} = {b_eq[r]:g}")
        lines.append("Bounds")
        for e_idx in range(self.m):
            lines.append(f" 0 <= {self.var_name(e_idx)} <= 1")
        lines.append("End")
        return "\n".join(lines) + "\n"


class PoiseFractional:
    """Solved LP: value, edge mass, and per-pair weighted path decomposition."""

    def __init__(self, pairs: Sequence[tuple[int, int]], value: float, l1: float,
                 l2: float, x: dict[tuple[int, int], float],
                 decomposition: dict[int, list[tuple[tuple[int, ...], float]]]):
        self.pairs = tuple(pairs)
        self.value = value
        self.l1 = l1
        self.l2 = l2
        self.x = dict(x)
        self.decomposition = {i: list(ps) for i, ps in decomposition.items()}

    def paths_for(self, pair_idx: int) -> list[tuple[tuple[int, ...], float]]:
        return self.decomposition.get(pair_idx, [])

    def check_invariants(self, tol: float = FEAS_TOL) -> None:
        for i in range(len(self.pairs)):
            paths = self.paths_for(i)
            total = sum(w for _, w in paths)
            if abs(total - 1.0) > tol:
                raise AssertionError(f"pair {i}: weights sum to {total}")
            mass = sum((len(p) - 1) * w for p, w in paths)
            if mass > self.l2 + tol:
                raise AssertionError(f"pair {i}: length mass {mass} > L2={self.l2}")
            per_edge: dict[tuple[int, int], float] = {}
            for p, w in paths:
                for a, b in zip(p, p[1:]):
                    e = (a, b) if a < b else (b, a)
                    per_edge[e] = per_edge.get(e, 0.0) + w
            for e, used in per_edge.items():
                if used > self.x.get(e, 0.0) + tol:
                    raise AssertionError(f"pair {i}: edge {e} over capacity")


def build_poise_lp(g: Graph, demands: DemandSet) -> PoiseLP:
    return PoiseLP(g, demands)


def _dense_solve(lp: PoiseLP):
    c, a_ub, b_ub, a_eq, b_eq = lp.matrices()
    a_ub_d = a_ub.toarray()
    # x(e) <= 1 becomes explicit rows for the dense engine
    extra = np.zeros((lp.m, lp.nvar))
    for e in range(lp.m):
        extra[e, e] = 1.0
    a_ub_d = np.vstack([a_ub_d, extra])
    b_ub_d = np.concatenate([b_ub, np.ones(lp.m)])
    x, val = simplex.solve_dense(c, a_ub_d, b_ub_d, a_eq.toarray(), b_eq)
    return x, val


def _highs_solve(lp: PoiseLP):
    c, a_ub, b_ub, a_eq, b_eq = lp.matrices()
    bounds = [(0.0, 1.0)] * lp.m + [(0.0, None)] * (lp.nvar - lp.m)
    res = linprog(
        c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds,
        method="highs",
    )
    if res.status == 2:
        raise InfeasiblePair("LP reported infeasible")
    if not res.success:
        raise RuntimeError(f"LP solver failure: {res.message}")
    return res.x, float(res.fun)


def solve_lp(lp: PoiseLP, engine: str = "highs") -> PoiseFractional:
    """Solve to optimality (abs tol 1e-7) and decompose flows into paths."""
    if engine == "dense":
        xvec, value = _dense_solve(lp)
    elif engine == "highs":
        xvec, value = _highs_solve(lp)
    else:
        raise ValueError(f"unknown LP engine: {engine}")
    xvec = np.where(np.abs(xvec) < FEAS_TOL, 0.0, xvec)
    x_edges = {
        e: float(min(1.0, max(0.0, xvec[lp.xi(idx)])))
        for idx, e in enumerate(lp.g.edges)
    }
    flows = {}
    for i in range(lp.k):
        arcs: dict[tuple[int, int], float] = {}
        for e_idx, (u, v) in enumerate(lp.g.edges):
            fwd = float(xvec[lp.fi(i, e_idx, False)])
            bwd = float(xvec[lp.fi(i, e_idx, True)])
            # cancel opposed flow; it is an artifact two-cycle
            both = min(fwd, bwd)
            fwd -= both
            bwd -= both
            if fwd > FEAS_TOL:
                arcs[(u, v)] = fwd
            if bwd > FEAS_TOL:
                arcs[(v, u)] = bwd
        flows[i] = arcs
    decomposition = decompose_flows(lp, flows)
    l1 = float(xvec[lp.l1_idx])
    l2 = float(xvec[lp.l2_idx])
    return PoiseFractional(lp.pairs, float(value), l1, l2, x_edges, decomposition)


def decompose_flows(lp: PoiseLP,
                    flows: dict[int, dict[tuple[int, int], float]]
                    ) -> dict[int, list[tuple[tuple[int, ...], float]]]:
    """Standard path decomposition per pair; leftover circulation is dropped.

    Raises DecompositionResidue if the extracted s->t value misses 1 by more
    than the feasibility tolerance.
    """
    out: dict[int, list[tuple[tuple[int, ...], float]]] = {}
    for i, (s, t) in enumerate(lp.pairs):
        arcs = dict(flows.get(i, {}))
        paths: list[tuple[tuple[int, ...], float]] = []
        total = 0.0
        while True:
            path = _positive_flow_path(lp.g, arcs, s, t)
            if path is None:
                break
            w = min(arcs[(a, b)] for a, b in zip(path, path[1:]))
            for a, b in zip(path, path[1:]):
                arcs[(a, b)] -= w
                if arcs[(a, b)] <= FEAS_TOL:
                    del arcs[(a, b)]
            paths.append((tuple(path), w))
            total += w
        if abs(total - 1.0) > 1e-6:
            raise DecompositionResidue(
                f"pair {i}: decomposed {total:.12f} of unit flow"
            )
        # renormalize away solver dust so weights sum to exactly 1
        paths = [(p, w / total) for p, w in paths]
        out[i] = paths
    return out


def _positive_flow_path(g: Graph, arcs: dict[tuple[int, int], float],
                        s: int, t: int) -> list[int] | None:
    """Fewest-hop s->t path through positive arcs, smallest-id tie-break."""
    succ: dict[int, list[int]] = {}
    for (a, b) in arcs:
        succ.setdefault(a, []).append(b)
    for a in succ:
        succ[a].sort()
    parent = {s: -1}
    frontier = [s]
    while frontier and t not in parent:
        nxt = []
        for u in frontier:
            for v in succ.get(u, ()):  # BFS layer by layer, ids ascending
                if v not in parent:
                    parent[v] = u
                    nxt.append(v)
        frontier = nxt
    if t not in parent:
        return None
    path = [t]
    while path[-1] != s:
        path.append(parent[path[-1]])
    path.reverse()
    return path
