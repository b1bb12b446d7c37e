"""Accelerated inner kernels: numba @njit when available, pure numpy otherwise.

The backend is chosen once at import time.  Set POISECAST_NUMBA=0 to force the
numpy fallback (useful for debugging and for the benchmark comparing both).
Every kernel has two implementations with identical semantics; tests exercise
both directly regardless of the active backend.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("POISECAST_NUMBA", "1")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on numba-less installs
    numba = None
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and _FLAG != "0"

UNREACHED = np.int32(-1)


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def bfs_dists_np(indptr: np.ndarray, indices: np.ndarray, sources: np.ndarray,
                 allowed: np.ndarray) -> np.ndarray:
    """Multi-source BFS hop distances restricted to `allowed` nodes.

    Nodes outside `allowed` (and unreachable ones) get -1.
    """
    n = allowed.shape[0]
    dist = np.full(n, UNREACHED, dtype=np.int32)
    frontier = []
    for s in sources:
        if allowed[s] and dist[s] < 0:
            dist[s] = 0
            frontier.append(int(s))
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in indices[indptr[u]:indptr[u + 1]]:
                if allowed[v] and dist[v] < 0:
                    dist[v] = d
                    nxt.append(int(v))
        frontier = nxt
    return dist


def bfs_all_dists_np(indptr: np.ndarray, indices: np.ndarray, n: int) -> np.ndarray:
    allowed = np.ones(n, dtype=np.bool_)
    out = np.empty((n, n), dtype=np.int32)
    for s in range(n):
        out[s] = bfs_dists_np(indptr, indices, np.array([s], dtype=np.int64), allowed)
    return out


def component_labels_np(indptr: np.ndarray, indices: np.ndarray,
                        allowed: np.ndarray) -> np.ndarray:
    """Label connected components of the induced subgraph on `allowed`.

    Labels are assigned in increasing order of each component's minimum node
    id; removed nodes get -1.
    """
    n = allowed.shape[0]
    label = np.full(n, -1, dtype=np.int32)
    cur = 0
    for s in range(n):
        if not allowed[s] or label[s] >= 0:
            continue
        stack = [s]
        label[s] = cur
        while stack:
            u = stack.pop()
            for v in indices[indptr[u]:indptr[u + 1]]:
                if allowed[v] and label[v] < 0:
                    label[v] = cur
                    stack.append(int(v))
        cur += 1
    return label


def max_component_weight_np(indptr: np.ndarray, indices: np.ndarray,
                            allowed: np.ndarray, weight: np.ndarray) -> int:
    """Heaviest connected-component weight of the induced subgraph on `allowed`."""
    n = allowed.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    best = 0
    for s in range(n):
        if not allowed[s] or seen[s]:
            continue
        acc = 0
        stack = [s]
        seen[s] = True
        while stack:
            u = stack.pop()
            acc += int(weight[u])
            for v in indices[indptr[u]:indptr[u + 1]]:
                if allowed[v] and not seen[v]:
                    seen[v] = True
                    stack.append(int(v))
        if acc > best:
            best = acc
    return best


def simplex_iterate_np(tab: np.ndarray, basis: np.ndarray, ncols: int,
                       tol: float, max_iter: int) -> int:
    """Run Bland-rule simplex pivots on a dense tableau, in place.

    Tableau layout: rows 0..m-1 are constraints with the rhs in the last
    column; row m is the objective row (reduced costs, objective value in the
    last column, to be minimized).  `ncols` is the number of structural
    columns eligible to enter.  Returns 0 on optimal, 1 on unbounded,
    2 if max_iter was hit.
    """
    m = tab.shape[0] - 1
    for _ in range(max_iter):
        obj = tab[m, :ncols]
        enter = -1
        for j in range(ncols):  # Bland: first improving column
            if obj[j] < -tol:
                enter = j
                break
        if enter < 0:
            return 0
        col = tab[:m, enter]
        rhs = tab[:m, -1]
        leave = -1
        best = np.inf
        for i in range(m):
            if col[i] > tol:
                ratio = rhs[i] / col[i]
                if ratio < best - 1e-12 or (
                    abs(ratio - best) <= 1e-12
                    and (leave < 0 or basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return 1
        piv = tab[leave, enter]
        tab[leave, :] /= piv
        col_vals = tab[:, enter].copy()
        col_vals[leave] = 0.0
        tab -= np.outer(col_vals, tab[leave, :])
        tab[:, enter] = 0.0
        tab[leave, enter] = 1.0
        basis[leave] = enter
    return 2


# ---------------------------------------------------------------------------
# numba variants
# ---------------------------------------------------------------------------

if HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def bfs_dists_nb(indptr, indices, sources, allowed):  # pragma: no cover - jit
        n = allowed.shape[0]
        dist = np.full(n, -1, dtype=np.int32)
        queue = np.empty(n, dtype=np.int64)
        head = 0
        tail = 0
        for k in range(sources.shape[0]):
            s = sources[k]
            if allowed[s] and dist[s] < 0:
                dist[s] = 0
                queue[tail] = s
                tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if allowed[v] and dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue[tail] = v
                    tail += 1
        return dist

    @njit(cache=True)
    def bfs_all_dists_nb(indptr, indices, n):  # pragma: no cover - jit
        out = np.empty((n, n), dtype=np.int32)
        allowed = np.ones(n, dtype=np.bool_)
        src = np.empty(1, dtype=np.int64)
        for s in range(n):
            src[0] = s
            out[s] = bfs_dists_nb(indptr, indices, src, allowed)
        return out

    @njit(cache=True)
    def component_labels_nb(indptr, indices, allowed):  # pragma: no cover - jit
        n = allowed.shape[0]
        label = np.full(n, -1, dtype=np.int32)
        stack = np.empty(n, dtype=np.int64)
        cur = 0
        for s in range(n):
            if (not allowed[s]) or label[s] >= 0:
                continue
            top = 0
            stack[top] = s
            top += 1
            label[s] = cur
            while top > 0:
                top -= 1
                u = stack[top]
                for p in range(indptr[u], indptr[u + 1]):
                    v = indices[p]
                    if allowed[v] and label[v] < 0:
                        label[v] = cur
                        stack[top] = v
                        top += 1
            cur += 1
        return label

    @njit(cache=True)
    def max_component_weight_nb(indptr, indices, allowed, weight):  # pragma: no cover
        n = allowed.shape[0]
        seen = np.zeros(n, dtype=np.bool_)
        stack = np.empty(n, dtype=np.int64)
        best = 0
        for s in range(n):
            if (not allowed[s]) or seen[s]:
                continue
            acc = 0
            top = 0
            stack[top] = s
            top += 1
            seen[s] = True
            while top > 0:
                top -= 1
                u = stack[top]
                acc += weight[u]
                for p in range(indptr[u], indptr[u + 1]):
                    v = indices[p]
                    if allowed[v] and not seen[v]:
                        seen[v] = True
                        stack[top] = v
                        top += 1
            if acc > best:
                best = acc
        return best

    @njit(cache=True)
    def simplex_iterate_nb(tab, basis, ncols, tol, max_iter):  # pragma: no cover
        m = tab.shape[0] - 1
        w = tab.shape[1]
        for _ in range(max_iter):
            enter = -1
            for j in range(ncols):
                if tab[m, j] < -tol:
                    enter = j
                    break
            if enter < 0:
                return 0
            leave = -1
            best = np.inf
            for i in range(m):
                if tab[i, enter] > tol:
                    ratio = tab[i, w - 1] / tab[i, enter]
                    if ratio < best - 1e-12 or (
                        abs(ratio - best) <= 1e-12
                        and (leave < 0 or basis[i] < basis[leave])
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return 1
            piv = tab[leave, enter]
            for j in range(w):
                tab[leave, j] /= piv
            for i in range(m + 1):
                if i == leave:
                    continue
                f = tab[i, enter]
                if f != 0.0:
                    for j in range(w):
                        tab[i, j] -= f * tab[leave, j]
            for i in range(m + 1):
                tab[i, enter] = 0.0
            tab[leave, enter] = 1.0
            basis[leave] = enter
        return 2


if NUMBA_ENABLED:
    bfs_dists = bfs_dists_nb
    bfs_all_dists = bfs_all_dists_nb
    component_labels = component_labels_nb
    max_component_weight = max_component_weight_nb
    simplex_iterate = simplex_iterate_nb
else:
    bfs_dists = bfs_dists_np
    bfs_all_dists = bfs_all_dists_np
    component_labels = component_labels_np
    max_component_weight = max_component_weight_np
    simplex_iterate = simplex_iterate_np


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
