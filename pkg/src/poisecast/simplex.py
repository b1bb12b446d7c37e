"""Self-contained dense two-phase simplex with Bland's rule.

Solves min c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0.
Bland's rule makes the pivot sequence deterministic and cycle-free; the
tableau loop runs through the accelerated kernel (numba or numpy).

This engine exists for reproducible desk-scale solves and as a cross-check
against the sparse HiGHS path used for larger instances.
"""

from __future__ import annotations

import numpy as np

from . import _accel


class LPInfeasible(Exception):
    pass


class LPUnbounded(Exception):
    pass


def solve_dense(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None,
                tol: float = 1e-9, max_iter: int = 200_000):
    """Returns (x, objective_value) at a basic optimal solution."""
    c = np.asarray(c, dtype=np.float64)
    nvar = c.shape[0]
    rows = []
    rhs = []
    kinds = []  # "ub" gets a slack, "eq" gets only an artificial
    if a_ub is not None:
        a_ub = np.asarray(a_ub, dtype=np.float64)
        b_ub = np.asarray(b_ub, dtype=np.float64)
        for i in range(a_ub.shape[0]):
            rows.append(a_ub[i])
            rhs.append(b_ub[i])
            kinds.append("ub")
    if a_eq is not None:
        a_eq = np.asarray(a_eq, dtype=np.float64)
        b_eq = np.asarray(b_eq, dtype=np.float64)
        for i in range(a_eq.shape[0]):
            rows.append(a_eq[i])
            rhs.append(b_eq[i])
            kinds.append("eq")
    m = len(rows)
    if m == 0:
        if np.any(c < -tol):
            raise LPUnbounded("no constraints and negative cost")
        return np.zeros(nvar), 0.0

    nslack = sum(1 for k in kinds if k == "ub")
    ncols = nvar + nslack
    # full tableau: structural + slack + artificial + rhs; final row = objective
    tab = np.zeros((m + 1, ncols + m + 1), dtype=np.float64)
    basis = np.empty(m, dtype=np.int64)
    s = 0
    for i in range(m):
        row = rows[i]
        b = rhs[i]
        sign = 1.0
        if b < 0:
            sign = -1.0
            b = -b
        tab[i, :nvar] = sign * row
        tab[i, -1] = b
        if kinds[i] == "ub":
            tab[i, nvar + s] = sign
            s += 1
        art = ncols + i
        tab[i, art] = 1.0
        basis[i] = art

    # phase 1: minimize sum of artificials
    tab[m, ncols : ncols + m] = 1.0
    for i in range(m):
        tab[m, :] -= tab[i, :]
    status = _accel.simplex_iterate(tab, basis, ncols + m, tol, max_iter)
    if status == 2:
        raise LPInfeasible("phase-1 iteration limit hit")
    if tab[m, -1] < -1e-7:
        raise LPInfeasible(f"phase-1 optimum {-tab[m, -1]:.3g} > 0")

    # drive leftover artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= ncols:
            pivot_col = -1
            for j in range(ncols):
                if abs(tab[i, j]) > tol:
                    pivot_col = j
                    break
            if pivot_col < 0:
                continue  # redundant row
            piv = tab[i, pivot_col]
            tab[i, :] /= piv
            for r in range(m + 1):
                if r != i and abs(tab[r, pivot_col]) > 0:
                    tab[r, :] -= tab[r, pivot_col] * tab[i, :]
            basis[i] = pivot_col

    # phase 2: original objective over structural + slack columns
    tab[:, ncols : ncols + m] = 0.0  # artificials locked out
    tab[m, :] = 0.0
    tab[m, :nvar] = c
    for i in range(m):
        bj = basis[i]
        if bj < ncols and abs(tab[m, bj]) > 0:
            tab[m, :] -= tab[m, bj] * tab[i, :]
    status = _accel.simplex_iterate(tab, basis, ncols, tol, max_iter)
    if status == 1:
        raise LPUnbounded("phase-2 unbounded direction")
    if status == 2:
        raise LPInfeasible("phase-2 iteration limit hit")

    x = np.zeros(ncols + m)
    for i in range(m):
        x[basis[i]] = tab[i, -1]
    return x[:nvar].copy(), float(-tab[m, -1])
