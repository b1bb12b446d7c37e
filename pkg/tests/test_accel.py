from __future__ import annotations

import numpy as np
import pytest

from poisecast import _accel
from poisecast import graphs


BACKENDS = ["np"] + (["nb"] if _accel.HAVE_NUMBA else [])


def kernels(suffix):
    return (
        getattr(_accel, f"bfs_dists_{suffix}"),
        getattr(_accel, f"bfs_all_dists_{suffix}"),
        getattr(_accel, f"component_labels_{suffix}"),
        getattr(_accel, f"max_component_weight_{suffix}"),
        getattr(_accel, f"simplex_iterate_{suffix}"),
    )


@pytest.mark.parametrize("backend", BACKENDS)
def test_bfs_kernels(backend):
    g = graphs.grid_graph(3, 4)
    indptr, indices = g.csr()
    bfs, bfs_all, _labels, _mcw, _simp = kernels(backend)
    allowed = np.ones(g.n, dtype=np.bool_)
    d = bfs(indptr, indices, np.array([0], dtype=np.int64), allowed)
    assert d[0] == 0 and d[11] == 5
    allowed[5] = False
    d = bfs(indptr, indices, np.array([0], dtype=np.int64), allowed)
    assert d[5] == -1 and d[6] == 3
    full = bfs_all(indptr, indices, g.n)
    assert full[0][11] == 5 and full[11][0] == 5


@pytest.mark.parametrize("backend", BACKENDS)
def test_component_kernels(backend):
    g = graphs.path_graph(6)
    indptr, indices = g.csr()
    _bfs, _bfs_all, labels_fn, mcw, _simp = kernels(backend)
    allowed = np.ones(6, dtype=np.bool_)
    allowed[2] = False
    labels = labels_fn(indptr, indices, allowed)
    assert labels[0] == labels[1] == 0
    assert labels[3] == labels[4] == labels[5] == 1
    assert labels[2] == -1
    w = np.array([1, 1, 1, 2, 2, 2], dtype=np.int64)
    assert mcw(indptr, indices, allowed, w) == 6


@pytest.mark.parametrize("backend", BACKENDS)
def test_simplex_kernel_direct(backend):
    # min -x1 - x2 st x1 + x2 <= 2, x1 <= 1 via a prebuilt tableau
    _bfs, _bfs_all, _labels, _mcw, simp = kernels(backend)
    tab = np.array(
        [
            [1.0, 1.0, 1.0, 0.0, 2.0],
            [1.0, 0.0, 0.0, 1.0, 1.0],
            [-1.0, -1.0, 0.0, 0.0, 0.0],
        ]
    )
    basis = np.array([2, 3], dtype=np.int64)
    status = simp(tab, basis, 4, 1e-9, 100)
    assert status == 0
    assert -tab[2, -1] == pytest.approx(-2.0)


def test_backends_agree_on_random_graphs():
    if not _accel.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    rng = np.random.default_rng(0)
    for _ in range(10):
        n = int(rng.integers(2, 30))
        edges = set()
        for _e in range(int(rng.integers(1, 3 * n))):
            u, v = rng.integers(0, n, 2)
            if u != v:
                edges.add((min(u, v), max(u, v)))
        g = graphs.Graph(n, edges)
        indptr, indices = g.csr()
        allowed = rng.random(n) < 0.8
        src = np.array([int(rng.integers(0, n))], dtype=np.int64)
        w = rng.integers(0, 5, n).astype(np.int64)
        assert np.array_equal(
            _accel.bfs_dists_np(indptr, indices, src, allowed),
            _accel.bfs_dists_nb(indptr, indices, src, allowed),
        )
        assert np.array_equal(
            _accel.component_labels_np(indptr, indices, allowed),
            _accel.component_labels_nb(indptr, indices, allowed),
        )
        assert _accel.max_component_weight_np(
            indptr, indices, allowed, w
        ) == _accel.max_component_weight_nb(indptr, indices, allowed, w)
