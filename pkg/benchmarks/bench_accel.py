"""Benchmark the numba kernels against their pure-numpy fallbacks.

Usage: python benchmarks/bench_accel.py [--repeat N]

Covers the three hot paths: single-source BFS sweeps (separator searches and
landmark matchings), flood-fill balance checks (separator candidate scoring),
and the dense simplex pivot loop (the self-contained LP engine).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from poisecast import _accel, graphs
from poisecast.lp import build_poise_lp, _dense_solve
from poisecast.graphs import DemandSet


def time_fn(fn, repeat: int) -> float:
    fn()  # warm-up (numba compilation happens here)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_bfs(repeat: int):
    g = graphs.grid_graph(40, 40)
    indptr, indices = g.csr()
    allowed = np.ones(g.n, dtype=np.bool_)
    sources = np.arange(g.n, dtype=np.int64)

    def run(kernel):
        def inner():
            for s in range(0, g.n, 4):
                kernel(indptr, indices, sources[s : s + 1], allowed)
        return inner

    rows = [("bfs sweep (40x40 grid, 400 sources)",
             time_fn(run(_accel.bfs_dists_np), repeat),
             time_fn(run(_accel.bfs_dists_nb), repeat) if _accel.HAVE_NUMBA else None)]
    return rows


def bench_flood(repeat: int):
    g = graphs.grid_graph(32, 32)
    indptr, indices = g.csr()
    weights = np.ones(g.n, dtype=np.int64)
    rng = np.random.default_rng(0)
    masks = []
    for _ in range(200):
        mask = np.ones(g.n, dtype=np.bool_)
        mask[rng.choice(g.n, size=40, replace=False)] = False
        masks.append(mask)

    def run(kernel):
        def inner():
            for mask in masks:
                kernel(indptr, indices, mask, weights)
        return inner

    return [("flood balance (32x32 grid, 200 candidates)",
             time_fn(run(_accel.max_component_weight_np), repeat),
             time_fn(run(_accel.max_component_weight_nb), repeat)
             if _accel.HAVE_NUMBA else None)]


def bench_simplex(repeat: int):
    g = graphs.grid_graph(3, 4)
    lp = build_poise_lp(g, DemandSet([(0, 11), (3, 8), (1, 10)]))

    def run(kernel):
        def inner():
            old = _accel.simplex_iterate
            _accel.simplex_iterate = kernel
            try:
                _dense_solve(lp)
            finally:
                _accel.simplex_iterate = old
        return inner

    return [("dense simplex (3x4 grid poise LP, 3 pairs)",
             time_fn(run(_accel.simplex_iterate_np), repeat),
             time_fn(run(_accel.simplex_iterate_nb), repeat)
             if _accel.HAVE_NUMBA else None)]


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not _accel.HAVE_NUMBA:
        print("numba not importable: numpy timings only")
    print(f"{'kernel':<48}{'numpy':>10}{'numba':>10}{'speedup':>9}")
    rows = []
    rows += bench_bfs(args.repeat)
    rows += bench_flood(args.repeat)
    rows += bench_simplex(args.repeat)
    for name, t_np, t_nb in rows:
        if t_nb is None:
            print(f"{name:<48}{t_np * 1e3:>9.1f}ms{'-':>10}{'-':>9}")
        else:
            print(
                f"{name:<48}{t_np * 1e3:>9.1f}ms{t_nb * 1e3:>8.1f}ms"
                f"{t_np / t_nb:>8.1f}x"
            )


if __name__ == "__main__":
    main()
