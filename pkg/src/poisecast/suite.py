"""Manifest-driven benchmark runner: solve, validate, and (where feasible)
compare against the exhaustive oracle, emitting a machine-readable table."""

from __future__ import annotations

import json
import time
from typing import Sequence

from .generators import generate_instance
from .gossip import radio_gossip
from .graphs import DemandSet
from .models import (
    PossessionState,
    check_demands_met,
    simulate_radio,
    simulate_telephone,
)
from .multicast import planar_mc_multicast
from .oracle import OracleExceeded, brute_force_radio, brute_force_telephone

COLUMNS = (
    "name", "model", "n", "k", "lp_root", "length", "opt", "ratio",
    "valid", "seconds", "error",
)


def run_suite(manifest: dict) -> tuple[list[dict], bool]:
    """Run every instance; per-instance failures are reported, not fatal.

    Returns (rows, passed) where passed means every row validated and every
    oracle ratio stayed within the manifest's ratio_bound (if set).
    """
    rows = []
    bound = manifest.get("ratio_bound")
    passed = True
    for entry in manifest.get("instances", []):
        row = dict.fromkeys(COLUMNS, "")
        row["name"] = entry.get("name", entry["kind"])
        row["model"] = entry.get("model", "telephone")
        started = time.time()
        try:
            rows.append(_run_one(entry, row, started))
        except Exception as exc:  # surface and continue
            row["valid"] = False
            row["error"] = f"{type(exc).__name__}: {exc}"
            row["seconds"] = round(time.time() - started, 3)
            rows.append(row)
        last = rows[-1]
        if last["valid"] is not True:
            passed = False
        elif bound is not None and last["ratio"] != "" and last["ratio"] > bound:
            passed = False
    return rows, passed


def _run_one(entry: dict, row: dict, started: float) -> dict:
    inst = generate_instance(
        entry["kind"], dict(entry.get("params", {})), int(entry.get("seed", 0))
    )
    g = inst.graph
    model = entry.get("model", "telephone")
    seed = int(entry.get("seed", 0))
    row["n"] = g.n

    if model == "telephone":
        demands = inst.demands
        if demands is None:
            raise ValueError("telephone instance needs demands")
        row["k"] = demands.k
        sched, metrics = planar_mc_multicast(g, demands, rng_seed=seed)
        row["lp_root"] = round(metrics.lp_root, 6)
        row["length"] = len(sched)
        final = simulate_telephone(
            g, PossessionState.for_demands(g.n, demands), sched
        )
        row["valid"] = check_demands_met(final, demands)[0]
    elif model == "radio":
        demands = DemandSet.gossip(g.n) if g.n > 1 else None
        row["k"] = demands.k if demands else 0
        sched, metrics = radio_gossip(g, rng_seed=seed)
        row["length"] = len(sched)
        if demands is None:
            row["valid"] = True
        else:
            final = simulate_radio(g, PossessionState.originators(g.n), sched)
            row["valid"] = check_demands_met(final, demands)[0]
    else:
        raise ValueError(f"unknown model {model}")

    max_rounds = entry.get("oracle_max_rounds")
    if max_rounds and demands is not None:
        try:
            if model == "telephone":
                opt = brute_force_telephone(g, demands, int(max_rounds)).length
            else:
                opt = brute_force_radio(g, demands, int(max_rounds)).length
            row["opt"] = opt
            row["ratio"] = round(row["length"] / max(opt, 1), 3)
        except OracleExceeded:
            row["opt"] = ""
    row["seconds"] = round(time.time() - started, 3)
    return row


def format_report(rows: Sequence[dict]) -> str:
    lines = ["\t".join(COLUMNS)]
    for row in rows:
        lines.append("\t".join(str(row[c]) for c in COLUMNS))
    return "\n".join(lines) + "\n"


def load_manifest(text: str) -> dict:
    return json.loads(text)
