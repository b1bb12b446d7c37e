"""Command-line surface.

Exit codes: 0 ok, 1 invalid input, 2 validation failed, 3 internal assertion.
Every verb is deterministic for a fixed --seed: two runs produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import generators, graphs, suite
from .gossip import radio_gossip
from .graphs import DemandSet, GraphFormatError, NodeWeights
from .lp import InfeasiblePair, build_poise_lp, solve_lp
from .models import (
    InvalidSchedule,
    PossessionState,
    RadioSchedule,
    TelephoneSchedule,
    check_demands_met,
    simulate_radio,
    simulate_telephone,
)
from .multicast import planar_mc_multicast
from .multiflow import pack_tpaths
from .oracle import OracleExceeded, brute_force_radio, brute_force_telephone
from .rounding import round_poise_tree
from .separator import find_3path_separator

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _read_graph(path: str) -> graphs.Graph:
    return graphs.read_graph(Path(path).read_text(encoding="utf-8"))


def _read_demands(path: str, n: int) -> DemandSet:
    return graphs.read_demands(Path(path).read_text(encoding="utf-8"), n)


def _parse_params(text: str) -> dict:
    out = {}
    if text:
        for part in text.split(","):
            key, _, value = part.partition("=")
            out[key.strip()] = value.strip()
    return out


def _parse_ids(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def cmd_solve(args) -> int:
    g = _read_graph(args.graph)
    demands = _read_demands(args.demands, g.n)
    if args.model != "telephone":
        raise ValueError("solve handles the telephone model; use `gossip` for radio")
    sched, metrics = planar_mc_multicast(g, demands, rng_seed=args.seed)
    _write(args.out, sched.to_text())
    if args.metrics:
        _write(args.metrics, metrics.summary() + "\n")
    return EXIT_OK


def cmd_gossip(args) -> int:
    g = _read_graph(args.graph)
    sched, metrics = radio_gossip(g, rng_seed=args.seed)
    _write(args.out, sched.to_text())
    if args.metrics:
        _write(args.metrics, metrics.summary() + "\n")
    return EXIT_OK


def cmd_validate(args) -> int:
    g = _read_graph(args.graph)
    if args.gossip:
        demands = DemandSet.gossip(g.n)
    else:
        if not args.demands:
            raise ValueError("validate needs --demands or --gossip")
        demands = _read_demands(args.demands, g.n)
    text = Path(args.schedule).read_text(encoding="utf-8")
    try:
        if args.model == "telephone":
            sched = TelephoneSchedule.from_text(text)
            init = PossessionState.for_demands(g.n, demands)
            final = simulate_telephone(g, init, sched)
        else:
            sched = RadioSchedule.from_text(text)
            final = simulate_radio(g, PossessionState.originators(g.n), sched)
    except InvalidSchedule as exc:
        sys.stdout.write(f"invalid {exc}\n")
        return EXIT_INVALID
    ok, unmet = check_demands_met(final, demands)
    if ok:
        sys.stdout.write(f"valid rounds={len(sched)}\n")
        return EXIT_OK
    sys.stdout.write(f"unmet {len(unmet)}\n")
    return EXIT_INVALID


def cmd_oracle(args) -> int:
    g = _read_graph(args.graph)
    if args.gossip:
        demands = DemandSet.gossip(g.n)
    else:
        if not args.demands:
            raise ValueError("oracle needs --demands or --gossip")
        demands = _read_demands(args.demands, g.n)
    try:
        if args.model == "telephone":
            res = brute_force_telephone(g, demands, args.max_rounds)
        else:
            res = brute_force_radio(g, demands, args.max_rounds)
    except OracleExceeded as exc:
        sys.stdout.write(f"exceeded {exc}\n")
        return EXIT_OK
    sys.stdout.write(f"opt={res.length} states={res.states_explored}\n")
    if args.out:
        _write(args.out, res.schedule.to_text())
    return EXIT_OK


def cmd_gen(args) -> int:
    params = _parse_params(args.params)
    if args.k is not None:
        params["k"] = args.k
    if args.gossip:
        params["gossip"] = True
    inst = generators.generate_instance(args.kind, params, args.seed)
    _write(args.out_graph, graphs.write_graph(inst.graph))
    if args.out_demands:
        if inst.demands is None:
            raise ValueError("instance has no demands; pass --k or --gossip")
        _write(args.out_demands, graphs.write_demands(inst.demands))
    return EXIT_OK


def cmd_lp(args) -> int:
    if args.action != "dump":
        raise ValueError(f"unknown lp action {args.action}")
    g = _read_graph(args.graph)
    demands = _read_demands(args.demands, g.n)
    lp = build_poise_lp(g, demands)
    if args.solve:
        frac = solve_lp(lp, engine=args.engine)
        _write(args.out, lp.dump() + f"\\ optimum L={frac.value:.9f}\n")
    else:
        _write(args.out, lp.dump())
    return EXIT_OK


def cmd_separator(args) -> int:
    g = _read_graph(args.graph)
    if args.weights:
        vals = _parse_ids(Path(args.weights).read_text(encoding="utf-8"))
        if len(vals) != g.n:
            raise ValueError(f"weights file must list {g.n} integers")
        weights = NodeWeights(vals)
    else:
        weights = NodeWeights.uniform(g.n)
    sep = find_3path_separator(g, weights)
    lines = [f"root {sep.root}"]
    lines.extend(" ".join(str(v) for v in p) for p in sep.paths)
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_round_poise(args) -> int:
    g = _read_graph(args.graph)
    terminals = _parse_ids(args.terminals)
    demands = DemandSet.rooted(args.root, terminals)
    frac = solve_lp(build_poise_lp(g, demands))
    tree = round_poise_tree(g, args.root, terminals, frac, rng_seed=args.seed,
                            grid=args.grid)
    lines = [f"{u} {v}" for u, v in tree.edges]
    lines.append(
        f"poise={tree.poise} degree={tree.max_degree} "
        f"diameter={tree.diameter} iters={tree.iterations}"
    )
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_pack(args) -> int:
    mg = graphs.read_multigraph(Path(args.graph).read_text(encoding="utf-8"))
    terminals = _parse_ids(args.terminals)
    packing = pack_tpaths(mg, terminals)
    lines = []
    for path, count in packing.paths:
        lines.extend(" ".join(str(v) for v in path) for _ in range(count))
    _write(args.out, "\n".join(lines) + ("\n" if lines else ""))
    return EXIT_OK


def cmd_suite(args) -> int:
    manifest = suite.load_manifest(Path(args.config).read_text(encoding="utf-8"))
    rows, passed = suite.run_suite(manifest)
    _write(args.out, suite.format_report(rows))
    return EXIT_OK if passed else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisecast",
        description="Minimum-time dissemination schedules in the telephone "
        "and radio models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, metrics=False):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        if metrics:
            p.add_argument("--metrics", default=None)

    p = sub.add_parser("solve", help="schedule multicommodity telephone demands")
    p.add_argument("--model", default="telephone", choices=["telephone"])
    p.add_argument("--graph", required=True)
    p.add_argument("--demands", required=True)
    common(p, metrics=True)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("gossip", help="schedule all-pairs radio gossip")
    p.add_argument("--graph", required=True)
    common(p, metrics=True)
    p.set_defaults(fn=cmd_gossip)

    p = sub.add_parser("validate", help="simulate a schedule and check demands")
    p.add_argument("--model", required=True, choices=["telephone", "radio"])
    p.add_argument("--graph", required=True)
    p.add_argument("--demands", default=None)
    p.add_argument("--gossip", action="store_true")
    p.add_argument("--schedule", required=True)
    common(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("oracle", help="exact optimum by exhaustive search")
    p.add_argument("--model", required=True, choices=["telephone", "radio"])
    p.add_argument("--graph", required=True)
    p.add_argument("--demands", default=None)
    p.add_argument("--gossip", action="store_true")
    p.add_argument("--max-rounds", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--kind", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--gossip", action="store_true")
    p.add_argument("--out-graph", required=True)
    p.add_argument("--out-demands", default=None)
    common(p)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("lp", help="dump the poise LP in text form")
    p.add_argument("action", choices=["dump"])
    p.add_argument("--graph", required=True)
    p.add_argument("--demands", required=True)
    p.add_argument("--solve", action="store_true")
    p.add_argument("--engine", default="highs", choices=["highs", "dense"])
    common(p)
    p.set_defaults(fn=cmd_lp)

    p = sub.add_parser("separator", help="3-shortest-path balanced separator")
    p.add_argument("--graph", required=True)
    p.add_argument("--weights", default=None)
    common(p)
    p.set_defaults(fn=cmd_separator)

    p = sub.add_parser("round-poise", help="round the poise LP into a tree")
    p.add_argument("--graph", required=True)
    p.add_argument("--root", type=int, required=True)
    p.add_argument("--terminals", required=True)
    p.add_argument("--grid", type=int, default=1024)
    common(p)
    p.set_defaults(fn=cmd_round_poise)

    p = sub.add_parser("pack", help="edge-disjoint terminal path packing")
    p.add_argument("--graph", required=True)
    p.add_argument("--terminals", required=True)
    common(p)
    p.set_defaults(fn=cmd_pack)

    p = sub.add_parser("suite", help="run a manifest of instances")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(fn=cmd_suite)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (GraphFormatError, generators.BadParams, InfeasiblePair, ValueError,
            OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT
    except InvalidSchedule as exc:
        sys.stderr.write(f"invalid schedule: {exc}\n")
        return EXIT_INVALID
    except (AssertionError, RuntimeError) as exc:
        sys.stderr.write(f"internal: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
