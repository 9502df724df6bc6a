"""Command-line interface: eval, run, explore, check-equiv, props, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional

from . import props as props_mod
from .bisim import FailsAt, Holds, UnknownAtBound, weakly_bisimilar
from .explorer import ExplorationConfig, explore, terminal_redexes, run_trace
from .jsonio import (
    ConfigError,
    action_to_json,
    load_node_config_file,
    load_trace_file,
    lts_to_json,
    node_to_json,
)
from .parser import ParseError, parse_expr, print_value
from .sequential import Finished, OutOfFuel, SuspendedEval, seq_eval


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, ParseError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cerlsim",
        description="Interpreter, interleaving explorer, and equivalence checker "
        "for a concurrent Core Erlang subset.",
    )
    sub = parser.add_subparsers(required=True)

    p_eval = sub.add_parser("eval", help="evaluate a sequential program file")
    p_eval.add_argument("file")
    p_eval.add_argument("--fuel", type=int, default=1_000_000)
    p_eval.add_argument("--json", action="store_true")
    p_eval.set_defaults(handler=_cmd_eval)

    p_run = sub.add_parser("run", help="replay a trace against a node config")
    p_run.add_argument("config")
    p_run.add_argument("--trace", required=True)
    p_run.add_argument("--json", action="store_true")
    p_run.set_defaults(handler=_cmd_run)

    p_explore = sub.add_parser("explore", help="bounded exhaustive interleaving exploration")
    p_explore.add_argument("config")
    p_explore.add_argument("--depth", type=int, default=64)
    p_explore.add_argument("--states", type=int, default=100_000)
    p_explore.add_argument("--tau-only", action="store_true")
    p_explore.add_argument("--lts", help="write the transition system to this JSON file")
    p_explore.add_argument("--json", action="store_true")
    p_explore.set_defaults(handler=_cmd_explore)

    p_equiv = sub.add_parser("check-equiv", help="weak bisimilarity of two node configs")
    p_equiv.add_argument("config_a")
    p_equiv.add_argument("config_b")
    p_equiv.add_argument("--depth", type=int, default=64)
    p_equiv.add_argument("--states", type=int, default=100_000)
    p_equiv.add_argument(
        "--witness", help="write both state spaces and the witness pairs to this JSON file"
    )
    p_equiv.add_argument("--json", action="store_true")
    p_equiv.set_defaults(handler=_cmd_check_equiv)

    p_props = sub.add_parser("props", help="run the semantic property suites")
    p_props.add_argument("--seed", type=int, default=0)
    p_props.add_argument("--cases", type=int, default=1000)
    p_props.add_argument("--json", action="store_true")
    p_props.set_defaults(handler=_cmd_props)

    p_serve = sub.add_parser("serve", help="start the HTTP stepper session service")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui", help="directory of static UI assets to serve at /")
    p_serve.add_argument("--snapshot-dir", help="persist sessions as JSON under this directory")
    p_serve.set_defaults(handler=_cmd_serve)

    return parser


def _cmd_eval(args) -> int:
    with open(args.file, "r", encoding="utf-8") as handle:
        expr = parse_expr(handle.read())
    outcome = seq_eval((), expr, args.fuel)
    if isinstance(outcome, Finished):
        if args.json:
            print(json.dumps({"outcome": "finished", "value": print_value(outcome.value)}))
        else:
            print(print_value(outcome.value))
        return 0
    if isinstance(outcome, SuspendedEval):
        kind = type(outcome.redex_class).__name__
        if args.json:
            print(json.dumps({"outcome": "suspended", "class": kind}))
        else:
            print(f"suspended: {kind}")
        return 1
    assert isinstance(outcome, OutOfFuel)
    if args.json:
        print(json.dumps({"outcome": "out-of-fuel", "fuel": args.fuel}))
    else:
        print(f"out of fuel after {args.fuel} steps")
    return 2


def _cmd_run(args) -> int:
    node = load_node_config_file(args.config)
    trace = load_trace_file(args.trace)
    result = run_trace(node, trace)
    if result.ok:
        if args.json:
            print(json.dumps({"outcome": "ok", "node": node_to_json(result.node)}))
        else:
            print(json.dumps(node_to_json(result.node), indent=2))
        return 0
    if args.json:
        print(json.dumps({"outcome": "stuck", "failed_index": result.failed_index}))
    else:
        print(f"trace not replayable: step {result.failed_index} is disabled")
    return 1


def _cmd_explore(args) -> int:
    node = load_node_config_file(args.config)
    config = ExplorationConfig(
        depth_bound=args.depth, state_bound=args.states, tau_only=args.tau_only
    )
    started = time.monotonic()
    lts = explore(node, config)
    elapsed = time.monotonic() - started
    terminals = lts.terminal_states()
    redexes = {
        pid.id: sorted(print_value(v) for v in values)
        for pid, values in terminal_redexes(lts).items()
    }
    summary = {
        "states": len(lts.states),
        "edges": len(lts.edges),
        "truncated": len(lts.truncated),
        "terminal_states": len(terminals),
        "terminal_redexes": redexes,
        "seconds": round(elapsed, 3),
    }
    if args.lts:
        with open(args.lts, "w", encoding="utf-8") as handle:
            json.dump(lts_to_json(lts), handle)
    if args.json:
        print(json.dumps(summary))
    else:
        print(
            f"{summary['states']} states, {summary['edges']} edges, "
            f"{summary['truncated']} truncated, {summary['terminal_states']} terminal "
            f"({elapsed:.2f}s)"
        )
        for pid, values in sorted(redexes.items()):
            print(f"pid {pid} terminates holding: {', '.join(values)}")
    return 0


def _cmd_check_equiv(args) -> int:
    node_a = load_node_config_file(args.config_a)
    node_b = load_node_config_file(args.config_b)
    config = ExplorationConfig(depth_bound=args.depth, state_bound=args.states)
    report = weakly_bisimilar(node_a, node_b, config)
    if args.witness:
        from .jsonio import witness_to_json

        lts_a, lts_b = explore(node_a, config), explore(node_b, config)
        pairs = witness_to_json(report.witness, lts_a, lts_b) if isinstance(report, Holds) else []
        with open(args.witness, "w", encoding="utf-8") as handle:
            json.dump(
                {
                    "verdict": type(report).__name__,
                    "lts_a": lts_to_json(lts_a),
                    "lts_b": lts_to_json(lts_b),
                    "witness": pairs,
                },
                handle,
            )
    if isinstance(report, Holds):
        payload = {"verdict": "holds", "witness_pairs": len(report.witness)}
        code = 0
    elif isinstance(report, FailsAt):
        pid, action = report.move
        payload = {
            "verdict": "fails",
            "move": {"pid": pid.id, "action": action_to_json(action)},
            "reason": report.reason,
        }
        code = 1
    else:
        assert isinstance(report, UnknownAtBound)
        payload = {"verdict": "unknown-at-bound", "pairs": len(report.pairs)}
        code = 2
    if args.json:
        print(json.dumps(payload))
    else:
        print(payload["verdict"])
        if code == 1:
            print(f"unanswered move: pid {payload['move']['pid']} {payload['move']['action']}")
    return code


def _cmd_props(args) -> int:
    results = props_mod.run_all(seed=args.seed, cases=args.cases)
    if args.json:
        print(
            json.dumps(
                [
                    {"name": r.name, "cases": r.cases, "failures": r.failures}
                    for r in results
                ]
            )
        )
    else:
        for r in results:
            print(r.line())
    return 0 if all(r.ok for r in results) else 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = args.port
    if port is None:
        port = int(os.environ.get("CERLSIM_PORT", "8000"))
    ui_dir = args.ui or os.environ.get("CERLSIM_UI_DIR")
    app = create_app(ui_dir=ui_dir, snapshot_dir=args.snapshot_dir)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
