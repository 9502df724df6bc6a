"""JSON formats: node configuration documents, traces, and LTS export.

Configuration files are written by hand, so their values are source
text in the concrete syntax.  Traces are written by machines and must
replay exactly, and a value produced by evaluation can embed literal
list values inside function bodies, which concrete syntax cannot tell
apart from list expressions; traces therefore carry fully structured
terms.  Node renderings (for the state endpoint and LTS export) are
text for humans and the UI, not for reloading.
"""

from __future__ import annotations

import json
from typing import Any

from . import processes as pr
from . import sequential as sq
from .explorer import Lts, Trace, TraceStep
from .nodes import EMPTY_ETHER, Node, make_ether, make_node
from .parser import parse_expr, parse_value, print_expr, print_pattern, print_value
from .terms import (
    Apply,
    Atom,
    Call,
    Case,
    Cons,
    ConsE,
    Expr,
    Fun,
    FunId,
    FunRef,
    Int,
    Let,
    Letrec,
    Lit,
    NIL,
    Nil,
    PAtom,
    PCons,
    PInt,
    PNil,
    PPid,
    PVar,
    Pattern,
    Pid,
    Receive,
    Value,
    Var,
)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Node configuration documents
# ---------------------------------------------------------------------------


def load_node_config(doc: dict) -> Node:
    """Build the initial node described by a configuration document.

    Schema: {"processes": [{"pid": int, "expr": str, "mailbox": [str],
    "links": [int], "trap_exit": bool}], "ether": [{"src": int,
    "dst": int, "signals": [signal]}]}.  Mailbox entries are value
    literals in concrete syntax.  Defaults mirror a freshly spawned
    process: empty mailbox, no links, trap_exit false.
    """
    if not isinstance(doc, dict) or "processes" not in doc:
        raise ConfigError("config must be an object with a 'processes' list")
    procs: dict[Pid, pr.Process] = {}
    for entry in doc["processes"]:
        try:
            pid = Pid(int(entry["pid"]))
        except (KeyError, TypeError, ValueError) as err:
            raise ConfigError(f"bad process pid: {err}") from None
        if pid in procs:
            raise ConfigError(f"duplicate pid {pid.id}")
        if "expr" not in entry:
            raise ConfigError(f"process {pid.id} needs an 'expr'")
        try:
            expr = parse_expr(entry["expr"])
            mailbox = tuple(parse_value(text) for text in entry.get("mailbox", []))
        except Exception as err:
            raise ConfigError(f"process {pid.id}: {err}") from None
        links = tuple(Pid(int(i)) for i in entry.get("links", []))
        trap = bool(entry.get("trap_exit", False))
        procs[pid] = pr.Live((), expr, mailbox, links, trap)
    ether = EMPTY_ETHER
    queues: dict[tuple[Pid, Pid], list[pr.Signal]] = {}
    for entry in doc.get("ether", []):
        try:
            key = (Pid(int(entry["src"])), Pid(int(entry["dst"])))
            signals = [signal_from_json(s) for s in entry["signals"]]
        except ConfigError:
            raise
        except Exception as err:
            raise ConfigError(f"bad ether entry: {err}") from None
        queues.setdefault(key, []).extend(signals)
    if queues:
        ether = make_ether(queues)
    return make_node(procs, ether)


def load_node_config_file(path: str) -> Node:
    with open(path, "r", encoding="utf-8") as handle:
        return load_node_config(json.load(handle))


# ---------------------------------------------------------------------------
# Structured terms (exact round trip, used inside traces)
# ---------------------------------------------------------------------------


def value_to_json(v: Value) -> Any:
    match v:
        case Int(n):
            return {"k": "int", "n": n}
        case Atom(name):
            return {"k": "atom", "name": name}
        case Pid(i):
            return {"k": "pid", "id": i}
        case Nil():
            return {"k": "nil"}
        case Cons(head, tail):
            return {"k": "cons", "head": value_to_json(head), "tail": value_to_json(tail)}
        case Fun(fid, params, body):
            return {
                "k": "fun",
                "name": fid.name,
                "arity": fid.arity,
                "params": list(params),
                "body": expr_to_json(body),
            }
    raise TypeError(f"not a value: {v!r}")


def value_from_json(doc: Any) -> Value:
    kind = doc["k"]
    if kind == "int":
        return Int(doc["n"])
    if kind == "atom":
        return Atom(doc["name"])
    if kind == "pid":
        return Pid(doc["id"])
    if kind == "nil":
        return NIL
    if kind == "cons":
        return Cons(value_from_json(doc["head"]), value_from_json(doc["tail"]))
    if kind == "fun":
        return Fun(
            FunId(doc["name"], doc["arity"]), tuple(doc["params"]), expr_from_json(doc["body"])
        )
    raise ConfigError(f"unknown value kind {kind!r}")


def pattern_to_json(p: Pattern) -> Any:
    match p:
        case PInt(n):
            return {"k": "int", "n": n}
        case PAtom(name):
            return {"k": "atom", "name": name}
        case PPid(i):
            return {"k": "pid", "id": i}
        case PNil():
            return {"k": "nil"}
        case PVar(name):
            return {"k": "var", "name": name}
        case PCons(head, tail):
            return {"k": "cons", "head": pattern_to_json(head), "tail": pattern_to_json(tail)}
    raise TypeError(f"not a pattern: {p!r}")


def pattern_from_json(doc: Any) -> Pattern:
    kind = doc["k"]
    if kind == "int":
        return PInt(doc["n"])
    if kind == "atom":
        return PAtom(doc["name"])
    if kind == "pid":
        return PPid(doc["id"])
    if kind == "nil":
        return PNil()
    if kind == "var":
        return PVar(doc["name"])
    if kind == "cons":
        return PCons(pattern_from_json(doc["head"]), pattern_from_json(doc["tail"]))
    raise ConfigError(f"unknown pattern kind {kind!r}")


def expr_to_json(e: Expr) -> Any:
    match e:
        case Lit(v):
            return {"k": "lit", "value": value_to_json(v)}
        case Var(name):
            return {"k": "var", "name": name}
        case FunRef(fid):
            return {"k": "funref", "name": fid.name, "arity": fid.arity}
        case Apply(fn, args):
            return {"k": "apply", "fn": expr_to_json(fn), "args": [expr_to_json(a) for a in args]}
        case Call(fn, args):
            return {"k": "call", "fn": expr_to_json(fn), "args": [expr_to_json(a) for a in args]}
        case Case(scrutinee, pattern, then_branch, else_branch):
            return {
                "k": "case",
                "scrutinee": expr_to_json(scrutinee),
                "pattern": pattern_to_json(pattern),
                "then": expr_to_json(then_branch),
                "else": expr_to_json(else_branch),
            }
        case Let(var, bound, body):
            return {"k": "let", "var": var, "bound": expr_to_json(bound), "body": expr_to_json(body)}
        case ConsE(head, tail):
            return {"k": "conse", "head": expr_to_json(head), "tail": expr_to_json(tail)}
        case Letrec(fid, params, fun_body, body):
            return {
                "k": "letrec",
                "name": fid.name,
                "arity": fid.arity,
                "params": list(params),
                "fun_body": expr_to_json(fun_body),
                "body": expr_to_json(body),
            }
        case Receive(clauses):
            return {
                "k": "receive",
                "clauses": [[pattern_to_json(p), expr_to_json(b)] for p, b in clauses],
            }
    raise TypeError(f"not an expression: {e!r}")


def expr_from_json(doc: Any) -> Expr:
    kind = doc["k"]
    if kind == "lit":
        return Lit(value_from_json(doc["value"]))
    if kind == "var":
        return Var(doc["name"])
    if kind == "funref":
        return FunRef(FunId(doc["name"], doc["arity"]))
    if kind == "apply":
        return Apply(expr_from_json(doc["fn"]), tuple(expr_from_json(a) for a in doc["args"]))
    if kind == "call":
        return Call(expr_from_json(doc["fn"]), tuple(expr_from_json(a) for a in doc["args"]))
    if kind == "case":
        return Case(
            expr_from_json(doc["scrutinee"]),
            pattern_from_json(doc["pattern"]),
            expr_from_json(doc["then"]),
            expr_from_json(doc["else"]),
        )
    if kind == "let":
        return Let(doc["var"], expr_from_json(doc["bound"]), expr_from_json(doc["body"]))
    if kind == "conse":
        return ConsE(expr_from_json(doc["head"]), expr_from_json(doc["tail"]))
    if kind == "letrec":
        return Letrec(
            FunId(doc["name"], doc["arity"]),
            tuple(doc["params"]),
            expr_from_json(doc["fun_body"]),
            expr_from_json(doc["body"]),
        )
    if kind == "receive":
        return Receive(
            tuple((pattern_from_json(p), expr_from_json(b)) for p, b in doc["clauses"])
        )
    raise ConfigError(f"unknown expression kind {kind!r}")


# ---------------------------------------------------------------------------
# Signals and actions
# ---------------------------------------------------------------------------


def signal_to_json(signal: pr.Signal) -> dict:
    match signal:
        case pr.Message(value):
            return {"kind": "message", "value": value_to_json(value), "text": print_value(value)}
        case pr.ExitSig(reason, from_link):
            return {
                "kind": "exit",
                "reason": value_to_json(reason),
                "from_link": from_link,
                "text": print_value(reason),
            }
        case pr.LinkSig():
            return {"kind": "link"}
        case pr.UnlinkSig():
            return {"kind": "unlink"}
    raise TypeError(f"not a signal: {signal!r}")


def signal_from_json(doc: dict) -> pr.Signal:
    kind = doc.get("kind")
    if kind == "message":
        return pr.Message(_value_field(doc["value"]))
    if kind == "exit":
        return pr.ExitSig(_value_field(doc["reason"]), bool(doc["from_link"]))
    if kind == "link":
        return pr.LinkSig()
    if kind == "unlink":
        return pr.UnlinkSig()
    raise ConfigError(f"unknown signal kind {kind!r}")


def _value_field(doc: Any) -> Value:
    """Values in config files are source text; in traces they are structured."""
    if isinstance(doc, str):
        return parse_value(doc)
    return value_from_json(doc)


def action_to_json(action: pr.Action) -> dict:
    match action:
        case pr.SendA(src, dst, signal):
            return {"kind": "send", "src": src.id, "dst": dst.id, "signal": signal_to_json(signal)}
        case pr.ArriveA(src, dst, signal):
            return {
                "kind": "arrive",
                "src": src.id,
                "dst": dst.id,
                "signal": signal_to_json(signal),
            }
        case pr.ReceiveA(value):
            return {"kind": "receive", "value": value_to_json(value), "text": print_value(value)}
        case pr.SelfA(pid):
            return {"kind": "self", "pid": pid.id}
        case pr.SpawnA(pid, fn, args):
            return {
                "kind": "spawn",
                "pid": pid.id,
                "fn": value_to_json(fn),
                "args": value_to_json(args),
                "text": f"{print_value(fn)} applied to {print_value(args)}",
            }
        case pr.TauA():
            return {"kind": "tau"}
        case pr.TerminateA():
            return {"kind": "terminate"}
        case pr.FlagA():
            return {"kind": "flag"}
    raise TypeError(f"not an action: {action!r}")


def action_from_json(doc: dict) -> pr.Action:
    kind = doc.get("kind")
    if kind == "send":
        return pr.SendA(Pid(doc["src"]), Pid(doc["dst"]), signal_from_json(doc["signal"]))
    if kind == "arrive":
        return pr.ArriveA(Pid(doc["src"]), Pid(doc["dst"]), signal_from_json(doc["signal"]))
    if kind == "receive":
        return pr.ReceiveA(_value_field(doc["value"]))
    if kind == "self":
        return pr.SelfA(Pid(doc["pid"]))
    if kind == "spawn":
        return pr.SpawnA(Pid(doc["pid"]), _value_field(doc["fn"]), _value_field(doc["args"]))
    if kind == "tau":
        return pr.TauA()
    if kind == "terminate":
        return pr.TerminateA()
    if kind == "flag":
        return pr.FlagA()
    raise ConfigError(f"unknown action kind {kind!r}")


def describe_action(pid: Pid, action: pr.Action) -> str:
    match action:
        case pr.SendA(src, dst, pr.Message(v)):
            return f"pid {src.id}: send message {print_value(v)} to pid {dst.id}"
        case pr.SendA(src, dst, pr.ExitSig(reason, from_link)):
            how = "through link" if from_link else "explicitly"
            return f"pid {src.id}: send exit {print_value(reason)} to pid {dst.id} ({how})"
        case pr.SendA(src, dst, pr.LinkSig()):
            return f"pid {src.id}: send link request to pid {dst.id}"
        case pr.SendA(src, dst, pr.UnlinkSig()):
            return f"pid {src.id}: send unlink request to pid {dst.id}"
        case pr.ArriveA(src, dst, signal):
            what = signal_to_json(signal)
            detail = what.get("text", "")
            return f"pid {dst.id}: deliver {what['kind']} {detail} from pid {src.id}".replace("  ", " ")
        case pr.ReceiveA(v):
            return f"pid {pid.id}: receive {print_value(v)} from mailbox"
        case pr.SelfA(own):
            return f"pid {own.id}: read own pid"
        case pr.SpawnA(child, fn, _args):
            name = fn.id.name if hasattr(fn, "id") else "?"
            return f"pid {pid.id}: spawn pid {child.id} running {name}"
        case pr.TauA():
            return f"pid {pid.id}: sequential step"
        case pr.TerminateA():
            return f"pid {pid.id}: terminate"
        case pr.FlagA():
            return f"pid {pid.id}: set trap_exit flag"
    return f"pid {pid.id}: {action!r}"


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


def trace_to_json(trace: Trace) -> dict:
    return {
        "trace": [
            {"pid": pid.id, "action": action_to_json(action)} for pid, action in trace
        ]
    }


def trace_from_json(doc: dict) -> Trace:
    if not isinstance(doc, dict) or "trace" not in doc:
        raise ConfigError("trace file must be an object with a 'trace' list")
    steps: list[TraceStep] = []
    for entry in doc["trace"]:
        steps.append((Pid(int(entry["pid"])), action_from_json(entry["action"])))
    return tuple(steps)


def load_trace_file(path: str) -> Trace:
    with open(path, "r", encoding="utf-8") as handle:
        return trace_from_json(json.load(handle))


# ---------------------------------------------------------------------------
# Node rendering
# ---------------------------------------------------------------------------


def frame_to_text(frame: sq.Frame) -> str:
    hole = "[]"
    match frame:
        case sq.CallFun(args):
            return f"call {hole}({', '.join(print_expr(a) for a in args)})"
        case sq.CallArgs(fn, done, todo):
            parts = [print_value(v) for v in done] + [hole] + [print_expr(e) for e in todo]
            return f"call {print_value(fn)}({', '.join(parts)})"
        case sq.ApplyFun(args):
            return f"apply {hole}({', '.join(print_expr(a) for a in args)})"
        case sq.ApplyArgs(fn, done, todo):
            parts = [print_value(v) for v in done] + [hole] + [print_expr(e) for e in todo]
            return f"apply {print_value(fn)}({', '.join(parts)})"
        case sq.LetF(var, body):
            return f"let {var} = {hole} in {print_expr(body)}"
        case sq.CaseF(pattern, then_branch, else_branch):
            return (
                f"case {hole} of {print_pattern(pattern)} then {print_expr(then_branch)}"
                f" else {print_expr(else_branch)} end"
            )
        case sq.ConsTail(head):
            return f"[{print_expr(head)}|{hole}]"
        case sq.ConsHead(tail):
            return f"[{hole}|{print_value(tail)}]"
    raise TypeError(f"not a frame: {frame!r}")


def process_to_json(pid: Pid, proc: pr.Process) -> dict:
    match proc:
        case pr.Live(stack, redex, mailbox, links, trap_exit):
            return {
                "pid": pid.id,
                "status": "live",
                "stack": [frame_to_text(f) for f in stack],
                "redex": print_expr(redex),
                "mailbox": [print_value(v) for v in mailbox],
                "links": [p.id for p in links],
                "trap_exit": trap_exit,
            }
        case pr.Dead(obligations):
            return {
                "pid": pid.id,
                "status": "dead",
                "obligations": [
                    {"pid": target.id, "reason": print_value(reason)}
                    for target, reason in obligations
                ],
            }
    raise TypeError(f"not a process: {proc!r}")


def node_to_json(node: Node) -> dict:
    return {
        "ether": [
            {
                "src": src.id,
                "dst": dst.id,
                "signals": [signal_to_json(s) for s in signals],
            }
            for (src, dst), signals in node.ether.entries
        ],
        "processes": [process_to_json(pid, proc) for pid, proc in node.procs],
    }


# ---------------------------------------------------------------------------
# LTS export
# ---------------------------------------------------------------------------


def lts_to_json(lts: Lts) -> dict:
    return {
        "initial": lts.initial,
        "states": [{"id": i, "node": node_to_json(node)} for i, node in enumerate(lts.states)],
        "edges": [
            {"from": src, "pid": pid.id, "action": action_to_json(action), "to": dst}
            for src, pid, action, dst in lts.edges
        ],
        "truncated": sorted(lts.truncated),
    }


def witness_to_json(witness, lts1: Lts, lts2: Lts) -> list[list[int]]:
    """Witness relation as pairs of state ids in the two exported spaces."""
    pairs = []
    for n1, n2 in witness:
        i1, i2 = lts1.state_of(n1), lts2.state_of(n2)
        if i1 is not None and i2 is not None:
            pairs.append([i1, i2])
    return sorted(pairs)
