"""Seeded random generators for programs, processes, and nodes.

Everything here is driven by an explicit ``random.Random`` so the
property suites are reproducible.  Generated programs always terminate:
there is no recursion, and sizes are bounded, so bounded exploration of
a generated node reaches every reachable state.
"""

from __future__ import annotations

import random
from typing import Optional

from . import processes as pr
from . import sequential as sq
from .nodes import Ether, Node, make_ether, make_node
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
    Int,
    Let,
    Letrec,
    Lit,
    NIL,
    PAtom,
    PCons,
    PInt,
    PNil,
    PVar,
    Pattern,
    Pid,
    Receive,
    Value,
    Var,
)

ATOM_POOL = ("a", "b", "ok", "stop", "normal", "kill", "x")


def random_value(rng: random.Random, depth: int = 2, pids: tuple[int, ...] = (1, 2, 3)) -> Value:
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        return rng.choice(
            [Int(rng.randrange(-3, 10)), Atom(rng.choice(ATOM_POOL)), Pid(rng.choice(pids)), NIL]
        )
    if roll < 0.8:
        return Cons(random_value(rng, depth - 1, pids), random_value(rng, depth - 1, pids))
    params = tuple(f"X{i}" for i in range(rng.randrange(0, 3)))
    fid = FunId(f"g{rng.randrange(10)}", len(params))
    body: Expr = Lit(Int(rng.randrange(5))) if not params else Var(rng.choice(params))
    return Fun(fid, params, body)


def random_pattern(rng: random.Random, depth: int = 2, _prefix: str = "V") -> Pattern:
    names = iter(f"{_prefix}{i}" for i in range(16))
    def go(d: int) -> Pattern:
        roll = rng.random()
        if d <= 0 or roll < 0.4:
            return rng.choice(
                [PInt(rng.randrange(4)), PAtom(rng.choice(ATOM_POOL)), PNil(), PVar(next(names))]
            )
        if roll < 0.7:
            return PVar(next(names))
        return PCons(go(d - 1), go(d - 1))
    return go(depth)


def random_seq_expr(
    rng: random.Random, depth: int = 3, scope: tuple[str, ...] = (), pids: tuple[int, ...] = (1, 2, 3)
) -> Expr:
    """A terminating sequential expression, well scoped under ``scope``."""
    roll = rng.random()
    if depth <= 0 or roll < 0.25:
        if scope and rng.random() < 0.4:
            return Var(rng.choice(scope))
        return Lit(random_value(rng, 1, pids))
    pick = rng.randrange(6)
    if pick == 0:
        var = f"L{depth}{rng.randrange(4)}"
        return Let(
            var,
            random_seq_expr(rng, depth - 1, scope, pids),
            random_seq_expr(rng, depth - 1, scope + (var,), pids),
        )
    if pick == 1:
        return ConsE(
            random_seq_expr(rng, depth - 1, scope, pids),
            random_seq_expr(rng, depth - 1, scope, pids),
        )
    if pick == 2:
        return Call(
            Lit(Atom("+")),
            (
                Lit(Int(rng.randrange(10))),
                random_int_expr(rng, depth - 1, scope),
            ),
        )
    if pick == 3:
        pat = random_pattern(rng, 1, _prefix=f"C{depth}")
        from .terms import pattern_vars

        return Case(
            random_seq_expr(rng, depth - 1, scope, pids),
            pat,
            random_seq_expr(rng, depth - 1, scope + pattern_vars(pat), pids),
            random_seq_expr(rng, depth - 1, scope, pids),
        )
    if pick == 4:
        params = tuple(f"P{depth}{i}" for i in range(rng.randrange(0, 3)))
        fid = FunId(f"h{depth}{rng.randrange(4)}", len(params))
        body = random_seq_expr(rng, depth - 1, params, pids)
        args = tuple(random_seq_expr(rng, depth - 1, scope, pids) for _ in params)
        return Apply(Lit(Fun(fid, params, body)), args)
    fid = FunId(f"r{depth}{rng.randrange(4)}", 0)
    return Letrec(
        fid,
        (),
        random_seq_expr(rng, depth - 1, (), pids),
        random_seq_expr(rng, depth - 1, scope, pids),
    )


def random_int_expr(rng: random.Random, depth: int, scope: tuple[str, ...]) -> Expr:
    if depth <= 0 or rng.random() < 0.6:
        return Lit(Int(rng.randrange(10)))
    return Call(Lit(Atom("+")), (Lit(Int(rng.randrange(10))), random_int_expr(rng, depth - 1, scope)))


def random_conc_expr(
    rng: random.Random, depth: int, pids: tuple[int, ...], scope: tuple[str, ...] = ()
) -> Expr:
    """A terminating expression that may use the concurrency BIFs."""
    roll = rng.randrange(10)
    target = Lit(Pid(rng.choice(pids)))
    if depth <= 0:
        return random_seq_expr(rng, 1, scope, pids)
    if roll == 0:
        return Call(Lit(Atom("!")), (target, random_seq_expr(rng, 1, scope, pids)))
    if roll == 1:
        return Call(Lit(Atom("link")), (target,))
    if roll == 2:
        return Call(Lit(Atom("unlink")), (target,))
    if roll == 3:
        return Call(Lit(Atom("exit")), (target, Lit(Atom(rng.choice(("x", "normal", "kill"))))))
    if roll == 4:
        return Call(Lit(Atom("self")), ())
    if roll == 5:
        return Call(
            Lit(Atom("process_flag")),
            (Lit(Atom("trap_exit")), Lit(Atom(rng.choice(("true", "false"))))),
        )
    if roll == 6:
        params = ("Z",)
        fid = FunId(f"w{rng.randrange(4)}", 1)
        fun = Fun(fid, params, random_seq_expr(rng, 1, params, pids))
        return Call(Lit(Atom("spawn")), (Lit(fun), ConsE(random_seq_expr(rng, 1, scope, pids), Lit(NIL))))
    if roll == 7:
        return Receive(
            tuple(
                (random_pattern(rng, 1, _prefix=f"R{i}"), Lit(Atom("ok")))
                for i in range(rng.randrange(1, 3))
            )
        )
    var = f"S{depth}"
    return Let(
        var,
        random_conc_expr(rng, depth - 1, pids, scope),
        random_conc_expr(rng, depth - 1, pids, scope + (var,)),
    )


def random_signal(rng: random.Random, pids: tuple[int, ...] = (1, 2, 3)) -> pr.Signal:
    roll = rng.randrange(6)
    if roll <= 2:
        return pr.Message(random_value(rng, 1, pids))
    if roll == 3:
        return pr.ExitSig(Atom(rng.choice(("normal", "kill", "x"))), rng.random() < 0.5)
    if roll == 4:
        return pr.LinkSig()
    return pr.UnlinkSig()


def random_node(rng: random.Random, n_procs: Optional[int] = None) -> Node:
    """A small node: 1..3 live processes, a few links, some in-flight signals."""
    count = n_procs if n_procs is not None else rng.randrange(1, 4)
    pids = tuple(range(1, count + 1))
    pool: dict[Pid, pr.Process] = {}
    for i in pids:
        expr = random_conc_expr(rng, rng.randrange(1, 3), pids)
        mailbox = tuple(random_value(rng, 1, pids) for _ in range(rng.randrange(0, 2)))
        links = tuple(Pid(rng.choice(pids)) for _ in range(rng.randrange(0, 2)))
        pool[Pid(i)] = pr.Live((), expr, mailbox, links, rng.random() < 0.3)
    queues: dict[tuple[Pid, Pid], list[pr.Signal]] = {}
    for _ in range(rng.randrange(0, 3)):
        key = (Pid(rng.choice(pids)), Pid(rng.choice(pids)))
        queues.setdefault(key, []).append(random_signal(rng, pids))
    return make_node(pool, make_ether(queues) if queues else Ether())


def random_seq_config(rng: random.Random) -> tuple[sq.FrameStack, Expr]:
    """A reachable sequential configuration: run a random program a few steps."""
    stack: sq.FrameStack = ()
    expr = random_seq_expr(rng, rng.randrange(1, 4))
    for _ in range(rng.randrange(0, 12)):
        nxt = sq.seq_step(stack, expr)
        if nxt is None:
            break
        stack, expr = nxt
    return stack, expr


def random_process_action(
    rng: random.Random,
) -> Optional[tuple[pr.Process, pr.Action]]:
    """Sample a (process, enabled action) pair out of a random node run."""
    node = random_node(rng)
    from .nodes import node_enabled, node_step

    for _ in range(rng.randrange(0, 8)):
        enabled = node_enabled(node)
        if not enabled:
            break
        pid, action = enabled[rng.randrange(len(enabled))]
        nxt = node_step(node, pid, action)
        if nxt is None:
            break
        node = nxt
    enabled = node_enabled(node)
    if not enabled:
        return None
    pid, action = enabled[rng.randrange(len(enabled))]
    proc = node.proc(pid)
    if proc is None:
        return None
    return proc, action
