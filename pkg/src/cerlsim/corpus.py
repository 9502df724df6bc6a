"""Builders for the standard demonstration programs and nodes.

These small scenarios exercise every layer: the list-mapping program
for the sequential semantics, the three-process signal-ordering node,
and the two-process link/exit node in both its exit variants.  Tests,
the property suites, and the shipped example files all build on these.
"""

from __future__ import annotations

from .nodes import EMPTY_ETHER, Ether, Node, make_ether, make_node
from .processes import ExitSig, Live
from .terms import (
    Apply,
    Atom,
    Call,
    Case,
    ConsE,
    Expr,
    Fun,
    FunId,
    Int,
    Let,
    Letrec,
    Lit,
    NIL,
    PCons,
    PVar,
    Pid,
    Receive,
    Value,
    Var,
    FunRef,
)

MM = FunId("mm", 2)


def mm_letrec(body: Expr) -> Expr:
    """letrec 'mm'/2 = fun(F, E) -> case E of [H|T] then [apply F(H) | apply 'mm'/2(F, T)] else [] end in <body>"""
    fun_body = Case(
        Var("E"),
        PCons(PVar("H"), PVar("T")),
        ConsE(
            Apply(Var("F"), (Var("H"),)),
            Apply(FunRef(MM), (Var("F"), Var("T"))),
        ),
        Lit(NIL),
    )
    return Letrec(MM, ("F", "E"), fun_body, body)


def succ_fun() -> Fun:
    """fun(X) -> call '+'(X, 1), the map function used in the examples."""
    return Fun(
        FunId("succ", 1),
        ("X",),
        Call(Lit(Atom("+")), (Var("X"), Lit(Int(1)))),
    )


def int_list_expr(*ints: int) -> Expr:
    out: Expr = Lit(NIL)
    for n in reversed(ints):
        out = ConsE(Lit(Int(n)), out)
    return out


def mm_program() -> Expr:
    """Map the successor function over [0, 1, 2]; evaluates to [1, 2, 3]."""
    return mm_letrec(
        Apply(FunRef(MM), (Lit(succ_fun()), int_list_expr(0, 1, 2)))
    )


def send(dst: int, payload: Expr) -> Expr:
    return Call(Lit(Atom("!")), (Lit(Pid(dst)), payload))


def live(expr: Expr, mailbox=(), links=(), trap_exit=False) -> Live:
    return Live((), expr, tuple(mailbox), tuple(Pid(i) for i in links), trap_exit)


def signal_order_node() -> Node:
    """Three processes: 1 sends 'fst' to 2 then 'snd' to 3; 2 forwards its
    message to 3; 3 keeps whatever it receives first."""
    p1 = live(Let("X", send(2, Lit(Atom("fst"))), send(3, Lit(Atom("snd")))))
    p2 = live(
        Receive(((PVar("X"), send(3, Var("X"))),))
    )
    p3 = live(Receive(((PVar("X"), Var("X")),)))
    return make_node({Pid(1): p1, Pid(2): p2, Pid(3): p3})


def exit_node(two_parameter: bool) -> Node:
    """Process 1 links to 2 and then kills itself; process 2 traps exits.

    With the two-parameter exit the self-addressed 'kill' travels via the
    ether with the link flag unset and gets converted to 'killed' for the
    link; with the one-parameter exit the process dies on the spot and the
    link carries the raw 'kill' reason.
    """
    if two_parameter:
        ender = Call(Lit(Atom("exit")), (Lit(Pid(1)), Lit(Atom("kill"))))
    else:
        ender = Call(Lit(Atom("exit")), (Lit(Atom("kill")),))
    p1 = live(Let("X", Call(Lit(Atom("link")), (Lit(Pid(2)),)), ender))
    p2 = live(Receive(((PVar("X"), Var("X")),)), trap_exit=True)
    return make_node({Pid(1): p1, Pid(2): p2})


def single_process_node(expr: Expr, pid: int = 1, **kwargs) -> Node:
    return make_node({Pid(pid): live(expr, **kwargs)})


def mm_context_node(
    pid: int,
    ether: Ether = EMPTY_ETHER,
    mailbox: tuple[Value, ...] = (),
    links: tuple[int, ...] = (),
    trap_exit: bool = False,
    finished: bool = False,
) -> Node:
    """The mapping program (or its final value) in an arbitrary context."""
    expr = Lit(int_list_value(1, 2, 3)) if finished else mm_program()
    return make_node(
        {Pid(pid): live(expr, mailbox=mailbox, links=links, trap_exit=trap_exit)},
        ether,
    )


def int_list_value(*ints: int) -> Value:
    from .terms import Cons

    out: Value = NIL
    for n in reversed(ints):
        out = Cons(Int(n), out)
    return out


def let_zero_node(ether_kill: bool = True) -> Node:
    """Process 0 evaluating ``let X = 0 in X``; optionally a 'kill' exit
    signal from an external pid 1 already sits in the ether."""
    ether = (
        make_ether({(Pid(1), Pid(0)): [ExitSig(Atom("kill"), False)]})
        if ether_kill
        else EMPTY_ETHER
    )
    return make_node(
        {Pid(0): live(Let("X", Lit(Int(0)), Var("X")))},
        ether,
    )
