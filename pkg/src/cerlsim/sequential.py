"""Deterministic sequential semantics over frame stacks.

A configuration is a pair of a frame stack (the continuation, top of
stack first) and the expression under reduction.  ``seq_step`` performs
one computational step; ``classify_redex`` names the configurations
where no such step exists, which is how the process layer finds its
dispatch points (sends, spawns, receives, termination, ...).

Evaluation order follows the reference compiler: arguments left to
right, list cells tail before head.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .terms import (
    A_PLUS,
    A_SELF,
    A_TRAP_EXIT,
    Apply,
    Atom,
    Call,
    Case,
    Cons,
    ConsE,
    Expr,
    Fun,
    Int,
    Let,
    Letrec,
    Lit,
    Pattern,
    Pid,
    Receive,
    Value,
    is_match,
    match_bind,
    subst,
)

# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CallFun:
    """call []`(e1..ek)` -- evaluating the callee."""

    args: tuple[Expr, ...]


@dataclass(frozen=True)
class CallArgs:
    """call v(v1.., [], e..) -- evaluating argument |done|+1 of a BIF call."""

    fn: Value
    done: tuple[Value, ...]
    todo: tuple[Expr, ...]


@dataclass(frozen=True)
class ApplyFun:
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class ApplyArgs:
    fn: Value
    done: tuple[Value, ...]
    todo: tuple[Expr, ...]


@dataclass(frozen=True)
class LetF:
    var: str
    body: Expr


@dataclass(frozen=True)
class CaseF:
    pattern: Pattern
    then_branch: Expr
    else_branch: Expr


@dataclass(frozen=True)
class ConsTail:
    """[e1 | []] -- tail under evaluation, head expression pending."""

    head: Expr


@dataclass(frozen=True)
class ConsHead:
    """[[] | v2] -- head under evaluation, tail already a value."""

    tail: Value


Frame = Union[CallFun, CallArgs, ApplyFun, ApplyArgs, LetF, CaseF, ConsTail, ConsHead]
FrameStack = tuple[Frame, ...]

EMPTY_STACK: FrameStack = ()


# ---------------------------------------------------------------------------
# Redex classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SendShape:
    target: Pid
    payload: Value


@dataclass(frozen=True)
class Exit2Shape:
    target: Pid
    reason: Value


@dataclass(frozen=True)
class Exit1Shape:
    reason: Value


@dataclass(frozen=True)
class LinkShape:
    target: Pid


@dataclass(frozen=True)
class UnlinkShape:
    target: Pid


@dataclass(frozen=True)
class SelfShape:
    pass


@dataclass(frozen=True)
class SpawnShape:
    fn: Value
    args: Value


@dataclass(frozen=True)
class FlagShape:
    value: Value


Shape = Union[
    SendShape, Exit2Shape, Exit1Shape, LinkShape, UnlinkShape, SelfShape, SpawnShape, FlagShape
]


@dataclass(frozen=True)
class Tau:
    pass


@dataclass(frozen=True)
class FinalValue:
    value: Value


@dataclass(frozen=True)
class ReceiveExp:
    pass


@dataclass(frozen=True)
class ConcDispatch:
    bif: str
    shape: Shape


@dataclass(frozen=True)
class Stuck:
    reason: str


RedexClass = Union[Tau, FinalValue, ReceiveExp, ConcDispatch, Stuck]


# ---------------------------------------------------------------------------
# One-step reduction
# ---------------------------------------------------------------------------

# Rule tags name the Figure-style rule that fired; the prefix is the rule
# category (push / shift / pop), which the shape-discipline tests count.
StepResult = Optional[tuple[FrameStack, Expr]]


def seq_step_tagged(stack: FrameStack, expr: Expr) -> Optional[tuple[FrameStack, Expr, str]]:
    match expr:
        case Let(var, bound, body):
            return ((LetF(var, body),) + stack, bound, "push:let")
        case ConsE(head, tail):
            return ((ConsTail(head),) + stack, tail, "push:cons")
        case Apply(fn, args):
            return ((ApplyFun(args),) + stack, fn, "push:apply")
        case Call(fn, args):
            return ((CallFun(args),) + stack, fn, "push:call")
        case Letrec(fid, params, fun_body, body):
            closure = Fun(fid, params, fun_body)
            return (stack, subst(body, {fid: closure}), "letrec")
        case Case(scrut, pat, then_e, else_e):
            return ((CaseF(pat, then_e, else_e),) + stack, scrut, "push:case")
        case Lit(v):
            return _step_value(stack, v)
        case _:
            # Var / FunRef / Receive: no sequential rule.
            return None


def _step_value(stack: FrameStack, v: Value) -> Optional[tuple[FrameStack, Expr, str]]:
    if not stack:
        return None
    top, rest = stack[0], stack[1:]
    match top:
        case ApplyFun(args):
            if args:
                return ((ApplyArgs(v, (), args[1:]),) + rest, args[0], "shift:apply-fun")
            # Zero-argument application reduces immediately.
            if isinstance(v, Fun) and v.id.arity == 0:
                return (rest, subst(v.body, {v.id: v}), "pop:apply0")
            return None
        case CallFun(args):
            if args:
                return ((CallArgs(v, (), args[1:]),) + rest, args[0], "shift:call-fun")
            # A completed zero-argument call is a dispatch point ('self').
            return None
        case ApplyArgs(fn, done, todo):
            if todo:
                return ((ApplyArgs(fn, done + (v,), todo[1:]),) + rest, todo[0], "shift:apply-arg")
            argv = done + (v,)
            if isinstance(fn, Fun) and fn.id.arity == len(argv):
                bindings: dict = {fn.id: fn}
                bindings.update(zip(fn.params, argv))
                return (rest, subst(fn.body, bindings), "pop:apply")
            return None
        case CallArgs(fn, done, todo):
            if todo:
                return ((CallArgs(fn, done + (v,), todo[1:]),) + rest, todo[0], "shift:call-arg")
            if fn == A_PLUS and len(done) == 1:
                match done[0], v:
                    case Int(i1), Int(i2):
                        return (rest, Lit(Int(i1 + i2)), "pop:add")
            return None
        case LetF(var, body):
            return (rest, subst(body, {var: v}), "pop:let")
        case ConsTail(head):
            return ((ConsHead(v),) + rest, head, "shift:cons")
        case ConsHead(tail):
            return (rest, Lit(Cons(v, tail)), "pop:cons")
        case CaseF(pat, then_e, else_e):
            if is_match(pat, v):
                return (rest, subst(then_e, match_bind(pat, v)), "pop:case-match")
            return (rest, else_e, "pop:case-else")
    return None


def seq_step(stack: FrameStack, expr: Expr) -> StepResult:
    """One sequential step, or None when no computational rule applies."""
    out = seq_step_tagged(stack, expr)
    if out is None:
        return None
    new_stack, new_expr, _tag = out
    return new_stack, new_expr


# ---------------------------------------------------------------------------
# Classification of irreducible configurations
# ---------------------------------------------------------------------------


def classify_redex(stack: FrameStack, expr: Expr) -> RedexClass:
    """Exactly one class per configuration; Tau iff ``seq_step`` applies."""
    if seq_step_tagged(stack, expr) is not None:
        return Tau()
    match expr:
        case Receive(_):
            return ReceiveExp()
        case Lit(v):
            if not stack:
                return FinalValue(v)
            return _classify_stopped_value(stack[0], v)
        case _:
            return Stuck(f"unbound name in redex: {expr!r}")


def _classify_stopped_value(top: Frame, v: Value) -> RedexClass:
    match top:
        case CallFun(()):
            if v == A_SELF:
                return ConcDispatch("self", SelfShape())
            return Stuck(f"zero-argument call of {v!r} is not a known BIF")
        case CallArgs(Atom(name), done, ()):
            return _classify_call(name, done, v)
        case CallArgs(fn, _, ()):
            return Stuck(f"call of non-atom callee {fn!r}")
        case ApplyFun(()):
            return Stuck("apply of a non-function or wrong arity")
        case ApplyArgs(fn, done, ()):
            if not isinstance(fn, Fun):
                return Stuck("apply of a non-function")
            return Stuck(
                f"arity mismatch: {fn.id.name}/{fn.id.arity} applied to {len(done) + 1} arguments"
            )
    return Stuck("no rule for this configuration")


def _classify_call(name: str, done: tuple[Value, ...], v: Value) -> RedexClass:
    arity = len(done) + 1
    if name == "!" and arity == 2:
        if isinstance(done[0], Pid):
            return ConcDispatch("!", SendShape(done[0], v))
        return Stuck("message send to a non-pid destination")
    if name == "exit" and arity == 2:
        if isinstance(done[0], Pid):
            return ConcDispatch("exit", Exit2Shape(done[0], v))
        return Stuck("exit signal to a non-pid destination")
    if name == "exit" and arity == 1:
        return ConcDispatch("exit", Exit1Shape(v))
    if name == "link" and arity == 1:
        if isinstance(v, Pid):
            return ConcDispatch("link", LinkShape(v))
        return Stuck("link to a non-pid")
    if name == "unlink" and arity == 1:
        if isinstance(v, Pid):
            return ConcDispatch("unlink", UnlinkShape(v))
        return Stuck("unlink of a non-pid")
    if name == "spawn" and arity == 2:
        return ConcDispatch("spawn", SpawnShape(done[0], v))
    if name == "process_flag" and arity == 2:
        if done[0] == A_TRAP_EXIT:
            return ConcDispatch("process_flag", FlagShape(v))
        return Stuck(f"process_flag {done[0]!r} is not supported")
    if name == "+":
        return Stuck("'+' needs exactly two integer arguments")
    return Stuck(f"unknown BIF '{name}'/{arity}")


# ---------------------------------------------------------------------------
# Fuel-bounded driver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Finished:
    value: Value


@dataclass(frozen=True)
class SuspendedEval:
    stack: FrameStack
    expr: Expr
    redex_class: RedexClass


@dataclass(frozen=True)
class OutOfFuel:
    stack: FrameStack
    expr: Expr


EvalOutcome = Union[Finished, SuspendedEval, OutOfFuel]


def seq_eval(stack: FrameStack, expr: Expr, fuel: int) -> EvalOutcome:
    """Iterate ``seq_step`` until it stops or ``fuel`` steps have been taken."""
    if fuel < 0:
        raise ValueError("fuel must be >= 0")
    for _ in range(fuel):
        nxt = seq_step(stack, expr)
        if nxt is None:
            break
        stack, expr = nxt
    else:
        if seq_step(stack, expr) is not None:
            return OutOfFuel(stack, expr)
    cls = classify_redex(stack, expr)
    if isinstance(cls, FinalValue):
        return Finished(cls.value)
    return SuspendedEval(stack, expr, cls)
