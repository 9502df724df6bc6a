"""Process-local semantics: signals, actions, and single-process steps.

A live process is a frame stack, a redex, a mailbox (oldest message
first), a list of linked pids (duplicates allowed; link arrival
prepends, unlink removes all occurrences) and the trap-exit flag.  A
dead process is the list of exit notifications it still owes to its
links, consumed head first.

``local_apply`` is the labelled one-step relation: at most one
successor exists per (process, action) pair, and ``None`` means the
action is not enabled here.  The inter-process layer is responsible for
only ever firing enabled actions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from . import sequential as sq
from .terms import (
    A_EXIT,
    A_KILL,
    A_KILLED,
    A_NORMAL,
    A_OK,
    A_TRUE,
    Bindings,
    Cons,
    Expr,
    Fun,
    Lit,
    NIL,
    Pattern,
    Pid,
    Receive,
    Value,
    atom_to_bool,
    bool_to_atom,
    is_match,
    match_bind,
    pop_first,
    remove_all,
    subst,
)

# ---------------------------------------------------------------------------
# Signals and actions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Message:
    value: Value


@dataclass(frozen=True)
class ExitSig:
    reason: Value
    from_link: bool


@dataclass(frozen=True)
class LinkSig:
    pass


@dataclass(frozen=True)
class UnlinkSig:
    pass


Signal = Union[Message, ExitSig, LinkSig, UnlinkSig]


@dataclass(frozen=True)
class SendA:
    src: Pid
    dst: Pid
    signal: Signal


@dataclass(frozen=True)
class ArriveA:
    src: Pid
    dst: Pid
    signal: Signal


@dataclass(frozen=True)
class ReceiveA:
    value: Value


@dataclass(frozen=True)
class SelfA:
    pid: Pid


@dataclass(frozen=True)
class SpawnA:
    pid: Pid
    fn: Value
    args: Value


@dataclass(frozen=True)
class TauA:
    pass


@dataclass(frozen=True)
class TerminateA:
    pass


@dataclass(frozen=True)
class FlagA:
    pass


Action = Union[SendA, ArriveA, ReceiveA, SelfA, SpawnA, TauA, TerminateA, FlagA]


# ---------------------------------------------------------------------------
# Processes
# ---------------------------------------------------------------------------

Mailbox = tuple[Value, ...]


@dataclass(frozen=True)
class Live:
    stack: sq.FrameStack
    redex: Expr
    mailbox: Mailbox
    links: tuple[Pid, ...]
    trap_exit: bool


@dataclass(frozen=True)
class Dead:
    obligations: tuple[tuple[Pid, Value], ...]


Process = Union[Live, Dead]


# ---------------------------------------------------------------------------
# Exit-signal decision procedure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Drop:
    pass


@dataclass(frozen=True)
class TerminateWith:
    reason: Value


@dataclass(frozen=True)
class ConvertToMessage:
    pass


@dataclass(frozen=True)
class NoRule:
    pass


ExitOutcome = Union[Drop, TerminateWith, ConvertToMessage, NoRule]


def exit_decision(
    trap: bool,
    reason: Value,
    from_link: bool,
    src: Pid,
    self_pid: Pid,
    links: tuple[Pid, ...],
) -> ExitOutcome:
    """Decide what an arriving exit signal does to a live process.

    The three outcomes (drop / terminate / convert to mailbox message)
    have mutually exclusive conditions.  An explicitly sent 'kill'
    (from_link false) always terminates with reason 'killed', even for
    trapping processes; a 'kill' delivered through a link has no such
    privilege.  One configuration is left without any outcome: a signal
    carried by a link from the process itself while it is not in its own
    link list, unless it is a non-trapped 'normal' exit.  For those,
    NoRule keeps the arrival disabled and the signal stays in transit.
    """
    linked = src in links
    is_self = src == self_pid
    normal = reason == A_NORMAL

    if (not is_self and not trap and normal) or (not linked and from_link and not is_self):
        return Drop()
    if reason == A_KILL and not from_link:
        return TerminateWith(A_KILLED)
    if not trap and not normal and (not from_link or linked):
        return TerminateWith(reason)
    if not trap and normal and is_self:
        return TerminateWith(A_NORMAL)
    if trap and ((not from_link and reason != A_KILL) or (from_link and linked)):
        return ConvertToMessage()
    return NoRule()


def exit_converted_message(src: Pid, reason: Value) -> Value:
    """The mailbox form of a trapped exit: the list ['EXIT', source, reason]."""
    return Cons(A_EXIT, Cons(src, Cons(reason, NIL)))


# ---------------------------------------------------------------------------
# Receive selection
# ---------------------------------------------------------------------------


def receive_select(
    mailbox: Mailbox, clauses: tuple[tuple[Pattern, Expr], ...]
) -> Optional[tuple[int, Value, Bindings]]:
    """Pick the oldest message matching any clause, with the first such clause.

    None means no message matches anything and the receive blocks.
    """
    for msg in mailbox:
        for idx, (pat, _body) in enumerate(clauses):
            if is_match(pat, msg):
                return idx, msg, match_bind(pat, msg)
    return None


# ---------------------------------------------------------------------------
# The labelled process-local relation
# ---------------------------------------------------------------------------


def local_apply(proc: Process, action: Action) -> Optional[Process]:
    """Apply one action to one process; None when the action is disabled."""
    match proc:
        case Live() as p:
            return _apply_live(p, action)
        case Dead(obligations):
            match action:
                case SendA(_, dst, ExitSig(reason, True)) if obligations and obligations[
                    0
                ] == (dst, reason):
                    return Dead(obligations[1:])
            return None
    return None


def _apply_live(p: Live, action: Action) -> Optional[Process]:
    match action:
        case TauA():
            nxt = sq.seq_step(p.stack, p.redex)
            if nxt is None:
                return None
            stack, redex = nxt
            return Live(stack, redex, p.mailbox, p.links, p.trap_exit)

        case ArriveA(src, dst, signal):
            return _arrive(p, src, dst, signal)

        case SendA(_src, dst, signal):
            cls = sq.classify_redex(p.stack, p.redex)
            if not isinstance(cls, sq.ConcDispatch):
                return None
            rest = p.stack[1:]
            match cls.shape, signal:
                case sq.SendShape(target, payload), Message(v) if target == dst and payload == v:
                    return Live(rest, Lit(v), p.mailbox, p.links, p.trap_exit)
                case sq.Exit2Shape(target, reason), ExitSig(r, False) if (
                    target == dst and reason == r
                ):
                    return Live(rest, Lit(A_TRUE), p.mailbox, p.links, p.trap_exit)
                case sq.LinkShape(target), LinkSig() if target == dst:
                    return Live(rest, Lit(A_OK), p.mailbox, (dst,) + p.links, p.trap_exit)
                case sq.UnlinkShape(target), UnlinkSig() if target == dst:
                    return Live(
                        rest, Lit(A_OK), p.mailbox, remove_all(dst, p.links), p.trap_exit
                    )
            return None

        case SelfA(pid):
            cls = sq.classify_redex(p.stack, p.redex)
            if isinstance(cls, sq.ConcDispatch) and isinstance(cls.shape, sq.SelfShape):
                return Live(p.stack[1:], Lit(pid), p.mailbox, p.links, p.trap_exit)
            return None

        case SpawnA(pid, fn, args):
            cls = sq.classify_redex(p.stack, p.redex)
            if (
                isinstance(cls, sq.ConcDispatch)
                and isinstance(cls.shape, sq.SpawnShape)
                and cls.shape.fn == fn
                and cls.shape.args == args
                and isinstance(fn, Fun)
            ):
                return Live(p.stack[1:], Lit(pid), p.mailbox, p.links, p.trap_exit)
            return None

        case ReceiveA(value):
            return _receive(p, value)

        case FlagA():
            cls = sq.classify_redex(p.stack, p.redex)
            if isinstance(cls, sq.ConcDispatch) and isinstance(cls.shape, sq.FlagShape):
                new_flag = atom_to_bool(cls.shape.value)
                if new_flag is None:
                    return None
                old = bool_to_atom(p.trap_exit)
                return Live(p.stack[1:], Lit(old), p.mailbox, p.links, new_flag)
            return None

        case TerminateA():
            cls = sq.classify_redex(p.stack, p.redex)
            if isinstance(cls, sq.FinalValue):
                return Dead(tuple((pid, A_NORMAL) for pid in p.links))
            if isinstance(cls, sq.ConcDispatch) and isinstance(cls.shape, sq.Exit1Shape):
                reason = cls.shape.reason
                return Dead(tuple((pid, reason) for pid in p.links))
            return None

    return None


def _arrive(p: Live, src: Pid, dst: Pid, signal: Signal) -> Optional[Process]:
    match signal:
        case Message(v):
            return Live(p.stack, p.redex, p.mailbox + (v,), p.links, p.trap_exit)
        case LinkSig():
            return Live(p.stack, p.redex, p.mailbox, (src,) + p.links, p.trap_exit)
        case UnlinkSig():
            return Live(p.stack, p.redex, p.mailbox, remove_all(src, p.links), p.trap_exit)
        case ExitSig(reason, from_link):
            # The arrival action's destination pid is this process.
            return _arrive_exit(p, src, dst, reason, from_link)
    return None


def _arrive_exit(p: Live, src: Pid, dst: Pid, reason: Value, from_link: bool) -> Optional[Process]:
    outcome = exit_decision(p.trap_exit, reason, from_link, src, dst, p.links)
    match outcome:
        case Drop():
            return p
        case TerminateWith(final_reason):
            return Dead(tuple((pid, final_reason) for pid in p.links))
        case ConvertToMessage():
            msg = exit_converted_message(src, reason)
            return Live(p.stack, p.redex, p.mailbox + (msg,), p.links, p.trap_exit)
        case _:
            return None


def _receive(p: Live, value: Value) -> Optional[Process]:
    if not isinstance(p.redex, Receive):
        return None
    selected = receive_select(p.mailbox, p.redex.clauses)
    if selected is None:
        return None
    idx, msg, bindings = selected
    if msg != value:
        return None
    _pat, body = p.redex.clauses[idx]
    return Live(
        p.stack,
        subst(body, bindings),
        pop_first(msg, p.mailbox),
        p.links,
        p.trap_exit,
    )


def local_enabled(proc: Process, self_pid: Pid, fresh_pid: Pid = Pid(0)) -> list[Action]:
    """Enabled non-arrival actions of one process.

    Spawn and self actions need identifiers that only the node layer
    knows; callers pass the fresh pid to fill into spawn templates.
    """
    match proc:
        case Dead(obligations):
            if obligations:
                dst, reason = obligations[0]
                return [SendA(self_pid, dst, ExitSig(reason, True))]
            return []
        case Live() as p:
            cls = sq.classify_redex(p.stack, p.redex)
            match cls:
                case sq.Tau():
                    return [TauA()]
                case sq.FinalValue(_):
                    return [TerminateA()]
                case sq.ReceiveExp():
                    selected = _receive_selection(p)
                    return [ReceiveA(selected)] if selected is not None else []
                case sq.ConcDispatch(_, shape):
                    return _dispatch_actions(p, shape, self_pid, fresh_pid)
                case sq.Stuck(_):
                    return []
    return []


def _receive_selection(p: Live) -> Optional[Value]:
    assert isinstance(p.redex, Receive)
    selected = receive_select(p.mailbox, p.redex.clauses)
    return selected[1] if selected is not None else None


def _dispatch_actions(
    p: Live, shape: sq.Shape, self_pid: Pid, fresh_pid: Pid
) -> list[Action]:
    match shape:
        case sq.SendShape(target, payload):
            return [SendA(self_pid, target, Message(payload))]
        case sq.Exit2Shape(target, reason):
            return [SendA(self_pid, target, ExitSig(reason, False))]
        case sq.Exit1Shape(_):
            return [TerminateA()]
        case sq.LinkShape(target):
            return [SendA(self_pid, target, LinkSig())]
        case sq.UnlinkShape(target):
            return [SendA(self_pid, target, UnlinkSig())]
        case sq.SelfShape():
            return [SelfA(self_pid)]
        case sq.SpawnShape(fn, args):
            if isinstance(fn, Fun):
                return [SpawnA(fresh_pid, fn, args)]
            return []
        case sq.FlagShape(value):
            if atom_to_bool(value) is not None:
                return [FlagA()]
            return []
    return []
