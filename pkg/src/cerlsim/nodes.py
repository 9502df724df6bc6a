"""Inter-process semantics: the ether, process pools, and node steps.

The ether buffers in-flight signals per (source, destination) pid pair;
each pair's queue is FIFO, so signals between one ordered pair of
processes arrive in send order while signals from different sources
interleave freely.  A node is an ether plus a pool of processes.  Both
are kept in a canonical sorted form with no empty queues so that
structurally equal nodes compare and hash equal, which the explorer
relies on for state deduplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from . import processes as pr
from .terms import Apply, Fun, Lit, Pid, list_to_meta

Edge = tuple[Pid, Pid]


@dataclass(frozen=True)
class Ether:
    entries: tuple[tuple[Edge, tuple[pr.Signal, ...]], ...] = ()

    def queue(self, src: Pid, dst: Pid) -> tuple[pr.Signal, ...]:
        for edge, signals in self.entries:
            if edge == (src, dst):
                return signals
        return ()

    def edges(self) -> tuple[tuple[Edge, tuple[pr.Signal, ...]], ...]:
        return self.entries


EMPTY_ETHER = Ether()


def make_ether(queues: Mapping[Edge, Iterable[pr.Signal]]) -> Ether:
    entries = tuple(
        sorted(
            ((edge, tuple(sigs)) for edge, sigs in queues.items() if tuple(sigs)),
            key=lambda item: (item[0][0].id, item[0][1].id),
        )
    )
    return Ether(entries)


def ether_push(ether: Ether, src: Pid, dst: Pid, signal: pr.Signal) -> Ether:
    """Append a signal at the end of the (src, dst) queue."""
    queues = dict(ether.entries)
    key = (src, dst)
    queues[key] = queues.get(key, ()) + (signal,)
    return make_ether(queues)


def ether_pop_first(ether: Ether, src: Pid, dst: Pid) -> Optional[tuple[pr.Signal, Ether]]:
    """Remove the head of the (src, dst) queue; None when it is empty."""
    key = (src, dst)
    for edge, signals in ether.entries:
        if edge == key:
            queues = dict(ether.entries)
            if len(signals) == 1:
                del queues[key]
            else:
                queues[key] = signals[1:]
            return signals[0], make_ether(queues)
    return None


@dataclass(frozen=True)
class Node:
    ether: Ether = EMPTY_ETHER
    procs: tuple[tuple[Pid, pr.Process], ...] = ()

    def proc(self, pid: Pid) -> Optional[pr.Process]:
        for p, process in self.procs:
            if p == pid:
                return process
        return None

    def pids(self) -> tuple[Pid, ...]:
        return tuple(p for p, _ in self.procs)

    def with_proc(self, pid: Pid, process: pr.Process) -> "Node":
        pool = dict(self.procs)
        pool[pid] = process
        return Node(self.ether, _sort_pool(pool))

    def without_proc(self, pid: Pid) -> "Node":
        pool = dict(self.procs)
        pool.pop(pid, None)
        return Node(self.ether, _sort_pool(pool))

    def with_ether(self, ether: Ether) -> "Node":
        return Node(ether, self.procs)


def _sort_pool(pool: Mapping[Pid, pr.Process]) -> tuple[tuple[Pid, pr.Process], ...]:
    return tuple(sorted(pool.items(), key=lambda item: item[0].id))


def make_node(pool: Mapping[Pid, pr.Process], ether: Ether = EMPTY_ETHER) -> Node:
    return Node(ether, _sort_pool(pool))


EMPTY_NODE = Node()


# ---------------------------------------------------------------------------
# Fresh pid selection
# ---------------------------------------------------------------------------


def fresh_pid(node: Node) -> Pid:
    """One past the largest pid in pool keys, ether keys, and link lists."""
    top = 0
    for (src, dst), _signals in node.ether.entries:
        top = max(top, src.id, dst.id)
    for pid, process in node.procs:
        top = max(top, pid.id)
        match process:
            case pr.Live(links=links):
                for link in links:
                    top = max(top, link.id)
            case pr.Dead(obligations):
                for target, _reason in obligations:
                    top = max(top, target.id)
    return Pid(top + 1)


# ---------------------------------------------------------------------------
# Node steps
# ---------------------------------------------------------------------------


def node_step(node: Node, pid: Pid, action: pr.Action) -> Optional[Node]:
    """One labelled inter-process step; exactly one process changes.

    None means the step is disabled: the rule premises fail, the action
    names a different process, or the process-local step does not exist.
    """
    proc = node.proc(pid)
    if proc is None:
        return None

    match action:
        case pr.SendA(src, dst, signal):
            if src != pid:
                return None
            stepped = pr.local_apply(proc, action)
            if stepped is None:
                return None
            return node.with_proc(pid, stepped).with_ether(
                ether_push(node.ether, src, dst, signal)
            )

        case pr.ArriveA(src, dst, signal):
            if dst != pid or not isinstance(proc, pr.Live):
                return None
            popped = ether_pop_first(node.ether, src, dst)
            if popped is None:
                return None
            head, remaining = popped
            if head != signal:
                return None
            stepped = pr.local_apply(proc, action)
            if stepped is None:
                return None
            return node.with_proc(pid, stepped).with_ether(remaining)

        case pr.SpawnA(child, fn, args):
            if node.proc(child) is not None:
                return None
            if not isinstance(fn, Fun):
                return None
            arg_values = list_to_meta(args)
            if arg_values is None or len(arg_values) != fn.id.arity:
                return None
            stepped = pr.local_apply(proc, action)
            if stepped is None:
                return None
            spawned = pr.Live(
                stack=(),
                redex=Apply(Lit(fn), tuple(Lit(v) for v in arg_values)),
                mailbox=(),
                links=(),
                trap_exit=False,
            )
            return node.with_proc(pid, stepped).with_proc(child, spawned)

        case pr.TerminateA():
            if isinstance(proc, pr.Dead):
                # A dead process with no notifications left frees its pid.
                if proc.obligations == ():
                    return node.without_proc(pid)
                return None
            stepped = pr.local_apply(proc, action)
            if stepped is None:
                return None
            return node.with_proc(pid, stepped)

        case pr.SelfA(own):
            if own != pid:
                return None
            stepped = pr.local_apply(proc, action)
            if stepped is None:
                return None
            return node.with_proc(pid, stepped)

        case pr.TauA() | pr.ReceiveA(_) | pr.FlagA():
            stepped = pr.local_apply(proc, action)
            if stepped is None:
                return None
            return node.with_proc(pid, stepped)

    return None


def node_enabled(node: Node) -> list[tuple[Pid, pr.Action]]:
    """All enabled (pid, action) pairs, in a deterministic order.

    Spawn steps are listed once, with the canonical fresh pid; the step
    function itself accepts any unused pid, so reorderings that shift
    which pid is fresh do not disable a previously offered spawn.
    """
    out: list[tuple[Pid, pr.Action]] = []
    fresh = fresh_pid(node)
    for pid, proc in node.procs:
        if isinstance(proc, pr.Dead) and proc.obligations == ():
            out.append((pid, pr.TerminateA()))
            continue
        for action in pr.local_enabled(proc, pid, fresh):
            if isinstance(action, pr.SpawnA):
                arg_values = list_to_meta(action.args)
                if arg_values is None or not isinstance(action.fn, Fun):
                    continue
                if len(arg_values) != action.fn.id.arity:
                    continue
            out.append((pid, action))
    for (src, dst), signals in node.ether.entries:
        target = node.proc(dst)
        if not isinstance(target, pr.Live):
            continue
        arrival = pr.ArriveA(src, dst, signals[0])
        if pr.local_apply(target, arrival) is not None:
            out.append((dst, arrival))
    return out
