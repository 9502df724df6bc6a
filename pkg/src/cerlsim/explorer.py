"""Trace replay, bounded exhaustive exploration, and seeded random runs.

``explore`` unfolds the nondeterministic node relation breadth first
into a finite labelled transition system, deduplicating states by
structural node equality.  States cut off by the depth or state bound
are marked truncated; a truncated state has no outgoing edges in the
LTS even if the semantics could continue, and downstream analyses treat
contact with such states as "unknown at bound" rather than a verdict.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import processes as pr
from .nodes import Node, node_enabled, node_step
from .terms import Lit, Pid, Value

TraceStep = tuple[Pid, pr.Action]
Trace = tuple[TraceStep, ...]


@dataclass(frozen=True)
class ExplorationConfig:
    depth_bound: int = 64
    state_bound: int = 100_000
    tau_only: bool = False

    def __post_init__(self) -> None:
        if self.depth_bound < 0 or self.state_bound < 0:
            raise ValueError("exploration bounds must be >= 0")


@dataclass
class Lts:
    """A finite unfolding of the node step relation."""

    initial: int
    states: list[Node]
    index: dict[Node, int]
    edges: list[tuple[int, Pid, pr.Action, int]]
    truncated: set[int]
    depth: dict[int, int]
    _out: dict[int, list[tuple[Pid, pr.Action, int]]] = field(default_factory=dict)

    def out_edges(self, state: int) -> list[tuple[Pid, pr.Action, int]]:
        if not self._out:
            for src, pid, action, dst in self.edges:
                self._out.setdefault(src, []).append((pid, action, dst))
        return self._out.get(state, [])

    def state_of(self, node: Node) -> Optional[int]:
        return self.index.get(node)

    def terminal_states(self) -> list[int]:
        """States with no outgoing edges that were fully expanded."""
        return [
            i
            for i in range(len(self.states))
            if i not in self.truncated and not self.out_edges(i)
        ]

    def tau_closure(self, state: int) -> tuple[set[int], bool]:
        """States reachable via tau edges only, and whether the closure
        touches a truncated state (making it potentially incomplete)."""
        seen = {state}
        touched = state in self.truncated
        work = [state]
        while work:
            current = work.pop()
            for pid, action, dst in self.out_edges(current):
                if isinstance(action, pr.TauA) and dst not in seen:
                    seen.add(dst)
                    touched = touched or dst in self.truncated
                    work.append(dst)
        return seen, touched


def explore(initial: Node, config: ExplorationConfig = ExplorationConfig()) -> Lts:
    states: list[Node] = [initial]
    index: dict[Node, int] = {initial: 0}
    edges: list[tuple[int, Pid, pr.Action, int]] = []
    truncated: set[int] = set()
    depth: dict[int, int] = {0: 0}
    queue: deque[int] = deque([0])

    while queue:
        current = queue.popleft()
        if depth[current] >= config.depth_bound:
            if _enabled(states[current], config.tau_only):
                truncated.add(current)
            continue
        enabled = _enabled(states[current], config.tau_only)
        if len(states) + len(enabled) > config.state_bound:
            if enabled:
                truncated.add(current)
            continue
        for pid, action in enabled:
            successor = node_step(states[current], pid, action)
            assert successor is not None, "enabled action failed to step"
            target = index.get(successor)
            if target is None:
                target = len(states)
                states.append(successor)
                index[successor] = target
                depth[target] = depth[current] + 1
                queue.append(target)
            edges.append((current, pid, action, target))
    return Lts(0, states, index, edges, truncated, depth)


def _enabled(node: Node, tau_only: bool) -> list[tuple[Pid, pr.Action]]:
    enabled = node_enabled(node)
    if tau_only:
        return [(pid, a) for pid, a in enabled if isinstance(a, pr.TauA)]
    return enabled


# ---------------------------------------------------------------------------
# Trace replay
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReplayResult:
    node: Optional[Node]
    failed_index: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.node is not None


def run_trace(initial: Node, trace: Iterable[TraceStep]) -> ReplayResult:
    """Fold node steps over a trace; report the first disabled index."""
    node = initial
    for i, (pid, action) in enumerate(trace):
        nxt = node_step(node, pid, action)
        if nxt is None:
            return ReplayResult(None, i)
        node = nxt
    return ReplayResult(node)


# ---------------------------------------------------------------------------
# Seeded random scheduling
# ---------------------------------------------------------------------------


def random_run(
    initial: Node, seed: int, max_steps: int
) -> tuple[Node, Trace]:
    """Drive the node with a uniformly random scheduler until quiescence.

    The schedule is a pure function of (initial, seed, max_steps), and
    the returned trace replays to the returned node.
    """
    rng = random.Random(seed)
    node = initial
    trace: list[TraceStep] = []
    for _ in range(max_steps):
        enabled = node_enabled(node)
        if not enabled:
            break
        pid, action = enabled[rng.randrange(len(enabled))]
        stepped = node_step(node, pid, action)
        assert stepped is not None
        node = stepped
        trace.append((pid, action))
    return node, tuple(trace)


# ---------------------------------------------------------------------------
# Summaries
# ---------------------------------------------------------------------------


def terminal_redexes(lts: Lts) -> dict[Pid, set[Value]]:
    """The values each pid held at the moment it terminated normally.

    Termination removes processes from the pool, so the interesting
    "final value" of a process is read off the termination edges, not
    off the terminal states of the transition system.
    """
    out: dict[Pid, set[Value]] = {}
    for src, pid, action, _dst in lts.edges:
        if not isinstance(action, pr.TerminateA):
            continue
        proc = lts.states[src].proc(pid)
        match proc:
            case pr.Live(stack=(), redex=Lit(value)):
                out.setdefault(pid, set()).add(value)
            case _:
                continue
    return out


def live_redex_states(lts: Lts, pid: Pid, value: Value) -> list[int]:
    """States where ``pid`` is live at an empty stack holding ``value``."""
    hits = []
    for i, node in enumerate(lts.states):
        match node.proc(pid):
            case pr.Live(stack=(), redex=Lit(v)) if v == value:
                hits.append(i)
            case _:
                continue
    return hits
