"""Bisimulation and weak bisimulation checks over explored state spaces.

Both checkers work on finite LTS fragments produced by the explorer.
Strong bisimulation demands every labelled move be answered by the very
same (pid, action) move; the weak variant lets the answer be wrapped in
tau moves and puts no requirement on tau moves themselves.  Whenever a
check would need to look past a truncated state, the verdict degrades
to "unknown at bound" instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from . import processes as pr
from .explorer import ExplorationConfig, Lts, explore
from .nodes import Node, node_enabled, node_step
from .terms import Pid

Move = tuple[Pid, pr.Action]
NodePair = tuple[Node, Node]


@dataclass(frozen=True)
class Holds:
    witness: frozenset[NodePair]


@dataclass(frozen=True)
class FailsAt:
    pair: NodePair
    move: Move
    reason: str


@dataclass(frozen=True)
class UnknownAtBound:
    pairs: frozenset[NodePair]


BisimReport = Union[Holds, FailsAt, UnknownAtBound]


def _pair_ids(
    relation: Iterable[NodePair], lts1: Lts, lts2: Lts
) -> list[tuple[int, int, NodePair]]:
    out = []
    for n1, n2 in relation:
        i1, i2 = lts1.state_of(n1), lts2.state_of(n2)
        if i1 is None or i2 is None:
            raise ValueError("relation mentions a node outside the explored spaces")
        out.append((i1, i2, (n1, n2)))
    return out


# ---------------------------------------------------------------------------
# Strong bisimulation
# ---------------------------------------------------------------------------


def check_bisimulation(relation: Iterable[NodePair], lts1: Lts, lts2: Lts) -> BisimReport:
    """Check the two clauses of a (strong) bisimulation for a given relation."""
    pairs = _pair_ids(relation, lts1, lts2)
    members = {(i1, i2) for i1, i2, _ in pairs}
    unknown: set[NodePair] = set()
    for i1, i2, nodes in pairs:
        for side, (a, la, b, lb) in enumerate(((i1, lts1, i2, lts2), (i2, lts2, i1, lts1))):
            if a in la.truncated or b in lb.truncated:
                unknown.add(nodes)
                continue
            answers: dict[Move, int] = {(pid, act): dst for pid, act, dst in lb.out_edges(b)}
            for pid, action, a_next in la.out_edges(a):
                b_next = answers.get((pid, action))
                ok = b_next is not None and (
                    (a_next, b_next) in members if side == 0 else (b_next, a_next) in members
                )
                if not ok:
                    return FailsAt(
                        nodes,
                        (pid, action),
                        "move has no matching answer with related successors"
                        if b_next is None
                        else "matching answer leads outside the relation",
                    )
    if unknown:
        return UnknownAtBound(frozenset(unknown))
    return Holds(frozenset(n for _, _, n in pairs))


# ---------------------------------------------------------------------------
# Weak bisimulation
# ---------------------------------------------------------------------------


class _WeakSide:
    """Per-LTS caches: tau closures and weak successor sets."""

    def __init__(self, lts: Lts):
        self.lts = lts
        self._closure: dict[int, tuple[set[int], bool]] = {}
        self._weak: dict[tuple[int, Move], tuple[set[int], bool]] = {}

    def closure(self, state: int) -> tuple[set[int], bool]:
        cached = self._closure.get(state)
        if cached is None:
            cached = self.lts.tau_closure(state)
            self._closure[state] = cached
        return cached

    def weak_successors(self, state: int, move: Move) -> tuple[set[int], bool]:
        """States reachable as tau* ; move ; tau*, plus a truncation flag."""
        key = (state, move)
        cached = self._weak.get(key)
        if cached is not None:
            return cached
        pre, tainted = self.closure(state)
        found: set[int] = set()
        for t in pre:
            if t in self.lts.truncated:
                tainted = True
                continue
            for pid, action, dst in self.lts.out_edges(t):
                if (pid, action) == move:
                    post, post_taint = self.closure(dst)
                    found |= post
                    tainted = tainted or post_taint
        result = (found, tainted)
        self._weak[key] = result
        return result


def _is_tau(action: pr.Action) -> bool:
    return isinstance(action, pr.TauA)


def check_weak_bisimulation(
    relation: Iterable[NodePair], lts1: Lts, lts2: Lts
) -> BisimReport:
    """Check the weak bisimulation clauses: non-tau moves answered by
    tau*-move-tau* on the other side, landing back inside the relation."""
    pairs = _pair_ids(relation, lts1, lts2)
    members = {(i1, i2) for i1, i2, _ in pairs}
    side1, side2 = _WeakSide(lts1), _WeakSide(lts2)
    unknown: set[NodePair] = set()
    for i1, i2, nodes in pairs:
        for flip, (a, sa, b, sb) in enumerate(((i1, side1, i2, side2), (i2, side2, i1, side1))):
            if a in sa.lts.truncated:
                unknown.add(nodes)
                continue
            for pid, action, a_next in sa.lts.out_edges(a):
                if _is_tau(action):
                    continue
                candidates, tainted = sb.weak_successors(b, (pid, action))
                related = any(
                    ((a_next, c) in members if flip == 0 else (c, a_next) in members)
                    for c in candidates
                )
                if related:
                    continue
                if tainted:
                    unknown.add(nodes)
                    continue
                return FailsAt(
                    nodes,
                    (pid, action),
                    "no tau*-move-tau* answer stays inside the relation",
                )
    if unknown:
        return UnknownAtBound(frozenset(unknown))
    return Holds(frozenset(n for _, _, n in pairs))


# ---------------------------------------------------------------------------
# Tau reachability over nodes
# ---------------------------------------------------------------------------


def tau_reach(node: Node, bound: int) -> set[Node]:
    """All nodes reachable by at most ``bound`` tau steps of any process."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    seen = {node}
    frontier = [node]
    for _ in range(bound):
        nxt: list[Node] = []
        for current in frontier:
            for pid, action in node_enabled(current):
                if not isinstance(action, pr.TauA):
                    continue
                successor = node_step(current, pid, action)
                if successor is not None and successor not in seen:
                    seen.add(successor)
                    nxt.append(successor)
        if not nxt:
            break
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# On-the-fly equivalence decision
# ---------------------------------------------------------------------------


def weakly_bisimilar(
    left: Node, right: Node, config: ExplorationConfig = ExplorationConfig()
) -> BisimReport:
    """Greatest-fixpoint weak bisimilarity over two bounded explorations.

    Starts from the full product of explored states and removes pairs
    with a definitely unanswerable move: a non-tau move must be answered
    by tau*-move-tau*, a tau move by tau* (possibly zero steps), with the
    successor pair still in the relation.  The tau clause makes the
    fixpoint the standard weak bisimilarity, which is strictly stronger
    than the per-relation check: every witness it produces also passes
    ``check_weak_bisimulation``.  Pairs whose analysis touches the
    exploration bound are tainted: they can survive, but they support
    neither a Holds verdict nor a removal.
    """
    lts1 = explore(left, config)
    lts2 = explore(right, config)
    side1, side2 = _WeakSide(lts1), _WeakSide(lts2)

    alive: set[tuple[int, int]] = {
        (i, j) for i in range(len(lts1.states)) for j in range(len(lts2.states))
    }
    tainted: set[tuple[int, int]] = {
        (i, j)
        for (i, j) in alive
        if i in lts1.truncated or j in lts2.truncated
    }
    # For removed pairs: the unanswerable move, the pair it belongs to.
    culprit: dict[tuple[int, int], tuple[tuple[int, int], Move]] = {}

    changed = True
    while changed:
        changed = False
        for pair in sorted(alive):
            if pair not in alive:
                continue
            i, j = pair
            fail: Optional[tuple[tuple[int, int], Move]] = None
            taint = pair in tainted
            for flip, (a, sa, b, sb) in enumerate(
                ((i, side1, j, side2), (j, side2, i, side1))
            ):
                if a in sa.lts.truncated:
                    taint = True
                    continue
                for pid, action, a_next in sa.lts.out_edges(a):
                    move = (pid, action)
                    if _is_tau(action):
                        candidates, cand_taint = sb.closure(b)
                    else:
                        candidates, cand_taint = sb.weak_successors(b, move)
                    pairs_for = (
                        [(a_next, c) for c in candidates]
                        if flip == 0
                        else [(c, a_next) for c in candidates]
                    )
                    live_answers = [q for q in pairs_for if q in alive]
                    if any(q not in tainted for q in live_answers):
                        continue
                    if live_answers or cand_taint:
                        taint = True
                        continue
                    if _is_tau(action):
                        # A tau move always has candidate pairs (the zero-step
                        # answer); all of them died, so inherit a culprit,
                        # preferring the pair where only this side advanced.
                        stay_put = (a_next, j) if flip == 0 else (i, a_next)
                        fail = culprit.get(stay_put) or next(
                            (culprit[q] for q in pairs_for if q in culprit),
                            (pair, move),
                        )
                    else:
                        fail = (pair, move)
                    break
                if fail is not None:
                    break
            if fail is not None:
                alive.discard(pair)
                tainted.discard(pair)
                culprit[pair] = fail
                changed = True
            elif taint and pair not in tainted:
                tainted.add(pair)
                changed = True

    root = (0, 0)
    if root not in alive:
        (ci, cj), move = culprit[root]
        return FailsAt(
            (lts1.states[ci], lts2.states[cj]),
            move,
            "unanswerable move on a pair forced by the initial states",
        )
    if root in tainted:
        pairs = frozenset(
            (lts1.states[i], lts2.states[j]) for (i, j) in tainted if (i, j) in alive
        )
        return UnknownAtBound(pairs)
    witness = frozenset(
        (lts1.states[i], lts2.states[j]) for (i, j) in alive if (i, j) not in tainted
    )
    return Holds(witness)
