"""Acceptance criteria, one test per criterion.

Every test prints one [PASS]/[FAIL] line (run pytest with -s to watch);
tolerances and case counts are pinned here and are not configurable.
"""

import random
import time

import pytest

from cerlsim import processes as pr
from cerlsim import props
from cerlsim.bisim import (
    FailsAt,
    Holds,
    check_bisimulation,
    check_weak_bisimulation,
    weakly_bisimilar,
)
from cerlsim.corpus import (
    exit_node,
    int_list_value,
    let_zero_node,
    mm_context_node,
    signal_order_node,
)
from cerlsim.explorer import ExplorationConfig, explore, live_redex_states, terminal_redexes
from cerlsim.generators import random_node, random_value
from cerlsim.nodes import EMPTY_ETHER, make_ether, node_step
from cerlsim.parser import print_value
from cerlsim.sequential import Finished, seq_eval
from cerlsim.terms import Atom, Lit, Pid, cons_list

AMPLE = ExplorationConfig(depth_bound=250, state_bound=60_000)


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" -- {detail}" if detail else ""
    print(f"[{status}] {name}{suffix}")
    assert ok, f"{name}{suffix}"


def ample_corpus():
    """Fully explored LTSs: the demonstration nodes plus 20 random nodes."""
    rng = random.Random(2024)
    nodes = [signal_order_node(), exit_node(True), exit_node(False)]
    nodes += [random_node(rng) for _ in range(20)]
    out = []
    for node in nodes:
        lts = explore(node, AMPLE)
        assert not lts.truncated, "corpus node did not fully explore"
        out.append(lts)
    return out


class TestAcceptance:
    def test_example2_mapping_program(self, capsys):
        with open("programs/mm.cerl", "r", encoding="utf-8") as handle:
            source = handle.read()
        from cerlsim.parser import parse_expr

        started = time.monotonic()
        outcome = seq_eval((), parse_expr(source), 1_000_000)
        elapsed = time.monotonic() - started
        ok = (
            outcome == Finished(int_list_value(1, 2, 3))
            and print_value(outcome.value) == "[1, 2, 3]"
            and elapsed < 1.0
        )
        with capsys.disabled():
            report("example-2: mapping program evaluates to [1, 2, 3]", ok, f"{elapsed:.3f}s")

    def test_example3_both_interleavings(self, capsys):
        started = time.monotonic()
        lts = explore(signal_order_node(), ExplorationConfig(depth_bound=40, state_bound=60_000))
        finals = terminal_redexes(lts).get(Pid(3), set())
        elapsed = time.monotonic() - started
        ok = (
            {Atom("fst"), Atom("snd")} <= finals
            and not lts.truncated
            and elapsed < 10.0
        )
        with capsys.disabled():
            report(
                "example-3: pid 3 can terminate holding 'fst' and 'snd'",
                ok,
                f"{len(lts.states)} states, {elapsed:.2f}s",
            )

    def test_example4_exit_variants(self, capsys):
        started = time.monotonic()
        lts2 = explore(exit_node(True), ExplorationConfig(depth_bound=40))
        hits2 = live_redex_states(lts2, Pid(2), cons_list(Atom("EXIT"), Pid(1), Atom("killed")))
        lts1 = explore(exit_node(False), ExplorationConfig(depth_bound=40))
        hits1 = live_redex_states(lts1, Pid(2), cons_list(Atom("EXIT"), Pid(1), Atom("kill")))
        elapsed = time.monotonic() - started
        ok = bool(hits2) and bool(hits1) and elapsed < 10.0
        with capsys.disabled():
            report(
                "example-4: exit/2 reaches ['EXIT', #1, 'killed'], exit/1 reaches ['EXIT', #1, 'kill']",
                ok,
                f"{elapsed:.2f}s",
            )

    def test_theorem1_determinism(self, capsys):
        seq = props.sequential_determinism(seed=101, cases=1000)
        loc = props.local_determinism(seed=102, cases=1000)
        ok = seq.ok and loc.ok and seq.cases >= 1000 and loc.cases >= 1000
        with capsys.disabled():
            report(
                "theorem-1: determinism (1000 sequential + 1000 process cases)",
                ok,
                "; ".join((seq.line(), loc.line())),
            )

    def test_exit_decision_table(self, capsys):
        result = props.exit_table()
        ok = result.ok and result.cases == 64
        with capsys.disabled():
            report("exit decision table: 64 cases, exclusive rules, documented gaps", ok)

    def test_theorem2_signal_ordering(self, capsys):
        result = props.signal_ordering(seed=103, cases=500)
        ok = result.ok and result.cases >= 500
        with capsys.disabled():
            report("theorem-2: signal ordering over 500 two-send scenarios", ok)

    def test_theorems_3_to_6_instances(self, capsys):
        started = time.monotonic()
        lts_set = props.corpus_lts_set(seed=104, extra=20, depth=12)
        results = [
            props.tau_confluence_local(seed=105, cases=300),
            props.tau_confluence_node(lts_set),
            props.action_ordering(lts_set),
            props.chaining(lts_set),
            props.sequential_confluence(lts_set),
        ]
        elapsed = time.monotonic() - started
        ok = all(r.ok for r in results) and elapsed < 300.0
        with capsys.disabled():
            report(
                "theorems-3-6: confluence, action ordering, chaining instances",
                ok,
                f"{sum(r.cases for r in results)} cases, {elapsed:.1f}s",
            )

    def test_theorem7_identity_is_bisimulation(self, capsys):
        failures = []
        corpus = ample_corpus()
        for i, lts in enumerate(corpus):
            relation = {(state, state) for state in lts.states}
            verdict = check_bisimulation(relation, lts, lts)
            if not isinstance(verdict, Holds):
                failures.append(f"lts {i}: {type(verdict).__name__}")
        with capsys.disabled():
            report(
                "theorem-7: identity passes the strong check on every corpus LTS",
                not failures,
                f"{len(corpus)} spaces",
            )

    def test_theorem8_mapping_equivalence_under_contexts(self, capsys):
        rng = random.Random(106)
        started = time.monotonic()
        failures = []
        for i in range(10):
            pid = rng.randrange(1, 5)
            queues = {}
            for _ in range(rng.randrange(0, 3)):
                src = Pid(rng.randrange(6, 9))
                kind = rng.randrange(3)
                if kind == 0:
                    signal = pr.Message(random_value(rng, 1, (pid,)))
                elif kind == 1:
                    signal = pr.ExitSig(Atom(rng.choice(("x", "normal"))), False)
                else:
                    signal = pr.LinkSig()
                queues.setdefault((src, Pid(pid)), []).append(signal)
            kwargs = dict(
                ether=make_ether(queues) if queues else EMPTY_ETHER,
                mailbox=tuple(random_value(rng, 1, (pid,)) for _ in range(rng.randrange(0, 3))),
                links=tuple(rng.randrange(6, 9) for _ in range(rng.randrange(0, 3))),
                trap_exit=rng.random() < 0.5,
            )
            left = mm_context_node(pid, **kwargs)
            right = mm_context_node(pid, finished=True, **kwargs)
            verdict = weakly_bisimilar(left, right, AMPLE)
            if not isinstance(verdict, Holds):
                failures.append(f"context {i}: {type(verdict).__name__}")
        elapsed = time.monotonic() - started
        with capsys.disabled():
            report(
                "theorem-8: mapping program weakly bisimilar to [1, 2, 3] in 10 contexts",
                not failures,
                f"{elapsed:.1f}s" + ("; " + "; ".join(failures) if failures else ""),
            )

    def test_theorem9_fixed_trace_counterexample(self, capsys):
        origin = let_zero_node(ether_kill=True)
        successor = origin
        for _ in range(2):
            successor = node_step(successor, Pid(0), pr.TauA())
        lts1 = explore(origin, AMPLE)
        lts2 = explore(successor, AMPLE)
        verdict = check_weak_bisimulation({(origin, successor)}, lts1, lts2)
        ok = (
            isinstance(verdict, FailsAt)
            and verdict.move[0] == Pid(0)
            and isinstance(verdict.move[1], pr.ArriveA)
            and verdict.move[1].signal == pr.ExitSig(Atom("kill"), False)
        )
        with capsys.disabled():
            report(
                "theorem-9: fixed-trace relation fails on the kill arrival with a witness",
                ok,
                f"move={verdict.move}" if isinstance(verdict, FailsAt) else str(verdict),
            )

    def test_replay_soundness(self, capsys):
        result = props.replay_soundness(seed=107, runs=1000)
        ok = result.ok and result.cases >= 1000
        with capsys.disabled():
            report("replay soundness: 1000 seeded random runs replay identically", ok)
