import random

import pytest

from cerlsim import processes as pr
from cerlsim.corpus import (
    exit_node,
    int_list_value,
    live,
    signal_order_node,
)
from cerlsim.explorer import (
    ExplorationConfig,
    explore,
    live_redex_states,
    random_run,
    run_trace,
    terminal_redexes,
)
from cerlsim.generators import random_node
from cerlsim.jsonio import load_trace_file
from cerlsim.nodes import EMPTY_NODE, make_node, node_enabled, node_step
from cerlsim.terms import Atom, Int, Lit, Pid, cons_list


class TestRunTrace:
    def test_empty_trace_is_identity(self):
        node = signal_order_node()
        assert run_trace(node, ()) .node == node

    def test_example_trace_reaches_snd_state(self):
        node = signal_order_node()
        trace = load_trace_file("programs/traces/signal_order_snd.trace")
        result = run_trace(node, trace)
        assert result.ok
        p3 = result.node.proc(Pid(3))
        assert isinstance(p3, pr.Live)
        assert p3.stack == () and p3.redex == Lit(Atom("snd")) and p3.mailbox == ()
        # the other message is still in flight
        assert result.node.ether.queue(Pid(1), Pid(2)) == (pr.Message(Atom("fst")),)

    def test_exit_trace_reaches_converted_message(self):
        node = exit_node(two_parameter=True)
        trace = load_trace_file("programs/traces/exit_kill.trace")
        result = run_trace(node, trace)
        assert result.ok
        p2 = result.node.proc(Pid(2))
        assert p2.redex == Lit(cons_list(Atom("EXIT"), Pid(1), Atom("killed")))

    def test_disabled_step_reports_index(self):
        node = signal_order_node()
        bad = ((Pid(2), pr.TauA()),)
        result = run_trace(node, bad)
        assert not result.ok
        assert result.failed_index == 0


class TestExplore:
    def test_empty_node(self):
        lts = explore(EMPTY_NODE)
        assert len(lts.states) == 1
        assert lts.edges == []
        assert lts.truncated == set()

    def test_single_value_process_three_states(self):
        # Hand application: live value -> dead with no obligations -> removed.
        node = make_node({Pid(1): live(Lit(Int(1)))})
        lts = explore(node)
        assert len(lts.states) == 3
        assert len(lts.edges) == 2
        assert lts.states[2] == EMPTY_NODE

    def test_signal_order_reaches_both_outcomes(self):
        lts = explore(signal_order_node(), ExplorationConfig(depth_bound=40))
        finals = terminal_redexes(lts)[Pid(3)]
        assert finals == {Atom("fst"), Atom("snd")}

    def test_exit_examples_reach_exit_messages(self):
        lts2 = explore(exit_node(True), ExplorationConfig(depth_bound=40))
        assert live_redex_states(lts2, Pid(2), cons_list(Atom("EXIT"), Pid(1), Atom("killed")))
        lts1 = explore(exit_node(False), ExplorationConfig(depth_bound=40))
        assert live_redex_states(lts1, Pid(2), cons_list(Atom("EXIT"), Pid(1), Atom("kill")))

    def test_edges_match_enabled_exactly(self):
        lts = explore(signal_order_node(), ExplorationConfig(depth_bound=40))
        for i, node in enumerate(lts.states):
            if i in lts.truncated:
                assert lts.out_edges(i) == []
                continue
            expected = node_enabled(node)
            got = [(pid, action) for pid, action, _dst in lts.out_edges(i)]
            assert got == expected
            for pid, action, dst in lts.out_edges(i):
                assert node_step(node, pid, action) == lts.states[dst]

    def test_depth_bound_marks_truncation(self):
        lts = explore(signal_order_node(), ExplorationConfig(depth_bound=3))
        assert lts.truncated
        for i in lts.truncated:
            assert lts.out_edges(i) == []

    def test_tau_only_restricts_edges(self):
        lts = explore(signal_order_node(), ExplorationConfig(depth_bound=40, tau_only=True))
        assert all(isinstance(a, pr.TauA) for _s, _p, a, _d in lts.edges)
        # pid 1 can do four tau steps before its first send
        assert len(lts.states) == 5

    def test_exploration_covers_random_traces(self):
        rng = random.Random(9)
        node = signal_order_node()
        lts = explore(node, ExplorationConfig(depth_bound=40))
        for seed in range(30):
            final, trace = random_run(node, seed=seed, max_steps=12)
            assert final in lts.index


class TestRandomRun:
    def test_seed_determinism(self):
        node = signal_order_node()
        a = random_run(node, seed=123, max_steps=30)
        b = random_run(node, seed=123, max_steps=30)
        assert a == b

    def test_replays_to_same_node(self):
        rng = random.Random(0)
        for _ in range(40):
            node = random_node(rng)
            final, trace = random_run(node, seed=rng.randrange(10**9), max_steps=25)
            replay = run_trace(node, trace)
            assert replay.ok and replay.node == final

    def test_terminal_outcome_for_signal_order(self):
        outcomes = set()
        for seed in range(40):
            final, trace = random_run(signal_order_node(), seed=seed, max_steps=100)
            assert node_enabled(final) == []
            outcomes.add(len(trace))
        assert outcomes  # runs vary in length but all reach quiescence

    def test_quiescent_node_empty_trace(self):
        final, trace = random_run(EMPTY_NODE, seed=5, max_steps=10)
        assert final == EMPTY_NODE and trace == ()


class TestReproducibility:
    def test_exploration_is_reproducible(self):
        # Two single-threaded explorations of the same node must agree on
        # states and edges exactly (set-equal and, here, list-equal).
        node = signal_order_node()
        a = explore(node, ExplorationConfig(depth_bound=40))
        b = explore(node, ExplorationConfig(depth_bound=40))
        assert a.states == b.states
        assert a.edges == b.edges
        assert a.truncated == b.truncated


class TestShippedScenarios:
    def test_spawn_report_round_trip(self):
        from cerlsim.jsonio import load_node_config_file

        node = load_node_config_file("programs/spawn_report.node")
        lts = explore(node, ExplorationConfig(depth_bound=40))
        assert not lts.truncated
        assert terminal_redexes(lts)[Pid(1)] == {Atom("hello")}
        spawns = [a for _s, _p, a, _d in lts.edges if isinstance(a, pr.SpawnA)]
        assert spawns and all(a.pid == Pid(2) for a in spawns)

    def test_trap_flag_race_has_both_outcomes(self):
        from cerlsim.jsonio import load_node_config_file

        node = load_node_config_file("programs/trap_flag.node")
        lts = explore(node, ExplorationConfig(depth_bound=40))
        assert not lts.truncated
        # flag-first: the exit converts and is received
        assert terminal_redexes(lts)[Pid(1)] == {
            cons_list(Atom("EXIT"), Pid(9), Atom("boom"))
        }
        # arrival-first: the process dies of 'boom' before trapping
        assert any(
            isinstance(state.proc(Pid(1)), pr.Dead) for state in lts.states
        )
