import json

import pytest

from cerlsim.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEval:
    def test_mm_program(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "programs/mm.cerl")
        assert code == 0
        assert out.strip() == "[1, 2, 3]"

    def test_fuel_exhaustion(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "programs/loop.cerl", "--fuel", "100")
        assert code == 2
        assert "out of fuel" in out

    def test_json_output(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "programs/mm.cerl", "--json")
        assert code == 0
        assert json.loads(out) == {"outcome": "finished", "value": "[1, 2, 3]"}

    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.cerl"
        bad.write_text("let = in")
        code, _out, err = run_cli(capsys, "eval", str(bad))
        assert code == 3
        assert "error" in err


class TestRun:
    def test_exit_trace(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "programs/exit_kill.node", "--trace", "programs/traces/exit_kill.trace"
        )
        assert code == 0
        doc = json.loads(out)
        (p2,) = [p for p in doc["processes"] if p["pid"] == 2]
        assert p2["redex"] == "['EXIT', #1, 'killed']"

    def test_exit_self_trace(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "run",
            "programs/exit_kill_self.node",
            "--trace",
            "programs/traces/exit_kill_self.trace",
            "--json",
        )
        assert code == 0
        doc = json.loads(out)
        (p2,) = [p for p in doc["node"]["processes"] if p["pid"] == 2]
        assert p2["redex"] == "['EXIT', #1, 'kill']"

    def test_stale_trace_fails_with_index(self, tmp_path, capsys):
        trace = tmp_path / "bad.trace"
        trace.write_text(json.dumps({"trace": [{"pid": 2, "action": {"kind": "tau"}}]}))
        code, out, _ = run_cli(
            capsys, "run", "programs/signal_order.node", "--trace", str(trace), "--json"
        )
        assert code == 1
        assert json.loads(out) == {"outcome": "stuck", "failed_index": 0}


class TestExplore:
    def test_signal_order_summary(self, capsys):
        code, out, _ = run_cli(
            capsys, "explore", "programs/signal_order.node", "--depth", "40", "--json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["truncated"] == 0
        assert sorted(doc["terminal_redexes"]["3"]) == ["'fst'", "'snd'"]

    def test_lts_export(self, tmp_path, capsys):
        out_file = tmp_path / "out.lts.json"
        code, _, _ = run_cli(
            capsys,
            "explore",
            "programs/exit_kill.node",
            "--depth",
            "40",
            "--lts",
            str(out_file),
            "--json",
        )
        assert code == 0
        doc = json.loads(out_file.read_text())
        assert doc["states"] and doc["edges"]


class TestCheckEquiv:
    def test_mapping_equivalence_holds(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "check-equiv",
            "programs/mm_letrec.node",
            "programs/mm_value.node",
            "--depth",
            "150",
            "--json",
        )
        assert code == 0
        assert json.loads(out)["verdict"] == "holds"

    def test_different_nodes_fail(self, tmp_path, capsys):
        a = tmp_path / "a.node"
        b = tmp_path / "b.node"
        a.write_text(json.dumps({"processes": [{"pid": 1, "expr": "call '!'(#2, 'x')"}]}))
        b.write_text(json.dumps({"processes": [{"pid": 1, "expr": "'x'"}]}))
        code, out, _ = run_cli(capsys, "check-equiv", str(a), str(b), "--json")
        assert code == 1
        assert json.loads(out)["verdict"] == "fails"

    def test_unknown_at_tiny_depth(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "check-equiv",
            "programs/mm_letrec.node",
            "programs/mm_value.node",
            "--depth",
            "2",
            "--json",
        )
        assert code == 2
        assert json.loads(out)["verdict"] == "unknown-at-bound"


class TestProps:
    def test_reduced_run_passes(self, capsys):
        code, out, _ = run_cli(capsys, "props", "--cases", "60", "--json")
        assert code == 0
        results = json.loads(out)
        assert all(not r["failures"] for r in results)
        names = {r["name"] for r in results}
        assert "exit decision table" in names
        assert "signal ordering guarantee" in names
