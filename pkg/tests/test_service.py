import json

import pytest
from fastapi.testclient import TestClient

from cerlsim.jsonio import trace_from_json
from cerlsim.explorer import run_trace
from cerlsim.jsonio import load_node_config
from cerlsim.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


@pytest.fixture()
def signal_order_config():
    with open("programs/signal_order.node", "r", encoding="utf-8") as handle:
        return json.load(handle)


def create_session(client, config):
    response = client.post("/sessions", json=config)
    assert response.status_code == 200
    return response.json()["session_id"]


class TestSessions:
    def test_create_returns_state(self, client, signal_order_config):
        response = client.post("/sessions", json=signal_order_config)
        assert response.status_code == 200
        body = response.json()
        assert body["revision"] == 0
        assert {p["pid"] for p in body["node"]["processes"]} == {1, 2, 3}

    def test_initially_single_enabled_action(self, client, signal_order_config):
        sid = create_session(client, signal_order_config)
        body = client.get(f"/sessions/{sid}/enabled").json()
        assert len(body["enabled"]) == 1
        only = body["enabled"][0]
        assert only["pid"] == 1 and only["action"]["kind"] == "tau"

    def test_step_until_both_arrivals_enabled(self, client, signal_order_config):
        sid = create_session(client, signal_order_config)
        for _ in range(10):  # both sends done after ten steps
            enabled = client.get(f"/sessions/{sid}/enabled").json()
            index = next(
                e["index"]
                for e in enabled["enabled"]
                if e["pid"] == 1 and e["action"]["kind"] in ("tau", "send")
            )
            response = client.post(
                f"/sessions/{sid}/step",
                json={"index": index, "revision": enabled["revision"]},
            )
            assert response.status_code == 200
        enabled = client.get(f"/sessions/{sid}/enabled").json()
        arrivals = [e for e in enabled["enabled"] if e["action"]["kind"] == "arrive"]
        assert {(a["action"]["src"], a["action"]["dst"]) for a in arrivals} == {
            (1, 2),
            (1, 3),
        }

    def test_undo_restores_previous_state(self, client, signal_order_config):
        sid = create_session(client, signal_order_config)
        initial = client.get(f"/sessions/{sid}/state").json()["node"]
        client.post(f"/sessions/{sid}/step", json={"index": 0})
        response = client.post(f"/sessions/{sid}/undo")
        assert response.status_code == 200
        assert response.json()["node"] == initial

    def test_undo_on_fresh_session_conflicts(self, client, signal_order_config):
        sid = create_session(client, signal_order_config)
        assert client.post(f"/sessions/{sid}/undo").status_code == 409

    def test_stale_revision_rejected(self, client, signal_order_config):
        sid = create_session(client, signal_order_config)
        client.post(f"/sessions/{sid}/step", json={"index": 0})
        response = client.post(f"/sessions/{sid}/step", json={"index": 0, "revision": 0})
        assert response.status_code == 409

    def test_out_of_range_index_rejected(self, client, signal_order_config):
        sid = create_session(client, signal_order_config)
        assert (
            client.post(f"/sessions/{sid}/step", json={"index": 99}).status_code == 409
        )

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope/state").status_code == 404

    def test_invalid_config_422(self, client):
        assert client.post("/sessions", json={"processes": "what"}).status_code == 422


class TestTraceAndAuto:
    def test_trace_replays_through_explorer(self, client, signal_order_config):
        sid = create_session(client, signal_order_config)
        client.post(f"/sessions/{sid}/auto", json={"policy": "random", "steps": 30, "seed": 9})
        trace_doc = client.get(f"/sessions/{sid}/trace").json()
        state = client.get(f"/sessions/{sid}/state").json()
        node = load_node_config(signal_order_config)
        replay = run_trace(node, trace_from_json(trace_doc))
        assert replay.ok
        from cerlsim.jsonio import node_to_json

        assert node_to_json(replay.node) == state["node"]

    def test_tau_only_policy_stops_at_dispatch(self, client, signal_order_config):
        sid = create_session(client, signal_order_config)
        body = client.post(
            f"/sessions/{sid}/auto", json={"policy": "tau-only", "steps": 50}
        ).json()
        # pid 1 has exactly four tau steps before its first send
        assert len(body["applied"]) == 4
        assert all(step["action"]["kind"] == "tau" for step in body["applied"])

    def test_bad_policy_rejected(self, client, signal_order_config):
        sid = create_session(client, signal_order_config)
        response = client.post(f"/sessions/{sid}/auto", json={"policy": "chaotic", "steps": 1})
        assert response.status_code == 422

    def test_step_undo_interleaving_keeps_replay_invariant(
        self, client, signal_order_config
    ):
        sid = create_session(client, signal_order_config)
        client.post(f"/sessions/{sid}/auto", json={"policy": "random", "steps": 6, "seed": 3})
        client.post(f"/sessions/{sid}/undo")
        client.post(f"/sessions/{sid}/auto", json={"policy": "random", "steps": 4, "seed": 4})
        client.post(f"/sessions/{sid}/undo")
        trace_doc = client.get(f"/sessions/{sid}/trace").json()
        state = client.get(f"/sessions/{sid}/state").json()
        node = load_node_config(signal_order_config)
        replay = run_trace(node, trace_from_json(trace_doc))
        from cerlsim.jsonio import node_to_json

        assert replay.ok and node_to_json(replay.node) == state["node"]


class TestSnapshots:
    def test_sessions_snapshot_to_disk(self, tmp_path, signal_order_config):
        client = TestClient(create_app(snapshot_dir=str(tmp_path)))
        sid = create_session(client, signal_order_config)
        client.post(f"/sessions/{sid}/step", json={"index": 0})
        saved = json.loads((tmp_path / f"{sid}.json").read_text())
        assert saved["config"] == signal_order_config
        assert len(saved["trace"]) == 1


class TestIsolation:
    def test_sessions_do_not_interfere(self, client, signal_order_config):
        sid_a = create_session(client, signal_order_config)
        sid_b = create_session(client, signal_order_config)
        client.post(f"/sessions/{sid_a}/auto", json={"policy": "random", "steps": 8, "seed": 1})
        state_b = client.get(f"/sessions/{sid_b}/state").json()
        assert state_b["steps"] == 0
        trace_b = client.get(f"/sessions/{sid_b}/trace").json()
        assert trace_b["trace"] == []
