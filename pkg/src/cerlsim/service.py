"""HTTP session service: the backend of the interactive stepper.

Sessions hold a current node, a replayable trace, and an undo stack.
Every mutation happens under the session's lock; the enabled-action
list is cached per revision and a step request carrying a stale
revision (or an out-of-range index) is rejected with 409 so the client
re-fetches instead of firing an action the user never saw.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import processes as pr
from .explorer import random_run
from .jsonio import (
    ConfigError,
    action_to_json,
    describe_action,
    load_node_config,
    node_to_json,
    trace_to_json,
)
from .nodes import Node, node_enabled, node_step
from .terms import Pid


@dataclass
class Session:
    id: str
    config: dict
    initial: Node
    current: Node
    trace: list[tuple[Pid, pr.Action]] = field(default_factory=list)
    undo_stack: list[Node] = field(default_factory=list)
    revision: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)
    enabled_cache: Optional[list[tuple[Pid, pr.Action]]] = None

    def enabled(self) -> list[tuple[Pid, pr.Action]]:
        if self.enabled_cache is None:
            self.enabled_cache = node_enabled(self.current)
        return self.enabled_cache

    def bump(self) -> None:
        self.revision += 1
        self.enabled_cache = None

    def state_payload(self) -> dict:
        return {
            "session_id": self.id,
            "revision": self.revision,
            "steps": len(self.trace),
            "node": node_to_json(self.current),
        }

    def enabled_payload(self) -> dict:
        return {
            "session_id": self.id,
            "revision": self.revision,
            "enabled": [
                {
                    "index": i,
                    "pid": pid.id,
                    "action": action_to_json(action),
                    "description": describe_action(pid, action),
                }
                for i, (pid, action) in enumerate(self.enabled())
            ],
        }


class StepBody(BaseModel):
    index: int
    revision: Optional[int] = None


class AutoBody(BaseModel):
    policy: str
    steps: int = 1
    seed: Optional[int] = None


def create_app(ui_dir: Optional[str] = None, snapshot_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="cerlsim session service")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def save_snapshot(session: Session) -> None:
        if snapshot_dir is None:
            return
        os.makedirs(snapshot_dir, exist_ok=True)
        payload = {"config": session.config, **trace_to_json(tuple(session.trace))}
        path = os.path.join(snapshot_dir, f"{session.id}.json")
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle)

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    @app.post("/sessions")
    def create_session(config: dict):
        try:
            node = load_node_config(config)
        except ConfigError as err:
            return JSONResponse(status_code=422, content={"detail": str(err)})
        session = Session(
            id=uuid.uuid4().hex[:12], config=config, initial=node, current=node
        )
        with registry_lock:
            sessions[session.id] = session
        save_snapshot(session)
        return {"session_id": session.id, **session.state_payload()}

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return session.state_payload()

    @app.get("/sessions/{session_id}/enabled")
    def get_enabled(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return session.enabled_payload()

    @app.post("/sessions/{session_id}/step")
    def step(session_id: str, body: StepBody):
        session = get_session(session_id)
        with session.lock:
            if body.revision is not None and body.revision != session.revision:
                raise HTTPException(status_code=409, detail="stale revision")
            enabled = session.enabled()
            if not 0 <= body.index < len(enabled):
                raise HTTPException(status_code=409, detail="stale or invalid index")
            pid, action = enabled[body.index]
            successor = node_step(session.current, pid, action)
            if successor is None:
                raise HTTPException(status_code=409, detail="action no longer enabled")
            session.undo_stack.append(session.current)
            session.current = successor
            session.trace.append((pid, action))
            session.bump()
            save_snapshot(session)
            return {
                "applied": {"pid": pid.id, "action": action_to_json(action)},
                **session.state_payload(),
            }

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        session = get_session(session_id)
        with session.lock:
            if not session.undo_stack:
                raise HTTPException(status_code=409, detail="nothing to undo")
            session.current = session.undo_stack.pop()
            session.trace.pop()
            session.bump()
            save_snapshot(session)
            return session.state_payload()

    @app.get("/sessions/{session_id}/trace")
    def get_trace(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return {"session_id": session.id, **trace_to_json(tuple(session.trace))}

    @app.post("/sessions/{session_id}/auto")
    def auto(session_id: str, body: AutoBody):
        session = get_session(session_id)
        if body.policy not in ("random", "tau-only"):
            raise HTTPException(status_code=422, detail="policy must be random or tau-only")
        if body.steps < 0:
            raise HTTPException(status_code=422, detail="steps must be >= 0")
        with session.lock:
            applied = []
            if body.policy == "random":
                seed = body.seed if body.seed is not None else 0
                _node, trace = random_run(session.current, seed=seed, max_steps=body.steps)
                steps = list(trace)
            else:
                steps = None  # chosen on the fly below
            taken = 0
            while taken < body.steps:
                if steps is not None:
                    if taken >= len(steps):
                        break
                    pid, action = steps[taken]
                else:
                    taus = [
                        (p, a)
                        for p, a in node_enabled(session.current)
                        if isinstance(a, pr.TauA)
                    ]
                    if not taus:
                        break
                    pid, action = taus[0]
                successor = node_step(session.current, pid, action)
                if successor is None:
                    break
                session.undo_stack.append(session.current)
                session.current = successor
                session.trace.append((pid, action))
                applied.append({"pid": pid.id, "action": action_to_json(action)})
                taken += 1
            session.bump()
            save_snapshot(session)
            return {"applied": applied, **session.state_payload()}

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
