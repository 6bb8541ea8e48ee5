"""HTTP wire protocol: sessions, turns, state, reports, display-event stream.

JSON bodies, versioned payloads. One session per client token; turns on a
session are serialized by the session lock. Display commands stream as
server-sent events so the map UI can follow along.
"""

from __future__ import annotations

import asyncio
import json
import os
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field

from .channel import ChannelModel
from .generate import load_templates
from .grammar import load_grammar
from .lm import BigramLM
from .modelio import load_channel, load_lm
from .session import Session
from .textnorm import Channel
from .world import Scenario, load_map, load_scenario

PROTOCOL_VERSION = 1

BUILTIN_SCENARIOS = ("three-trains", "east-coast")


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8140
    map_path: str | None = None
    scenario_dir: str | None = None
    lm_path: str | None = None
    channel_model_path: str | None = None
    default_seed: int = 0

    @classmethod
    def load(cls, path: str | None = None, overrides: dict | None = None) -> "ServiceConfig":
        """Defaults <- config file (RAILTALK_CONFIG or --config) <- CLI flags."""
        cfg = cls()
        path = path or os.environ.get("RAILTALK_CONFIG")
        if path:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
            for key, value in doc.items():
                if not hasattr(cfg, key):
                    raise ValueError(f"unknown config key {key!r}")
                setattr(cfg, key, value)
        for key, value in (overrides or {}).items():
            if value is not None:
                setattr(cfg, key, value)
        return cfg


class CreateSessionRequest(BaseModel):
    scenario: str = "three-trains"
    seed: int | None = None
    channel: str = Field(default="KEYBOARD", pattern="^(KEYBOARD|SPEECH)$")


class TurnRequest(BaseModel):
    text: str


def _scenario(config: ServiceConfig, name: str) -> Scenario:
    if config.scenario_dir:
        candidate = os.path.join(config.scenario_dir, f"scenario_{name.replace('-', '_')}.json")
        if os.path.exists(candidate):
            return load_scenario(candidate)
    if name in BUILTIN_SCENARIOS:
        return load_scenario(name)
    raise HTTPException(status_code=404, detail=f"unknown scenario {name!r}")


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    channel_model: ChannelModel | None = None
    language_model: BigramLM | None = None
    if config.channel_model_path:
        channel_model = load_channel(config.channel_model_path)  # raises at startup
    if config.lm_path:
        language_model = load_lm(config.lm_path)

    grammar = load_grammar()
    templates = load_templates()
    app = FastAPI(title="railtalk", version="0.1.0")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        scenario = _scenario(config, req.scenario)
        session = Session(
            session_id=uuid.uuid4().hex,
            scenario=scenario,
            seed=req.seed if req.seed is not None else config.default_seed,
            channel=Channel[req.channel],
            grammar=grammar,
            templates=templates,
            channel_model=channel_model,
            language_model=language_model,
            map_path=config.map_path,
        )
        with registry_lock:
            sessions[session.id] = session
        return {
            "version": PROTOCOL_VERSION,
            "sessionId": session.id,
            "scenario": scenario.name,
            "channel": req.channel,
            "greeting": session.greeting(),
        }

    @app.post("/sessions/{session_id}/turn")
    def take_turn(session_id: str, req: TurnRequest):
        session = get_session(session_id)
        text, commands = session.turn(req.text)
        return {
            "version": PROTOCOL_VERSION,
            "turnIndex": session.world.turn_index,
            "responseText": text,
            "displayCommands": [c.as_dict() for c in commands],
            "complete": session.complete,
            "worldHash": session.turn_log[-1].world_hash,
        }

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        session = get_session(session_id)
        world = session.world
        return {
            "version": PROTOCOL_VERSION,
            "sessionId": session.id,
            "complete": session.complete,
            "map": {
                "cities": [{"id": c.id, "name": c.name, "x": c.x, "y": c.y}
                           for c in sorted(world.cities.values(), key=lambda c: c.id)],
                "edges": [{"a": a, "b": b, "hours": h}
                          for a in sorted(world.adjacency)
                          for b, h in sorted(world.adjacency[a].items()) if a < b],
            },
            "engines": [{"id": e.id, "at": e.current_city, "home": e.home_city,
                         "route": list(e.route.path) if e.route else None}
                        for e in sorted(world.engines.values(), key=lambda e: e.id)],
            "congested": {c: h for c, (h, _t) in sorted(world.congested.items())},
            "goals": [world.city_id(g) for g in world.goals],
            "transcript": [{"turn": r.index, "user": r.user_text,
                            "corrected": r.corrected_text, "system": r.response_text}
                           for r in session.turn_log],
            "eventCursor": len(session.events),
            "worldHash": session.world_hash(),
        }

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str):
        session = get_session(session_id)
        report = session.report()
        return {
            "version": PROTOCOL_VERSION,
            "turnsToCompletion": report.turns_to_completion,
            "solutionHours": report.solution_hours,
            "goalsMet": report.goals_met,
            "solutionMarker": report.solution_marker,
            "wer": report.wer,
        }

    @app.get("/sessions/{session_id}/events")
    async def event_stream(session_id: str, cursor: int = 0, idle_timeout: float | None = None):
        session = get_session(session_id)

        async def stream():
            pos = cursor
            idle = 0.0
            while True:
                events = session.events
                if pos < len(events):
                    while pos < len(events):
                        body = json.dumps(events[pos].as_dict())
                        yield f"id: {pos}\ndata: {body}\n\n"
                        pos += 1
                    idle = 0.0
                else:
                    if idle_timeout is not None and idle >= idle_timeout:
                        return
                    await asyncio.sleep(0.05)
                    idle += 0.05

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted; bind/model errors raise at startup."""
    import uvicorn

    load_map(config.map_path)  # validate early
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
