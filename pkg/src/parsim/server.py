"""Session service: simulation control over bidirectional JSON text frames.

The protocol logic lives in SessionCore, a plain object that maps one
command to an ordered list of events; the WebSocket layer is a thin
transport around it. Commands are processed strictly in arrival order per
session, so golden transcripts of scripted sessions are byte-stable.

Commands: load, step, play, pause, rewind, edit, inspect, subscribe.
Events: loaded, tick, timeline, inspection, ack, error.
"""

from __future__ import annotations

import asyncio
import json
import logging
from dataclasses import dataclass, field

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from . import kernel
from .errors import (
    RangeViolationError,
    SimulationError,
    TimelineError,
    TypeMismatchError,
    UnknownAttributeError,
    UnknownEntityError,
    UnknownModelError,
    UnknownParameterError,
)
from .observation import render_pov
from .state import EntityId, SimulationState, canonical_bytes
from .timetravel import Timeline

log = logging.getLogger("parsim.server")

E_MALFORMED = "E_MALFORMED"
E_UNKNOWN_TYPE = "E_UNKNOWN_TYPE"
E_BAD_TICK = "E_BAD_TICK"
E_NO_ENTITY = "E_NO_ENTITY"
E_RANGE = "E_RANGE"
E_NOT_LOADED = "E_NOT_LOADED"


class ProtocolError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def encode_message(msg: dict) -> str:
    """One message per text frame; sorted keys so transcripts are stable."""
    return canonical_bytes(msg).decode("utf-8")


def decode_message(frame: str) -> dict:
    try:
        msg = json.loads(frame)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProtocolError(E_MALFORMED, f"unparseable frame: {exc}")
    if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
        raise ProtocolError(E_MALFORMED, "frame must be an object with a string 'type'")
    return msg


def _error(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


def _ack(of: str) -> dict:
    return {"type": "ack", "of": of}


_EDIT_ERROR_CODES = {
    UnknownEntityError: E_NO_ENTITY,
    UnknownAttributeError: E_NO_ENTITY,
    TypeMismatchError: E_RANGE,
    RangeViolationError: E_RANGE,
    UnknownParameterError: E_RANGE,
    UnknownModelError: E_RANGE,
    TimelineError: E_BAD_TICK,
}


@dataclass
class SessionCore:
    """Protocol state machine for one simulation session."""

    session_id: str = "session"
    model: kernel.ModelDefinition | None = None
    timeline: Timeline | None = None
    state: SimulationState | None = None
    ticks_per_second: float | None = None  # None = paused
    pov_subscriptions: list[str] = field(default_factory=list)
    probes_subscribed: bool = False

    @property
    def playing(self) -> bool:
        return self.ticks_per_second is not None

    def handle_command(self, cmd: dict) -> list[dict]:
        ctype = cmd.get("type")
        handler = getattr(self, f"_cmd_{ctype}", None)
        if handler is None:
            return [_error(E_UNKNOWN_TYPE, f"unknown command type {ctype!r}")]
        if ctype != "load" and self.state is None:
            return [_error(E_NOT_LOADED, "no simulation loaded")]
        try:
            return handler(cmd)
        except ProtocolError as exc:
            return [_error(exc.code, exc.message)]
        except SimulationError as exc:
            code = _EDIT_ERROR_CODES.get(type(exc), E_RANGE)
            return [_error(code, str(exc))]

    def handle_frame(self, frame: str) -> list[str]:
        try:
            cmd = decode_message(frame)
        except ProtocolError as exc:
            return [encode_message(_error(exc.code, exc.message))]
        return [encode_message(ev) for ev in self.handle_command(cmd)]

    # -- event builders --------------------------------------------------

    def _timeline_event(self) -> dict:
        return {
            "type": "timeline",
            "current": self.timeline.current,
            "max": self.timeline.max_tick,
            "branch_count": self.timeline.branch_count,
        }

    def _tick_event(self) -> dict:
        frames = {}
        for name in self.pov_subscriptions:
            frames[name] = render_pov(self.state, self.model.povs[name]).to_wire()
        probes = dict(self.state.probe_values) if self.probes_subscribed else {}
        return {"type": "tick", "tick": self.state.tick,
                "frames": frames, "probes": probes}

    # -- command handlers ------------------------------------------------

    def _cmd_load(self, cmd: dict) -> list[dict]:
        name = cmd.get("model")
        if not isinstance(name, str):
            raise ProtocolError(E_MALFORMED, "load requires a 'model' name")
        params = cmd.get("params") or {}
        if not isinstance(params, dict):
            raise ProtocolError(E_MALFORMED, "'params' must be an object")
        seed = cmd.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ProtocolError(E_MALFORMED, "'seed' must be an integer")
        model = kernel.get_model(name)
        state = kernel.init_simulation(model, params, seed)
        self.model = model
        self.state = state
        self.timeline = Timeline()
        self.timeline.record(state)
        self.ticks_per_second = None
        self.pov_subscriptions = []
        self.probes_subscribed = False
        return [
            {
                "type": "loaded",
                "tick": state.tick,
                "width": state.width,
                "height": state.height,
                "povs": sorted(model.povs),
                "probes": [p.name for p in model.probes],
            },
            self._timeline_event(),
        ]

    def _cmd_step(self, cmd: dict) -> list[dict]:
        count = cmd.get("count", 1)
        if not isinstance(count, int) or isinstance(count, bool) or count < 0:
            raise ProtocolError(E_RANGE, "'count' must be a non-negative integer")
        events = [_ack("step")]
        for _ in range(count):
            events.append(self.advance_one())
        return events

    def advance_one(self) -> dict:
        """Advance one tick from the cursor and return the tick event.
        Used by both the step command and the play loop."""
        self.state = kernel.step(self.state)
        self.timeline.advance(self.state)
        return self._tick_event()

    def _cmd_play(self, cmd: dict) -> list[dict]:
        tps = cmd.get("tps", 10)
        if isinstance(tps, bool) or not isinstance(tps, (int, float)) or tps <= 0:
            raise ProtocolError(E_RANGE, "'tps' must be a positive number")
        self.ticks_per_second = float(tps)
        return [_ack("play")]

    def _cmd_pause(self, cmd: dict) -> list[dict]:
        self.ticks_per_second = None  # idempotent
        return [_ack("pause")]

    def _cmd_rewind(self, cmd: dict) -> list[dict]:
        tick = cmd.get("tick")
        if not isinstance(tick, int) or isinstance(tick, bool):
            raise ProtocolError(E_BAD_TICK, "'tick' must be an integer")
        try:
            self.state = self.timeline.rewind(tick)
        except TimelineError as exc:
            raise ProtocolError(E_BAD_TICK, str(exc))
        self.ticks_per_second = None
        return [self._timeline_event(), self._tick_event()]

    def _parse_entity(self, cmd: dict) -> EntityId:
        ent = cmd.get("entity")
        if (not isinstance(ent, dict) or not isinstance(ent.get("kind"), str)
                or isinstance(ent.get("index"), bool)
                or not isinstance(ent.get("index"), int)):
            raise ProtocolError(E_MALFORMED, "'entity' must be {kind, index}")
        return EntityId(ent["kind"], ent["index"])

    def _cmd_edit(self, cmd: dict) -> list[dict]:
        entity = self._parse_entity(cmd)
        attr = cmd.get("attr")
        if not isinstance(attr, str):
            raise ProtocolError(E_MALFORMED, "'attr' must be a string")
        # Editing mid-flight auto-pauses; an explicit play resumes.
        self.ticks_per_second = None
        edited = kernel.set_attribute(self.state, entity, attr, cmd.get("value"))
        self.state = edited
        self.timeline.resume(edited)
        return [_ack("edit"), self._timeline_event(), self._tick_event()]

    def _cmd_inspect(self, cmd: dict) -> list[dict]:
        entity = self._parse_entity(cmd)
        record = kernel.inspect_entity(self.state, entity)
        return [{
            "type": "inspection",
            "entity": {"kind": record["kind"], "index": record["index"]},
            "row": record["row"],
            "col": record["col"],
            "attrs": record["attrs"],
        }]

    def _cmd_subscribe(self, cmd: dict) -> list[dict]:
        povs = cmd.get("povs", [])
        if not isinstance(povs, list) or not all(isinstance(p, str) for p in povs):
            raise ProtocolError(E_MALFORMED, "'povs' must be a list of names")
        unknown = [p for p in povs if p not in self.model.povs]
        if unknown:
            raise ProtocolError(E_RANGE, f"unknown point of view: {unknown[0]!r}")
        self.pov_subscriptions = list(povs)
        self.probes_subscribed = bool(cmd.get("probes", False))
        return [_ack("subscribe"), self._tick_event()]


def create_app(session_factory=SessionCore):
    """FastAPI app with a single /ws endpoint; one session per connection.

    Commands and the play loop of a session run on the event loop under a
    per-session lock, which serializes all state transitions.
    """
    app = FastAPI(title="parsim session service")

    @app.get("/models")
    def list_models():
        return {"models": kernel.model_names()}

    @app.websocket("/ws")
    async def session_socket(ws: WebSocket):
        await ws.accept()
        core = session_factory()
        lock = asyncio.Lock()
        log.info("session %s connected", core.session_id)

        async def play_loop():
            while True:
                async with lock:
                    tps = core.ticks_per_second
                    if tps is not None and core.state is not None:
                        event = core.advance_one()
                        await ws.send_text(encode_message(event))
                await asyncio.sleep(1.0 / tps if tps else 0.05)

        player = asyncio.create_task(play_loop())
        try:
            while True:
                frame = await ws.receive_text()
                async with lock:
                    for out in core.handle_frame(frame):
                        await ws.send_text(out)
        except WebSocketDisconnect:
            log.info("session %s disconnected", core.session_id)
        finally:
            player.cancel()

    return app
