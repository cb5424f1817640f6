"""HTTP + streaming session service.

Sessions live in memory behind per-session locks (concurrent utterances
queue rather than interleave); every turn is appended to the session's
JSONL log before the response goes out, and on startup any logs found in
the log directory are replayed so a restarted service can keep serving
transcripts for sessions that survived a crash.

The stream endpoint is a WebSocket that first replays the session's
frame/reply history, then follows live emissions in order.
"""

from __future__ import annotations

import asyncio
import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .attractions import (
    AttractionDataset,
    FixturePlacesProvider,
    LivePlacesProvider,
    load_attractions,
)
from .dialogue import (
    DialogueConfig,
    DialogueEngine,
    DialogueState,
    Session,
)
from .embeddings import load_embeddings
from .errors import (
    ConfigurationError,
    InvalidSessionError,
    SessionClosedError,
    UnknownAttractionError,
    ValidationError,
)
from .expression import ExpressionTable, load_expression_table
from .intent import load_categories
from .persistence import SessionLog
from .similarity import Thresholds


@dataclass(frozen=True)
class PlacesConfig:
    mode: str = "fixture"  # fixture | live
    fixture_path: Path | None = None
    base_url: str | None = None
    api_key: str | None = None
    radius_m: float = 1000.0
    timeout_seconds: float = 3.0


@dataclass(frozen=True)
class ServiceConfig:
    embeddings_path: Path
    categories_path: Path
    attractions_path: Path
    expression_config_path: Path
    log_dir: Path
    thresholds: Thresholds = field(default_factory=Thresholds)
    session_deadline_seconds: float = 300.0
    places: PlacesConfig = field(default_factory=PlacesConfig)
    host: str = "127.0.0.1"
    port: int = 8645
    dialogue_overrides: dict = field(default_factory=dict)


def load_config(path: str | Path) -> ServiceConfig:
    """Parse the service config file; paths resolve relative to it.

    Referenced data files must exist; PLACES_BASE_URL / PLACES_API_KEY
    env vars override the live-provider settings.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON: {exc}") from None
    base = path.parent

    def resolve(key: str, required: bool = True) -> Path | None:
        value = raw.get(key)
        if value is None:
            if required:
                raise ConfigurationError(f"{path}: missing {key}")
            return None
        return (base / value).resolve()

    config_paths = {}
    for key in ("embeddings_path", "categories_path", "attractions_path",
                "expression_config_path"):
        resolved = resolve(key)
        if not resolved.exists():
            raise ConfigurationError(f"{path}: {key} does not exist: {resolved}")
        config_paths[key] = resolved

    thresholds_raw = raw.get("thresholds", {})
    try:
        thresholds = Thresholds(
            wrd_fallback=thresholds_raw.get("wrd_fallback", 0.55),
            wrd_accept=thresholds_raw.get("wrd_accept", 0.55),
            cosine_accept=thresholds_raw.get("cosine_accept", 0.80),
        )
    except Exception as exc:
        raise ConfigurationError(f"{path}: bad thresholds: {exc}") from None

    places_raw = raw.get("places", {})
    mode = places_raw.get("mode", "fixture")
    if mode not in ("fixture", "live"):
        raise ConfigurationError(f"{path}: places mode must be fixture or live, got {mode!r}")
    fixture_path = None
    if mode == "fixture":
        fixture_value = places_raw.get("fixture_path")
        if not fixture_value:
            raise ConfigurationError(f"{path}: fixture places mode needs fixture_path")
        fixture_path = (base / fixture_value).resolve()
        if not fixture_path.exists():
            raise ConfigurationError(f"{path}: places fixture does not exist: {fixture_path}")
    places = PlacesConfig(
        mode=mode,
        fixture_path=fixture_path,
        base_url=os.environ.get("PLACES_BASE_URL", places_raw.get("base_url")),
        api_key=os.environ.get("PLACES_API_KEY", places_raw.get("api_key")),
        radius_m=float(places_raw.get("radius_m", 1000.0)),
        timeout_seconds=float(places_raw.get("timeout_seconds", 3.0)),
    )

    listen = raw.get("listen", {})
    log_dir = (base / raw.get("log_dir", "logs")).resolve()
    return ServiceConfig(
        **config_paths,
        log_dir=log_dir,
        thresholds=thresholds,
        session_deadline_seconds=float(raw.get("session_deadline_seconds", 300.0)),
        places=places,
        host=listen.get("host", "127.0.0.1"),
        port=int(listen.get("port", 8645)),
        dialogue_overrides=raw.get("dialogue", {}),
    )


def build_places_provider(config: ServiceConfig):
    if config.places.mode == "fixture":
        return FixturePlacesProvider(config.places.fixture_path)
    return LivePlacesProvider(
        base_url=config.places.base_url,
        api_key=config.places.api_key,
        timeout_s=config.places.timeout_seconds,
    )


def build_engine(config: ServiceConfig) -> DialogueEngine:
    store = load_embeddings(config.embeddings_path)
    dialogue_config = DialogueConfig(
        thresholds=config.thresholds,
        deadline_seconds=config.session_deadline_seconds,
        restaurant_radius_m=config.places.radius_m,
        **config.dialogue_overrides,
    )
    return DialogueEngine(
        store=store,
        registry=load_categories(config.categories_path, store),
        attractions=load_attractions(config.attractions_path),
        config=dialogue_config,
        places_provider=build_places_provider(config),
    )


class CreateSessionRequest(BaseModel):
    spot_a_id: str
    spot_b_id: str
    recommended_id: str | None = None


class UtteranceRequest(BaseModel):
    text: str


class QuestionnaireRequest(BaseModel):
    ratings: dict[str, int]
    chosen_spot_id: str


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _attraction_json(a) -> dict:
    return {
        "id": a.id,
        "name": a.name,
        "description": a.description,
        "open_hours": a.open_hours,
        "price_yen": a.price_yen,
        "parking": a.parking,
        "access": {
            "car": a.access.car,
            "train": a.access.train,
            "nearest_station": a.access.nearest_station,
        },
        "location": {"lat": a.location.lat, "lng": a.location.lng},
        "photo_url": a.photo_url,
    }


class SessionHub:
    """Sessions plus their locks and per-session stream histories."""

    def __init__(self, engine: DialogueEngine, log: SessionLog,
                 expression_table: ExpressionTable):
        self.engine = engine
        self.log = log
        self.expression_table = expression_table
        self.sessions: dict[str, Session] = {}
        self.locks: dict[str, threading.Lock] = {}
        self.streams: dict[str, list[dict]] = {}
        self._registry_lock = threading.Lock()

    def add(self, session: Session) -> None:
        with self._registry_lock:
            self.sessions[session.id] = session
            self.locks[session.id] = threading.Lock()
            self.streams[session.id] = []

    def get(self, session_id: str) -> Session | None:
        return self.sessions.get(session_id)

    def lock(self, session_id: str) -> threading.Lock:
        return self.locks[session_id]

    def emit(self, session: Session, event: str | None, text: str, t: float) -> None:
        """Append a frame (if any) and the reply to the stream history."""
        stream = self.streams[session.id]
        if event:
            params = self.expression_table.params_for(event)
            stream.append({
                "type": "frame", "t": t, "event": event,
                "valence": params.valence, "arousal": params.arousal,
                "dominance": params.dominance, "realIntention": params.realIntention,
            })
        stream.append({
            "type": "reply", "t": t, "text": text, "state": session.state.value,
        })
        if session.state is DialogueState.CLOSED:
            params = self.expression_table.params_for("neutral")
            stream.append({
                "type": "frame", "t": t, "event": "neutral",
                "valence": params.valence, "arousal": params.arousal,
                "dominance": params.dominance, "realIntention": params.realIntention,
            })
            stream.append({"type": "end", "t": t})

    def recover_from_logs(self) -> int:
        """Replay JSONL logs into live sessions; returns how many."""
        recovered = 0
        for session_id in self.log.session_ids():
            session = self.log.recover_session(session_id, self.engine.attractions)
            if session is None:
                continue
            self.add(session)
            stream = self.streams[session.id]
            stream.append({
                "type": "frame", "t": session.created_at, "event": "smile",
                **{k: getattr(self.expression_table.params_for("smile"), k)
                   for k in ("valence", "arousal", "dominance", "realIntention")},
            })
            stream.append({
                "type": "reply", "t": session.created_at,
                "text": session.greeting, "state": DialogueState.ASK_NAME.value,
            })
            for turn in session.transcript:
                if turn.speaker != "robot":
                    continue
                if turn.expression_event:
                    params = self.expression_table.params_for(turn.expression_event)
                    stream.append({
                        "type": "frame", "t": turn.t, "event": turn.expression_event,
                        "valence": params.valence, "arousal": params.arousal,
                        "dominance": params.dominance, "realIntention": params.realIntention,
                    })
                stream.append({
                    "type": "reply", "t": turn.t, "text": turn.text,
                    "state": turn.state_at_emit.value,
                })
            recovered += 1
        return recovered


def create_app(config: ServiceConfig) -> FastAPI:
    engine = build_engine(config)
    expression_table = load_expression_table(config.expression_config_path)
    hub = SessionHub(engine, SessionLog(config.log_dir), expression_table)
    hub.recover_from_logs()

    app = FastAPI(title="tourdesk", version="0.1.0")
    app.state.hub = hub
    app.state.config = config

    @app.get("/attractions")
    def list_attractions():
        return [_attraction_json(a) for a in engine.attractions.all()]

    @app.post("/sessions", status_code=201)
    def create_session(request: CreateSessionRequest):
        try:
            session, reply = engine.new_session(
                request.spot_a_id, request.spot_b_id, request.recommended_id
            )
        except UnknownAttractionError as exc:
            return _error(404, "not_found", str(exc))
        except InvalidSessionError as exc:
            return _error(422, "validation_error", str(exc))
        hub.add(session)
        hub.log.log_session_start(session)
        hub.emit(session, reply.expression_event, reply.text, session.created_at)
        return {
            "session_id": session.id,
            "greeting": reply.text,
            "state": session.state.value,
            "recommended_id": session.recommended_id,
            "spot_a": _attraction_json(session.spot_a),
            "spot_b": _attraction_json(session.spot_b),
        }

    @app.post("/sessions/{session_id}/utterance")
    def post_utterance(session_id: str, request: UtteranceRequest):
        session = hub.get(session_id)
        if session is None:
            return _error(404, "not_found", f"unknown session {session_id}")
        with hub.lock(session_id):
            try:
                reply = engine.advance(session, request.text)
            except SessionClosedError as exc:
                return _error(409, "session_closed", str(exc))
            # persist both turns before answering
            hub.log.log_turn(session, session.transcript[-2])
            hub.log.log_turn(session, session.transcript[-1])
            hub.emit(session, reply.expression_event, reply.text,
                     session.transcript[-1].t)
        return {
            "reply": reply.text,
            "state": reply.new_state.value,
            "expression_event": reply.expression_event,
            "debug": reply.debug,
        }

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str):
        session = hub.get(session_id)
        if session is None:
            return _error(404, "not_found", f"unknown session {session_id}")
        with hub.lock(session_id):
            turns = [turn.to_json() for turn in session.transcript]
        return {
            "session_id": session_id,
            "state": session.state.value,
            "greeting": session.greeting,
            "turns": turns,
        }

    @app.post("/sessions/{session_id}/questionnaire")
    def post_questionnaire(session_id: str, request: QuestionnaireRequest):
        session = hub.get(session_id)
        if session is None:
            return _error(404, "not_found", f"unknown session {session_id}")
        with hub.lock(session_id):
            if session.state not in (DialogueState.CLOSING, DialogueState.CLOSED):
                return _error(409, "not_closing",
                              "questionnaire is only accepted once the dialogue is closing")
            try:
                record = engine.record_questionnaire(
                    session, request.ratings, request.chosen_spot_id
                )
            except ValidationError as exc:
                return _error(422, "validation_error", str(exc))
            hub.log.log_questionnaire(record)
        return {
            "recorded": True,
            "matched_recommendation": record.matched_recommendation,
        }

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(websocket: WebSocket, session_id: str):
        await websocket.accept()
        if hub.get(session_id) is None:
            await websocket.send_json({"type": "error", "code": "not_found"})
            await websocket.close()
            return
        cursor = 0
        try:
            while True:
                stream_history = hub.streams[session_id]
                while cursor < len(stream_history):
                    message = stream_history[cursor]
                    cursor += 1
                    await websocket.send_json(message)
                    if message["type"] == "end":
                        await websocket.close()
                        return
                await asyncio.sleep(0.05)
        except WebSocketDisconnect:
            return

    return app
