"""HTTP gateway: sessions, events, candidates, confirm/retry, plan delivery.

Sessions live in memory with a TTL. Requests for the same session are
serialized behind a per-session lock (the session machine is single-writer);
distinct sessions run in parallel. Modeled errors map to one status each:
400 schema, 404 unknown id, 409 phase violation, 422 scene too small,
502 resolver protocol, 504 resolver timeout. Nothing modeled returns 500.
"""

from __future__ import annotations

import logging
import threading
import time
import uuid
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import candidates as cand
from .baseline import SceneTooSmallError
from .candidates import CandidateSet, RankError, CandidateSetError
from .config import EngineConfig
from .planner import build_plan, default_skill_library, to_xml
from .resolvers import (
    BaselineResolver,
    MockResolver,
    RemoteResolver,
    Resolver,
    ResolverProtocolError,
    ResolverTimeout,
    generate_candidates,
)
from .scene import IntegrityError, SceneError, SceneGraph, SchemaError, VersionError, load_scene
from .session import (
    EmptySceneError,
    PhaseError,
    ProtocolError,
    RetryExhausted,
    RingEvent,
    RingKind,
    SessionPhase,
    SessionState,
    Snapshot,
    attach_transcript,
    finalize,
    handle_event,
    mark_presenting,
    retry as session_retry,
)
from .harness import snapshot_from_json

log = logging.getLogger(__name__)

SESSION_TTL_S = 3600.0


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass
class GatewaySession:
    session_id: str
    scene_ref: str
    scene: SceneGraph
    resolver: Resolver
    state: SessionState = dc_field(default_factory=SessionState)
    pending_snapshot: Snapshot | None = None
    candidate_set: CandidateSet | None = None
    confirmed_xml: str | None = None
    created_at: float = dc_field(default_factory=time.time)
    last_used: float = dc_field(default_factory=time.time)
    lock: threading.Lock = dc_field(default_factory=threading.Lock)

    def handle(self) -> dict:
        return {
            "session_id": self.session_id,
            "scene_ref": self.scene_ref,
            "phase": self.state.phase.value,
            "retries_used": self.state.retries_used,
            "created_at": self.created_at,
        }


def _make_resolver(mode: str, config: EngineConfig) -> Resolver:
    mode = (mode or config.resolver_mode).lower()
    if mode == "baseline":
        return BaselineResolver(extra_verbs=config.extra_verbs)
    if mode == "mock":
        return MockResolver()
    if mode == "remote":
        if not config.endpoint:
            raise ApiError(400, "remote resolver requires a configured endpoint")
        return RemoteResolver(config.endpoint, timeout_ms=config.timeout_ms, model=config.model)
    raise ApiError(400, f"unknown resolver {mode!r}")


def create_app(config: EngineConfig | None = None, static_dir: str | Path | None = None) -> FastAPI:
    config = config or EngineConfig().apply_env()
    app = FastAPI(title="intenbot gateway", version="0.1.0")
    scenes: dict[str, SceneGraph] = {}
    sessions: dict[str, GatewaySession] = {}
    store_lock = threading.Lock()

    def _expire() -> None:
        now = time.time()
        with store_lock:
            dead = [sid for sid, s in sessions.items() if now - s.last_used > SESSION_TTL_S]
            for sid in dead:
                del sessions[sid]

    def _session(session_id: str) -> GatewaySession:
        _expire()
        with store_lock:
            sess = sessions.get(session_id)
        if sess is None:
            raise ApiError(404, f"unknown session {session_id!r}")
        sess.last_used = time.time()
        return sess

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/scenes")
    async def post_scene(request: Request):
        body = await request.body()
        try:
            scene = load_scene(body)
        except (SchemaError, VersionError, IntegrityError) as exc:
            raise ApiError(400, str(exc))
        scene_ref = f"scene-{uuid.uuid4().hex[:12]}"
        with store_lock:
            scenes[scene_ref] = scene
        return {"scene_ref": scene_ref, "objects": len(scene.objects), "rooms": len(scene.rooms)}

    @app.get("/scenes/{scene_ref}")
    def get_scene(scene_ref: str):
        scene = scenes.get(scene_ref)
        if scene is None:
            raise ApiError(404, f"unknown scene {scene_ref!r}")
        return {
            "scene_ref": scene_ref,
            "rooms": [
                {"id": r.id, "label": r.label, "centroid": r.centroid.as_list()} for r in scene.rooms
            ],
            "objects": [
                {
                    "id": o.id,
                    "label": o.label,
                    "category": o.category,
                    "position": o.position.as_list(),
                    "bounding_radius": o.bounding_radius,
                    "room": o.room,
                    "affordances": sorted(o.affordances),
                    "state": dict(o.state_attributes),
                }
                for o in scene.objects
            ],
        }

    @app.post("/sessions")
    async def post_session(request: Request):
        body = await _json_body(request)
        scene_ref = body.get("scene_ref")
        scene = scenes.get(scene_ref)
        if scene is None:
            raise ApiError(404, f"unknown scene {scene_ref!r}")
        resolver = _make_resolver(body.get("resolver", ""), config)
        sess = GatewaySession(
            session_id=f"session-{uuid.uuid4().hex[:12]}",
            scene_ref=scene_ref,
            scene=scene,
            resolver=resolver,
        )
        with store_lock:
            sessions[sess.session_id] = sess
        log.info("session %s opened on %s with %s resolver", sess.session_id, scene_ref, resolver.resolver_id)
        return sess.handle()

    @app.post("/sessions/{session_id}/events")
    async def post_event(session_id: str, request: Request):
        body = await _json_body(request)
        sess = _session(session_id)
        with sess.lock:
            return _apply_event(sess, body)

    def _apply_event(sess: GatewaySession, body: dict) -> dict:
        kind = body.get("type")
        try:
            if kind == "snapshot":
                sess.pending_snapshot = snapshot_from_json(body)
            elif kind == "transcript":
                attach_transcript(sess.state, str(body.get("text", "")))
            elif kind == "ring":
                event = RingEvent(kind=RingKind(body["kind"]), t=float(body["t"]))

                def capture(t: float) -> Snapshot:
                    if sess.pending_snapshot is None:
                        raise ProtocolError("no aim snapshot posted before capture")
                    return sess.pending_snapshot

                handle_event(sess.state, event, capture)
            else:
                raise ApiError(400, f"unknown event type {kind!r}")
        except (KeyError, ValueError) as exc:
            if isinstance(exc, ApiError):
                raise
            raise ApiError(400, f"bad event payload: {exc}")
        except (ProtocolError, PhaseError) as exc:
            raise ApiError(409, str(exc))
        return {"phase": sess.state.phase.value, "snapshots": len(sess.state.snapshots)}

    def _resolve_candidates(sess: GatewaySession) -> None:
        """Finalize and resolve lazily, at the first candidates fetch.

        Transcripts may legally arrive after release (transcription runs
        while the loading indicator shows), so resolution waits until the
        candidates are actually requested.
        """
        if sess.state.transcript is None:
            sess.state.transcript = ""
        try:
            command = finalize(sess.state, sess.scene, config.angles)
            sess.candidate_set = generate_candidates(command, sess.scene, sess.resolver)
        except EmptySceneError as exc:
            raise ApiError(422, str(exc))
        except SceneTooSmallError as exc:
            raise ApiError(422, str(exc))
        except ResolverTimeout as exc:
            log.warning("session %s: resolver timeout: %s", sess.session_id, exc)
            raise ApiError(504, str(exc))
        except (ResolverProtocolError, CandidateSetError) as exc:
            log.warning("session %s: resolver protocol error: %s", sess.session_id, exc)
            raise ApiError(502, str(exc))
        mark_presenting(sess.state)

    @app.get("/sessions/{session_id}/candidates")
    def get_candidates(session_id: str, page: int = 0):
        if page not in (0, 1, 2):
            raise ApiError(400, f"page index must be 0..2, got {page}")
        sess = _session(session_id)
        with sess.lock:
            if sess.candidate_set is None:
                if sess.state.phase is not SessionPhase.DISPATCHED:
                    raise ApiError(409, "no candidate set yet; release the ring first")
                _resolve_candidates(sess)
            try:
                entries = cand.page(sess.candidate_set, page)
            except IndexError as exc:
                raise ApiError(400, str(exc))
            return {
                "page": page,
                "phase": sess.state.phase.value,
                "total": len(sess.candidate_set.candidates),
                "repaired": sess.candidate_set.repaired,
                "resolver_id": sess.candidate_set.resolver_id,
                "candidates": [_instr_json(c) for c in entries],
            }

    @app.post("/sessions/{session_id}/confirm")
    async def post_confirm(session_id: str, request: Request):
        body = await _json_body(request)
        sess = _session(session_id)
        with sess.lock:
            if sess.candidate_set is None:
                raise ApiError(409, "no candidate set yet")
            rank = body.get("rank")
            if not isinstance(rank, int):
                raise ApiError(400, "rank must be an integer")
            try:
                chosen = cand.confirm(sess.state, sess.candidate_set, rank)
            except PhaseError as exc:
                raise ApiError(409, str(exc))
            except RankError as exc:
                raise ApiError(400, str(exc))
            try:
                tree = build_plan(chosen, sess.scene, default_skill_library())
                sess.confirmed_xml = to_xml(tree)
            except Exception as exc:  # plan errors are modeled; map them
                raise ApiError(422, f"plan compilation failed: {exc}")
            return {
                "phase": sess.state.phase.value,
                "instruction": _instr_json(chosen),
                "bt_xml": sess.confirmed_xml,
            }

    @app.post("/sessions/{session_id}/retry")
    def post_retry(session_id: str):
        sess = _session(session_id)
        with sess.lock:
            try:
                session_retry(sess.state)
            except PhaseError as exc:
                raise ApiError(409, str(exc))
            except RetryExhausted as exc:
                raise ApiError(409, f"{exc}; session abandoned")
            sess.candidate_set = None
            sess.pending_snapshot = None
            return {"phase": sess.state.phase.value, "retries_used": sess.state.retries_used}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session(session_id).handle()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="playground")

    return app


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise ApiError(400, "body must be JSON")
    if not isinstance(body, dict):
        raise ApiError(400, "body must be a JSON object")
    return body


def _instr_json(instr) -> dict:
    return {
        "rank": instr.rank,
        "task": instr.task.value,
        "targets": list(instr.targets),
        "destination": instr.destination,
        "attribute": instr.attribute,
        "display_text": instr.display_text,
        "explanation": instr.explanation,
    }
