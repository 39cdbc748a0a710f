"""HTTP facade: the only process boundary clients talk to.

Success bodies are ``{"data": ...}``, failures ``{"error": {code, message,
retriable}}``. Generation endpoints that miss the wait window return 202
with a poll URL instead of blocking the client.
"""

from __future__ import annotations

import concurrent.futures
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from ..assistant import LanguageAssistant
from ..engine import GameConfig, GameSession, StoryEngine
from ..engine.genres import GenreCatalog
from ..errors import NotFoundError, StoryloomError
from ..store import EventLog, SessionRepository
from .config import ServiceConfig, build_gateway
from .envelope import error_body, map_exception, success
from .jobs import JobRunner

API_VERSION = "1"


class CreateSessionConfig(BaseModel):
    milestone_count: int = 3
    decisions_per_milestone: int = 2
    ending_count: int = 2
    options_per_decision: int = 3


class CreateSessionBody(BaseModel):
    genre: str
    premise: str | None = None
    config: CreateSessionConfig | None = None


class LevelBody(BaseModel):
    level: str


class ChoiceBody(BaseModel):
    option_index: int
    request_token: str | None = None


class QueryBody(BaseModel):
    segment_id: str
    selected_string: str
    offsets: tuple[int, int]


def session_view(session: GameSession) -> dict:
    return {
        "session_id": session.session_id,
        "genre": session.genre,
        "premise": session.premise,
        "status": session.status.value,
        "level": session.level.value if session.level else None,
        "config": session.config.to_dict(),
        "cursor": session.cursor.to_dict(),
        "samples": [s.to_dict() for s in session.samples],
        "segments": [s.to_dict() for s in session.segments],
        "summary_count": len(session.memory.summaries),
    }


@dataclass
class _IdemEntry:
    event: threading.Event = field(default_factory=threading.Event)
    response: tuple[int, dict] | None = None


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.load()  # bare factory: defaults + env overrides
    gateway = build_gateway(config)
    log = EventLog(config.storage_path, fsync=config.fsync)
    repo = SessionRepository(log)
    genres = GenreCatalog.from_file(config.genre_catalog) if config.genre_catalog else GenreCatalog.default()
    engine = StoryEngine(gateway, repo, genres)
    assistant = LanguageAssistant(gateway, repo)
    jobs = JobRunner()

    app = FastAPI(title="storyloom", version=API_VERSION, openapi_url="/openapi")
    app.state.engine = engine
    app.state.assistant = assistant
    app.state.gateway = gateway
    app.state.repo = repo
    app.state.config = config

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    outline_jobs: dict[str, object] = {}
    outline_lock = threading.Lock()
    idempotent: dict[tuple[str, str], _IdemEntry] = {}
    idempotent_lock = threading.Lock()

    # -- error mapping ------------------------------------------------------

    @app.exception_handler(StoryloomError)
    async def _domain_error(request: Request, exc: StoryloomError):
        status, body = map_exception(exc)
        return JSONResponse(body, status_code=status)

    @app.exception_handler(RequestValidationError)
    async def _body_error(request: Request, exc: RequestValidationError):
        return JSONResponse(error_body("validation", str(exc.errors())), status_code=400)

    @app.exception_handler(Exception)
    async def _unexpected(request: Request, exc: Exception):
        status, body = map_exception(exc)
        return JSONResponse(body, status_code=status)

    # -- helpers --------------------------------------------------------------

    def run_or_accept(kind: str, fn):
        """Run a generation op; 200 with its result, or 202 + poll URL."""
        job = jobs.submit(kind, fn)
        try:
            result = job.future.result(timeout=config.job_wait)
            return JSONResponse(success(result), status_code=200)
        except concurrent.futures.TimeoutError:
            return JSONResponse(
                success({"state": "running", "job_id": job.job_id, "poll": f"/jobs/{job.job_id}"}),
                status_code=202,
            )

    def ensure_outline_job(session_id: str) -> None:
        """Kick outline generation alongside sampling, once."""
        session = repo.get(session_id)
        if session.outline is not None:
            return
        with outline_lock:
            job = outline_jobs.get(session_id)
            if job is not None and job.state == "running":
                return
            outline_jobs[session_id] = jobs.submit(
                "outline", lambda: engine.generate_outline(session_id)
            )

    # -- meta -----------------------------------------------------------------

    @app.get("/healthz")
    def healthz():
        return success({"status": "ok", "version": API_VERSION})

    @app.get("/genres")
    def list_genres():
        return success({"genres": [g.to_dict() for g in genres.all()]})

    # -- session lifecycle ------------------------------------------------------

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        game_config = GameConfig(**body.config.model_dump()) if body.config else GameConfig()
        session = engine.create_session(body.genre, premise=body.premise, config=game_config)
        return success({"session_id": session.session_id})

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return success(session_view(repo.get(session_id)))

    @app.post("/sessions/{session_id}/samples")
    def generate_samples(session_id: str):
        repo.get(session_id)  # 404 before any job is spawned
        ensure_outline_job(session_id)

        def run():
            samples = engine.generate_proficiency_samples(session_id)
            return {"samples": [s.to_dict() for s in samples]}

        return run_or_accept("samples", run)

    @app.post("/sessions/{session_id}/level")
    def select_level(session_id: str, body: LevelBody):
        session = engine.select_proficiency(session_id, body.level)
        return success(session_view(session))

    @app.get("/sessions/{session_id}/outline-status")
    def outline_status(session_id: str):
        session = repo.get(session_id)
        if session.outline is not None:
            return success({"state": "ready"})
        job = outline_jobs.get(session_id)
        if job is None:
            return success({"state": "none"})
        if job.state == "running":
            return success({"state": "running"})
        if job.state == "failed":
            return success({"state": "failed", "message": str(job.future.exception())})
        return success({"state": "ready"})

    # -- plot loop ------------------------------------------------------------

    @app.post("/sessions/{session_id}/segments")
    def next_segment(session_id: str):
        repo.get(session_id)

        def run():
            segment = engine.generate_segment(session_id)
            return {"segment": segment.to_dict()}

        return run_or_accept("segment", run)

    @app.post("/sessions/{session_id}/choices")
    def apply_choice(session_id: str, body: ChoiceBody):
        if body.request_token is None:
            session = engine.apply_choice(session_id, body.option_index)
            return success(session_view(session))

        key = (session_id, body.request_token)
        with idempotent_lock:
            entry = idempotent.get(key)
            owner = entry is None
            if owner:
                entry = _IdemEntry()
                idempotent[key] = entry

        if not owner:
            entry.event.wait(timeout=60)
            if entry.response is None:
                return JSONResponse(error_body("busy", "replayed request still in flight"), status_code=409)
            status, payload = entry.response
            return JSONResponse(payload, status_code=status)

        try:
            session = engine.apply_choice(session_id, body.option_index)
            entry.response = (200, success(session_view(session)))
            return JSONResponse(entry.response[1], status_code=200)
        except Exception as exc:
            entry.response = map_exception(exc)
            with idempotent_lock:
                idempotent.pop(key, None)  # a later retry with this token may re-run
            raise
        finally:
            entry.event.set()

    @app.post("/sessions/{session_id}/ending")
    def generate_ending(session_id: str):
        repo.get(session_id)

        def run():
            segment = engine.generate_ending(session_id)
            return {"segment": segment.to_dict()}

        return run_or_accept("ending", run)

    # -- language assistant -----------------------------------------------------

    @app.post("/sessions/{session_id}/queries")
    def explain(session_id: str, body: QueryBody):
        record = assistant.explain(
            session_id, body.segment_id, body.selected_string, tuple(body.offsets)
        )
        return success({"record": record.to_dict()})

    @app.get("/sessions/{session_id}/queries")
    def list_queries(session_id: str, offset: int = 0, limit: int = 50):
        page = assistant.list_queries(session_id, offset=offset, limit=limit)
        return success(
            {
                "total": page.total,
                "offset": page.offset,
                "records": [r.to_dict() for r in page.records],
            }
        )

    @app.get("/sessions/{session_id}/queries/export")
    def export_session_queries(session_id: str):
        repo.get(session_id)
        return PlainTextResponse(
            assistant.export_query_log(session_id), media_type="text/tab-separated-values"
        )

    @app.get("/queries/export")
    def export_all_queries():
        return PlainTextResponse(
            assistant.export_query_log(None), media_type="text/tab-separated-values"
        )

    # -- jobs ---------------------------------------------------------------------

    @app.get("/jobs/{job_id}")
    def poll_job(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            raise NotFoundError(f"no job {job_id!r}")
        if job.state == "running":
            return success({"state": "running", "kind": job.kind})
        if job.state == "failed":
            status, body = map_exception(job.future.exception())
            return JSONResponse(body, status_code=status)
        return success({"state": "done", "kind": job.kind, "result": job.future.result()})

    return app
