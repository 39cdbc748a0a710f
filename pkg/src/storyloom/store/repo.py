"""Session repository: event appends + reducer application, per session.

The repository is the only writer. Each append validates, persists, then
applies the event to the cached live session under that session's lock, and
writes a state snapshot every ``snapshot_every`` events to bound reload cost.
"""

from __future__ import annotations

import threading

from ..errors import NotFoundError, ValidationError
from ..engine.types import GameSession, SessionStatus
from .log import EventLog
from .replay import apply_event, load_session


class SessionRepository:
    def __init__(self, log: EventLog, snapshot_every: int = 20):
        self.log = log
        self.snapshot_every = snapshot_every
        self._mutex = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._cache: dict[str, GameSession] = {}

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._mutex:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    def create(self, payload: dict) -> GameSession:
        session_id = payload["session_id"]
        with self._lock_for(session_id):
            if session_id in self._cache or self.log.has_session(session_id):
                raise ValidationError(f"session {session_id!r} already exists")
            record = self.log.append(session_id, "session_created", payload)
            session = apply_event(None, record)
            self._cache[session_id] = session
        return session

    def record(self, session_id: str, kind: str, payload: dict) -> GameSession:
        """Append one event and apply it to the live session."""
        with self._lock_for(session_id):
            session = self._get_locked(session_id)
            record = self.log.append(session_id, kind, payload)
            session = apply_event(session, record)
            self._cache[session_id] = session
            if record.sequence % self.snapshot_every == 0:
                self.log.write_snapshot(session_id, record.sequence, session.to_dict())
        return session

    def _get_locked(self, session_id: str) -> GameSession:
        session = self._cache.get(session_id)
        if session is None:
            if not self.log.has_session(session_id):
                raise NotFoundError(f"no session {session_id!r}")
            session = load_session(self.log, session_id)
            self._cache[session_id] = session
        return session

    def get(self, session_id: str) -> GameSession:
        with self._lock_for(session_id):
            return self._get_locked(session_id)

    def exists(self, session_id: str) -> bool:
        return session_id in self._cache or self.log.has_session(session_id)

    def load_fresh(self, session_id: str) -> GameSession:
        """Rebuild purely from disk, bypassing the live cache."""
        if not self.log.has_session(session_id):
            raise NotFoundError(f"no session {session_id!r}")
        return load_session(self.log, session_id)

    def list_summaries(self, status: SessionStatus | None = None) -> list[dict]:
        summaries = []
        for session_id in self.log.session_ids():
            session = self.get(session_id)
            if status is not None and session.status != status:
                continue
            summaries.append(
                {
                    "session_id": session.session_id,
                    "genre": session.genre,
                    "status": session.status.value,
                    "level": session.level.value if session.level else None,
                    "cursor": session.cursor.to_dict(),
                    "segment_count": len(session.segments),
                }
            )
        return summaries
