"""Event reducer: the single place session state is derived from events.

Live gameplay and reload both go through :func:`apply_event`, so a
rehydrated session is equal to the live one by construction.
"""

from __future__ import annotations

from ..errors import IntegrityError, NotFoundError
from ..levels import CefrLevel
from ..engine.types import (
    Awaiting,
    GameConfig,
    GameSession,
    PlotSegment,
    ProficiencySample,
    ProgressCursor,
    SessionStatus,
    StoryOutline,
)
from .events import EventRecord
from .log import EventLog


def apply_event(session: GameSession | None, record: EventRecord) -> GameSession:
    kind = record.kind
    payload = record.payload

    if kind == "session_created":
        if session is not None:
            raise IntegrityError(record.session_id, record.sequence, "duplicate session_created")
        return GameSession(
            session_id=payload["session_id"],
            genre=payload["genre"],
            premise=payload["premise"],
            config=GameConfig.from_dict(payload["config"]),
        )

    if session is None:
        raise IntegrityError(record.session_id, record.sequence, f"{kind} before session_created")

    if kind == "samples_generated":
        session.samples = [ProficiencySample.from_dict(s) for s in payload["samples"]]
        session.status = SessionStatus.SAMPLING
    elif kind == "level_selected":
        session.memory.level = CefrLevel(payload["level"])
        if session.memory.outline is not None:
            session.status = SessionStatus.READY
    elif kind == "outline_generated":
        session.memory.outline = StoryOutline.from_dict(payload["outline"])
        if session.memory.level is not None:
            session.status = SessionStatus.READY
    elif kind == "segment_generated":
        segment = PlotSegment.from_dict(payload["segment"])
        session.segments.append(segment)
        session.cursor = ProgressCursor(
            segment.cursor_at_generation.milestone_index,
            segment.cursor_at_generation.decision_index,
            Awaiting.CHOICE,
        )
        session.status = SessionStatus.IN_PROGRESS
    elif kind == "choice_applied":
        segment = session.segment_by_id(payload["segment_id"])
        if segment is None:
            raise IntegrityError(record.session_id, record.sequence, "choice for unknown segment")
        segment.chosen_option = payload["option_index"]
        session.cursor = session.cursor.advanced_after_choice(session.config)
    elif kind == "summary_appended":
        session.memory.summaries.append(payload["summary"])
    elif kind == "ending_generated":
        session.segments.append(PlotSegment.from_dict(payload["segment"]))
        session.cursor = ProgressCursor(
            session.cursor.milestone_index, session.cursor.decision_index, Awaiting.DONE
        )
        session.status = SessionStatus.ENDED
    elif kind == "query_explained":
        from ..assistant import QueryRecord

        session.queries.append(QueryRecord.from_dict(payload["record"]))
    else:
        raise IntegrityError(record.session_id, record.sequence, f"unknown event kind {kind!r}")

    return session


def rehydrate(records: list[EventRecord], snapshot: tuple[int, dict] | None = None) -> GameSession:
    session: GameSession | None = None
    if snapshot is not None:
        session = GameSession.from_dict(snapshot[1])
    for record in records:
        session = apply_event(session, record)
    if session is None:
        raise NotFoundError("no events to rehydrate")
    return session


def load_session(log: EventLog, session_id: str) -> GameSession:
    """Rebuild a session from disk: latest snapshot plus the event tail."""
    snapshot = log.read_snapshot(session_id)
    if snapshot is not None:
        tail = log.read(session_id, after=snapshot[0])
        return rehydrate(tail, snapshot=snapshot)
    return rehydrate(log.read(session_id))
