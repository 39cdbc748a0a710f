"""Append-only event log: one JSONL stream per session, plus snapshots.

Layout under the storage root:

    sessions/<session_id>/events.jsonl     append-only event stream
    sessions/<session_id>/snapshot.json    latest state snapshot (optional)

Appends are flushed (and fsynced unless disabled) before returning, so a
crash between two events loses at most the event being written. A torn
final line is treated as that lost in-flight event; anything else that
breaks the stream raises IntegrityError naming the first bad sequence.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from ..errors import IntegrityError, NotFoundError, StorageError, ValidationError
from .events import SCHEMA_VERSION, EventRecord, validate_payload

log = logging.getLogger(__name__)

_SESSION_ID_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")

Clock = Callable[[], datetime]


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _serialize(record: EventRecord) -> str:
    return json.dumps(
        {
            "seq": record.sequence,
            "kind": record.kind,
            "ts": record.timestamp.isoformat(),
            "v": record.schema_version,
            "payload": record.payload,
        },
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )


class EventLog:
    def __init__(self, root: str | Path, fsync: bool = True, clock: Clock = utc_now):
        self.root = Path(root)
        self.fsync = fsync
        self.clock = clock
        (self.root / "sessions").mkdir(parents=True, exist_ok=True)
        self._mutex = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        self._next_seq: dict[str, int] = {}

    # -- internals ---------------------------------------------------------

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._mutex:
            if session_id not in self._session_locks:
                self._session_locks[session_id] = threading.Lock()
            return self._session_locks[session_id]

    def _session_dir(self, session_id: str) -> Path:
        if not _SESSION_ID_RE.match(session_id):
            raise ValidationError(f"session id {session_id!r} is not storage-safe")
        return self.root / "sessions" / session_id

    def _events_path(self, session_id: str) -> Path:
        return self._session_dir(session_id) / "events.jsonl"

    def _scan_last_sequence(self, session_id: str) -> int:
        path = self._events_path(session_id)
        if not path.exists():
            return 0
        records = self._parse_stream(session_id, path.read_text(encoding="utf-8"))
        return records[-1].sequence if records else 0

    def _parse_stream(self, session_id: str, text: str, skip: int = 0) -> list[EventRecord]:
        """Parse the stream; ``skip`` leading lines are trusted and not parsed.

        Skipping is sound because an intact stream is gapless: line N holds
        sequence N+1, which snapshot loading relies on to avoid re-reading
        (or re-validating) everything before the snapshot point.
        """
        records: list[EventRecord] = []
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        lines = lines[skip:]
        for index, line in enumerate(lines):
            expected = skip + len(records) + 1
            try:
                data = json.loads(line)
                record = EventRecord(
                    session_id=session_id,
                    sequence=data["seq"],
                    kind=data["kind"],
                    payload=data["payload"],
                    timestamp=datetime.fromisoformat(data["ts"]),
                    schema_version=data.get("v", SCHEMA_VERSION),
                )
            except (ValueError, KeyError, TypeError) as exc:
                if index == len(lines) - 1:
                    # Torn final line: the in-flight event of a crash.
                    log.warning("session %s: dropping torn final event line", session_id)
                    break
                raise IntegrityError(session_id, expected, f"unparsable event line: {exc}") from exc
            if record.sequence != expected:
                raise IntegrityError(
                    session_id, expected, f"sequence gap (found {record.sequence})"
                )
            records.append(record)
        return records

    # -- contract operations -------------------------------------------------

    def append(self, session_id: str, kind: str, payload: dict) -> EventRecord:
        validate_payload(kind, payload)
        session_dir = self._session_dir(session_id)
        with self._lock_for(session_id):
            if session_id not in self._next_seq:
                self._next_seq[session_id] = self._scan_last_sequence(session_id) + 1
            sequence = self._next_seq[session_id]
            record = EventRecord(
                session_id=session_id,
                sequence=sequence,
                kind=kind,
                payload=payload,
                timestamp=self.clock(),
            )
            try:
                session_dir.mkdir(parents=True, exist_ok=True)
                with open(self._events_path(session_id), "a", encoding="utf-8") as handle:
                    handle.write(_serialize(record) + "\n")
                    handle.flush()
                    if self.fsync:
                        os.fsync(handle.fileno())
            except OSError as exc:
                raise StorageError(f"failed to append event for {session_id}: {exc}") from exc
            self._next_seq[session_id] = sequence + 1
        return record

    def read(self, session_id: str, after: int = 0) -> list[EventRecord]:
        path = self._events_path(session_id)
        if not path.exists():
            raise NotFoundError(f"no session {session_id!r}")
        return self._parse_stream(session_id, path.read_text(encoding="utf-8"), skip=after)

    def has_session(self, session_id: str) -> bool:
        return self._events_path(session_id).exists()

    def session_ids(self) -> list[str]:
        base = self.root / "sessions"
        return sorted(p.name for p in base.iterdir() if (p / "events.jsonl").exists())

    # -- snapshots -----------------------------------------------------------

    def write_snapshot(self, session_id: str, sequence: int, state: dict) -> None:
        path = self._session_dir(session_id) / "snapshot.json"
        tmp = path.with_suffix(".json.tmp")
        try:
            tmp.write_text(
                json.dumps({"seq": sequence, "state": state}, sort_keys=True, ensure_ascii=False),
                encoding="utf-8",
            )
            tmp.replace(path)
        except OSError as exc:
            raise StorageError(f"failed to write snapshot for {session_id}: {exc}") from exc

    def read_snapshot(self, session_id: str) -> tuple[int, dict] | None:
        path = self._session_dir(session_id) / "snapshot.json"
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            return data["seq"], data["state"]
        except (ValueError, KeyError) as exc:
            log.warning("session %s: unreadable snapshot ignored (%s)", session_id, exc)
            return None
