"""In-game language help: explain any highlighted string in context.

Every lookup becomes a QueryRecord persisted to the session's event stream
before the explanation is returned, and the review list is just those
records newest-first. The TSV export here is the input format of the study
toolkit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING, Callable

from .errors import NotFoundError, ValidationError
from .gateway import LlmGateway, ModelRole
from .levels import CefrLevel

if TYPE_CHECKING:
    from .store.repo import SessionRepository

# Context window: the sentence containing the selection plus one sentence on
# each side, capped at this many characters.
CONTEXT_CAP = 500

_SENTENCE_END = re.compile(r"[.!?]+[\"”'’)\]]*(?:\s+|$)")


@dataclass(frozen=True)
class QueryRecord:
    query_id: str
    session_id: str
    segment_ref: str
    selected_string: str
    context_window: str
    level: CefrLevel
    explanation: str
    created_at: datetime

    def to_dict(self) -> dict:
        return {
            "query_id": self.query_id,
            "session_id": self.session_id,
            "segment_ref": self.segment_ref,
            "selected_string": self.selected_string,
            "context_window": self.context_window,
            "level": self.level.value,
            "explanation": self.explanation,
            "created_at": self.created_at.isoformat(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QueryRecord":
        return cls(
            query_id=data["query_id"],
            session_id=data["session_id"],
            segment_ref=data["segment_ref"],
            selected_string=data["selected_string"],
            context_window=data["context_window"],
            level=CefrLevel(data["level"]),
            explanation=data["explanation"],
            created_at=datetime.fromisoformat(data["created_at"]),
        )


@dataclass(frozen=True)
class ReviewPage:
    total: int
    offset: int
    records: list[QueryRecord]


def sentence_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    start = 0
    for match in _SENTENCE_END.finditer(text):
        spans.append((start, match.end()))
        start = match.end()
    if start < len(text):
        spans.append((start, len(text)))
    return spans or [(0, len(text))]


def context_window(text: str, start: int, end: int, cap: int = CONTEXT_CAP) -> str:
    """Window around [start, end): containing sentence(s) +- one, capped.

    Always a contiguous slice of ``text`` that covers the selection, so the
    substring invariant holds by construction.
    """
    spans = sentence_spans(text)
    first = next(i for i, (s, e) in enumerate(spans) if s <= start < e)
    last = next(i for i, (s, e) in enumerate(spans) if s < end <= e)

    window_start = spans[max(0, first - 1)][0]
    window_end = spans[min(len(spans) - 1, last + 1)][1]
    if window_end - window_start > cap:
        window_start, window_end = spans[first][0], spans[last][1]
    if window_end - window_start > cap:
        # Even the selection's own sentences blow the cap: center on the selection.
        spare = max(0, cap - (end - start))
        window_start = max(0, start - spare // 2)
        window_end = min(len(text), window_start + max(cap, end - start))
        if window_end < end:
            window_end = end
    return text[window_start:window_end]


class LanguageAssistant:
    def __init__(
        self,
        gateway: LlmGateway,
        repo: "SessionRepository",
        clock: Callable[[], datetime] | None = None,
    ):
        self.gateway = gateway
        self.repo = repo
        self.clock = clock or (lambda: datetime.now(timezone.utc))

    def explain(
        self,
        session_id: str,
        segment_id: str,
        selected_string: str,
        selection_offsets: tuple[int, int],
    ) -> QueryRecord:
        session = self.repo.get(session_id)
        segment = session.segment_by_id(segment_id)
        if segment is None:
            raise NotFoundError(f"no segment {segment_id!r} in session {session_id}")
        start, end = selection_offsets
        if not (isinstance(start, int) and isinstance(end, int)) or not 0 <= start < end <= len(segment.text):
            raise ValidationError(f"selection offsets ({start}, {end}) outside the segment text")
        if segment.text[start:end] != selected_string:
            raise ValidationError("selection offsets do not match the selected string")
        if session.memory.level is None:
            raise ValidationError("session has no proficiency level selected yet")

        window = context_window(segment.text, start, end)
        level = session.memory.level
        result = self.gateway.complete_template(
            ModelRole.LANGUAGE,
            "explain_selection",
            {"selected": selected_string, "context": window, "level": level.value},
            session_id=session_id,
        )
        record = QueryRecord(
            query_id=f"q-{len(session.queries) + 1}",
            session_id=session_id,
            segment_ref=segment_id,
            selected_string=selected_string,
            context_window=window,
            level=level,
            explanation=result.text.strip(),
            created_at=self.clock(),
        )
        # Durable before the caller ever sees the record.
        self.repo.record(session_id, "query_explained", {"record": record.to_dict()})
        return record

    def list_queries(self, session_id: str, offset: int = 0, limit: int = 50) -> ReviewPage:
        session = self.repo.get(session_id)
        newest_first = list(reversed(session.queries))
        return ReviewPage(
            total=len(newest_first),
            offset=offset,
            records=newest_first[offset : offset + limit],
        )

    def export_query_log(self, session_id: str | None = None) -> str:
        """TSV of every QueryRecord field; one session or all of them."""
        if session_id is not None:
            sessions = [self.repo.get(session_id)]
        else:
            sessions = [self.repo.get(sid) for sid in self.repo.log.session_ids()]
        records = [record for session in sessions for record in session.queries]
        return format_query_log(records)

    def write_query_log(self, path: str | Path, session_id: str | None = None) -> int:
        text = self.export_query_log(session_id)
        Path(path).write_text(text, encoding="utf-8")
        return text.count("\n") - 1  # rows excluding the header


# -- TSV format --------------------------------------------------------------

EXPORT_COLUMNS = [
    "query_id",
    "session_id",
    "segment_ref",
    "selected_string",
    "context_window",
    "level",
    "explanation",
    "created_at",
]


def _escape(value: str) -> str:
    return (
        value.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def _unescape(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt, "\\" + nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def format_query_log(records: list[QueryRecord]) -> str:
    lines = ["\t".join(EXPORT_COLUMNS)]
    for record in records:
        data = record.to_dict()
        lines.append("\t".join(_escape(str(data[col])) for col in EXPORT_COLUMNS))
    return "\n".join(lines) + "\n"


def parse_query_log(text: str) -> list[QueryRecord]:
    lines = [line for line in text.split("\n") if line != ""]
    if not lines:
        return []
    header = lines[0].split("\t")
    if header != EXPORT_COLUMNS:
        raise ValidationError(f"unexpected query log header: {header}")
    records = []
    for line in lines[1:]:
        fields = line.split("\t")
        if len(fields) != len(EXPORT_COLUMNS):
            raise ValidationError(f"query log row has {len(fields)} fields, expected {len(EXPORT_COLUMNS)}")
        data = {col: _unescape(raw) for col, raw in zip(EXPORT_COLUMNS, fields)}
        records.append(QueryRecord.from_dict(data))
    return records


def read_query_log(path: str | Path) -> list[QueryRecord]:
    return parse_query_log(Path(path).read_text(encoding="utf-8"))
