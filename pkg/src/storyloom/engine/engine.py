"""The game state machine and both story pipelines.

Initialization: six leveled samples plus a structured outline (these may run
concurrently for one session). Play loop: segment -> choice -> summary,
repeated over every milestone/decision slot, then an ending conditioned on
the accumulated summaries.

All state changes go through the session repository as events; the engine
never mutates a session object directly.
"""

from __future__ import annotations

import copy
import re
import uuid
from dataclasses import dataclass

from ..errors import SequencingError, StructuredOutputError, ValidationError
from ..gateway import LlmGateway, ModelRole
from ..levels import CefrLevel
from ..store.repo import SessionRepository
from . import locks
from .genres import GenreCatalog
from .parsing import OutputFormatError, parse_outline, parse_samples, parse_segment
from .types import (
    Awaiting,
    GameConfig,
    GameSession,
    PlotSegment,
    ProficiencySample,
    ProgressCursor,
    SessionStatus,
    StoryOutline,
)

# One initial attempt plus this many re-prompts for structured replies.
STRUCTURED_REPROMPTS = 2

# A summary may use at most this fraction of its segment's characters.
SUMMARY_RATIO = 0.5

_REPROMPT_SUFFIX = (
    "\n\nYour previous reply could not be parsed. "
    "Follow the required output format exactly."
)


@dataclass(frozen=True)
class SessionSnapshot:
    status: SessionStatus
    cursor: ProgressCursor
    segments: list[PlotSegment]


def _numbered(lines: list[str], prefix: str = "") -> str:
    return "\n".join(f"{prefix}{n}. {line}" for n, line in enumerate(lines, start=1))


def render_outline(outline: StoryOutline) -> str:
    slot_lines = [
        f"{i + 1}.{j + 1} {slot}"
        for i, slots in enumerate(outline.decision_slots)
        for j, slot in enumerate(slots)
    ]
    return (
        "Milestones:\n" + _numbered(outline.milestones)
        + "\nDecision slots:\n" + "\n".join(slot_lines)
        + "\nCandidate endings:\n" + _numbered(outline.endings)
    )


def render_story_so_far(summaries: list[str]) -> str:
    if not summaries:
        return "(the story is just beginning)"
    return "\n".join(f"- {summary}" for summary in summaries)


def truncate_at_sentence(text: str, limit: int) -> str:
    """Cut text to at most ``limit`` chars, preferring a sentence boundary."""
    if len(text) <= limit:
        return text
    head = text[:limit]
    sentence_ends = [m.end() for m in re.finditer(r"[.!?](?=\s|$)", head)]
    if sentence_ends:
        return head[: sentence_ends[-1]].strip()
    if " " in head:
        return head[: head.rfind(" ")].strip()
    return head.strip()


class StoryEngine:
    def __init__(
        self,
        gateway: LlmGateway,
        repo: SessionRepository,
        genres: GenreCatalog | None = None,
    ):
        self.gateway = gateway
        self.repo = repo
        self.genres = genres or GenreCatalog.default()
        self._lanes = locks.SessionLanes()

    # -- initialization pipeline -------------------------------------------

    def create_session(
        self,
        genre: str,
        premise: str | None = None,
        config: GameConfig | None = None,
        session_id: str | None = None,
    ) -> GameSession:
        self.genres.require(genre)
        config = config or GameConfig()
        session_id = session_id or uuid.uuid4().hex
        payload = {
            "session_id": session_id,
            "genre": genre,
            "premise": premise,
            "config": config.to_dict(),
        }
        return self.repo.create(payload)

    def generate_proficiency_samples(self, session_id: str) -> list[ProficiencySample]:
        with self._lanes.acquire(session_id, locks.SAMPLES):
            session = self.repo.get(session_id)
            if session.status not in (SessionStatus.CREATED, SessionStatus.SAMPLING):
                raise SequencingError(
                    f"cannot generate samples while session is {session.status.value}"
                )
            bindings = {
                "genre": session.genre,
                "premise": session.premise or "",
            }
            text = self._complete_structured(
                ModelRole.PROFICIENCY, "proficiency_samples", bindings, session_id, parse_samples
            )
            samples = parse_samples(text)
            session = self.repo.record(
                session_id, "samples_generated", {"samples": [s.to_dict() for s in samples]}
            )
            return list(session.samples)

    def generate_outline(self, session_id: str) -> StoryOutline:
        with self._lanes.acquire(session_id, locks.OUTLINE):
            session = self.repo.get(session_id)
            if session.status not in (SessionStatus.CREATED, SessionStatus.SAMPLING):
                raise SequencingError(
                    f"cannot generate the outline while session is {session.status.value}"
                )
            config = session.config
            bindings = {
                "genre": session.genre,
                "premise": session.premise or "",
                "milestone_count": str(config.milestone_count),
                "decisions_per_milestone": str(config.decisions_per_milestone),
                "ending_count": str(config.ending_count),
            }
            text = self._complete_structured(
                ModelRole.OUTLINE,
                "story_outline",
                bindings,
                session_id,
                lambda reply: parse_outline(reply, config),
            )
            outline = parse_outline(text, config)
            outline.validate_against(config)
            session = self.repo.record(
                session_id, "outline_generated", {"outline": outline.to_dict()}
            )
            return session.memory.outline

    def select_proficiency(self, session_id: str, level: str) -> GameSession:
        with self._lanes.acquire(session_id, locks.PLAY):
            session = self.repo.get(session_id)
            try:
                parsed = CefrLevel.parse(level) if isinstance(level, str) else CefrLevel(level)
            except ValueError as exc:
                raise ValidationError(str(exc)) from None
            if session.status not in (SessionStatus.SAMPLING, SessionStatus.READY):
                raise SequencingError(
                    f"cannot select a level while session is {session.status.value}"
                )
            if session.segments:
                raise SequencingError("the level is frozen once the story has started")
            if parsed not in {sample.level for sample in session.samples}:
                raise ValidationError(f"level {parsed.value} is not among the generated samples")
            return self.repo.record(session_id, "level_selected", {"level": parsed.value})

    # -- plot loop -----------------------------------------------------------

    def generate_segment(self, session_id: str) -> PlotSegment:
        with self._lanes.acquire(session_id, locks.PLAY):
            session = self.repo.get(session_id)
            if session.status not in (SessionStatus.READY, SessionStatus.IN_PROGRESS):
                raise SequencingError(
                    f"cannot generate a segment while session is {session.status.value}"
                )
            if session.cursor.awaiting != Awaiting.SEGMENT:
                raise SequencingError(f"session is awaiting {session.cursor.awaiting.value}")

            cursor = session.cursor
            outline = session.memory.outline
            config = session.config
            bindings = {
                "genre": session.genre,
                "level": session.memory.level.value,
                "outline": render_outline(outline),
                "story_so_far": render_story_so_far(session.memory.summaries),
                "milestone_number": str(cursor.milestone_index + 1),
                "milestone": outline.milestones[cursor.milestone_index],
                "decision_slot": outline.decision_slots[cursor.milestone_index][cursor.decision_index],
                "option_count": str(config.options_per_decision),
            }
            text = self._complete_structured(
                ModelRole.PLOT,
                "plot_segment",
                bindings,
                session_id,
                lambda reply: parse_segment(reply, config.options_per_decision),
            )
            narrative, options = parse_segment(text, config.options_per_decision)
            segment = PlotSegment(
                segment_id=f"seg-{len(session.segments) + 1}",
                cursor_at_generation=ProgressCursor(
                    cursor.milestone_index, cursor.decision_index, Awaiting.SEGMENT
                ),
                text=narrative,
                options=options,
            )
            session = self.repo.record(
                session_id, "segment_generated", {"segment": segment.to_dict()}
            )
            return session.segments[-1]

    def apply_choice(self, session_id: str, option_index: int) -> GameSession:
        with self._lanes.acquire(session_id, locks.PLAY):
            session = self.repo.get(session_id)
            if session.cursor.awaiting != Awaiting.CHOICE:
                raise SequencingError(f"session is awaiting {session.cursor.awaiting.value}")
            segment = session.segments[-1]
            if not isinstance(option_index, int) or not 0 <= option_index < len(segment.options):
                raise ValidationError(
                    f"option_index {option_index!r} out of range (0..{len(segment.options) - 1})"
                )
            summary = self.summarize_segment(segment, option_index, session_id=session_id)
            self.repo.record(
                session_id,
                "choice_applied",
                {"segment_id": segment.segment_id, "option_index": option_index},
            )
            return self.repo.record(
                session_id,
                "summary_appended",
                {"segment_id": segment.segment_id, "summary": summary},
            )

    def summarize_segment(
        self, segment: PlotSegment, chosen_option: int, session_id: str | None = None
    ) -> str:
        """Condense one segment; the result never exceeds half its length."""
        if not segment.text.strip():
            raise ValidationError("cannot summarize an empty segment")
        if segment.options and not 0 <= chosen_option < len(segment.options):
            raise ValidationError(f"chosen_option {chosen_option} out of range")
        option_text = segment.options[chosen_option] if segment.options else "(finale)"
        limit = max(1, int(len(segment.text) * SUMMARY_RATIO))
        bindings = {
            "segment": segment.text,
            "chosen_option": option_text,
            "limit": str(limit),
        }
        result = self.gateway.complete_template(
            ModelRole.SUMMARY, "segment_summary", bindings, session_id=session_id
        )
        summary = result.text.strip()
        if len(summary) > limit:
            retry = self.gateway.complete_template(
                ModelRole.SUMMARY,
                "segment_summary",
                bindings,
                session_id=session_id,
                prompt_suffix=(
                    f"\n\nYour previous summary used {len(summary)} characters. "
                    f"It must be at most {limit} characters."
                ),
            )
            summary = retry.text.strip()
        if len(summary) > limit:
            summary = truncate_at_sentence(summary, limit)
        return summary

    def generate_ending(self, session_id: str) -> PlotSegment:
        with self._lanes.acquire(session_id, locks.PLAY):
            session = self.repo.get(session_id)
            if session.cursor.awaiting != Awaiting.ENDING:
                raise SequencingError(f"session is awaiting {session.cursor.awaiting.value}")
            outline = session.memory.outline
            bindings = {
                "genre": session.genre,
                "level": session.memory.level.value,
                "outline": render_outline(outline),
                "endings": _numbered(outline.endings),
                "story_so_far": render_story_so_far(session.memory.summaries),
            }
            result = self.gateway.complete_template(
                ModelRole.PLOT, "story_ending", bindings, session_id=session_id
            )
            segment = PlotSegment(
                segment_id=f"seg-{len(session.segments) + 1}",
                cursor_at_generation=ProgressCursor(
                    session.cursor.milestone_index, session.cursor.decision_index, Awaiting.ENDING
                ),
                text=result.text.strip(),
                options=[],
            )
            session = self.repo.record(
                session_id, "ending_generated", {"segment": segment.to_dict()}
            )
            return session.segments[-1]

    # -- read side -----------------------------------------------------------

    def session_status(self, session_id: str) -> SessionSnapshot:
        session = self.repo.get(session_id)
        return SessionSnapshot(
            status=session.status,
            cursor=session.cursor,
            segments=copy.deepcopy(session.segments),
        )

    # -- helpers ---------------------------------------------------------------

    def _complete_structured(self, role, template_id, bindings, session_id, parse) -> str:
        """Request a structured reply, re-prompting up to the allowed bound."""
        last_error: OutputFormatError | None = None
        for attempt in range(1 + STRUCTURED_REPROMPTS):
            suffix = _REPROMPT_SUFFIX if attempt else ""
            result = self.gateway.complete_template(
                role, template_id, bindings, session_id=session_id, prompt_suffix=suffix
            )
            try:
                parse(result.text)
                return result.text
            except OutputFormatError as exc:
                last_error = exc
        raise StructuredOutputError(
            f"{template_id} reply unparsable after {1 + STRUCTURED_REPROMPTS} attempts: {last_error}",
            attempts=1 + STRUCTURED_REPROMPTS,
        )
