"""Game state types and their (de)serialization.

Everything here is plain data. The state machine rules live in
:mod:`storyloom.engine.engine`; the event reducer that rebuilds these
objects from the persisted log lives in :mod:`storyloom.store.replay`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..errors import ValidationError
from ..levels import CefrLevel


class SessionStatus(str, Enum):
    CREATED = "created"
    SAMPLING = "sampling"
    READY = "ready"
    IN_PROGRESS = "in_progress"
    ENDED = "ended"


class Awaiting(str, Enum):
    SEGMENT = "segment"
    CHOICE = "choice"
    ENDING = "ending"
    DONE = "done"


@dataclass(frozen=True)
class GameConfig:
    milestone_count: int = 3
    decisions_per_milestone: int = 2
    ending_count: int = 2
    options_per_decision: int = 3

    def __post_init__(self):
        for name in ("milestone_count", "decisions_per_milestone", "ending_count"):
            if not isinstance(getattr(self, name), int) or getattr(self, name) < 1:
                raise ValidationError(f"{name} must be a positive integer")
        if not isinstance(self.options_per_decision, int) or self.options_per_decision < 2:
            raise ValidationError("options_per_decision must be an integer >= 2")

    @property
    def decision_total(self) -> int:
        return self.milestone_count * self.decisions_per_milestone

    def to_dict(self) -> dict:
        return {
            "milestone_count": self.milestone_count,
            "decisions_per_milestone": self.decisions_per_milestone,
            "ending_count": self.ending_count,
            "options_per_decision": self.options_per_decision,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GameConfig":
        return cls(**data)


@dataclass(frozen=True)
class ProgressCursor:
    """Position in the milestone/decision grid, 0-based."""

    milestone_index: int = 0
    decision_index: int = 0
    awaiting: Awaiting = Awaiting.SEGMENT

    def key(self) -> tuple[int, int]:
        return (self.milestone_index, self.decision_index)

    def advanced_after_choice(self, config: GameConfig) -> "ProgressCursor":
        """Next cursor once the choice at this position is applied."""
        if self.decision_index + 1 < config.decisions_per_milestone:
            return ProgressCursor(self.milestone_index, self.decision_index + 1, Awaiting.SEGMENT)
        if self.milestone_index + 1 < config.milestone_count:
            return ProgressCursor(self.milestone_index + 1, 0, Awaiting.SEGMENT)
        return ProgressCursor(self.milestone_index, self.decision_index, Awaiting.ENDING)

    def to_dict(self) -> dict:
        return {
            "milestone_index": self.milestone_index,
            "decision_index": self.decision_index,
            "awaiting": self.awaiting.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProgressCursor":
        return cls(data["milestone_index"], data["decision_index"], Awaiting(data["awaiting"]))


@dataclass
class StoryOutline:
    milestones: list[str]
    decision_slots: list[list[str]]  # one inner list per milestone
    endings: list[str]

    def validate_against(self, config: GameConfig) -> None:
        if len(self.milestones) != config.milestone_count:
            raise ValidationError(
                f"outline has {len(self.milestones)} milestones, config wants {config.milestone_count}"
            )
        if len(self.decision_slots) != config.milestone_count or any(
            len(slots) != config.decisions_per_milestone for slots in self.decision_slots
        ):
            raise ValidationError("outline decision slots do not match the configured grid")
        if len(self.endings) != config.ending_count:
            raise ValidationError(
                f"outline has {len(self.endings)} endings, config wants {config.ending_count}"
            )

    def to_dict(self) -> dict:
        return {
            "milestones": list(self.milestones),
            "decision_slots": [list(s) for s in self.decision_slots],
            "endings": list(self.endings),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StoryOutline":
        return cls(
            milestones=list(data["milestones"]),
            decision_slots=[list(s) for s in data["decision_slots"]],
            endings=list(data["endings"]),
        )


@dataclass(frozen=True)
class ProficiencySample:
    level: CefrLevel
    text: str

    def to_dict(self) -> dict:
        return {"level": self.level.value, "text": self.text}

    @classmethod
    def from_dict(cls, data: dict) -> "ProficiencySample":
        return cls(CefrLevel(data["level"]), data["text"])


@dataclass
class PlotSegment:
    segment_id: str
    cursor_at_generation: ProgressCursor
    text: str
    options: list[str] = field(default_factory=list)
    chosen_option: int | None = None

    @property
    def is_ending(self) -> bool:
        return not self.options

    def to_dict(self) -> dict:
        return {
            "segment_id": self.segment_id,
            "cursor_at_generation": self.cursor_at_generation.to_dict(),
            "text": self.text,
            "options": list(self.options),
            "chosen_option": self.chosen_option,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PlotSegment":
        return cls(
            segment_id=data["segment_id"],
            cursor_at_generation=ProgressCursor.from_dict(data["cursor_at_generation"]),
            text=data["text"],
            options=list(data["options"]),
            chosen_option=data.get("chosen_option"),
        )


@dataclass
class MemoryState:
    """The shared story memory: outline, selected level, rolling summaries."""

    level: CefrLevel | None = None
    outline: StoryOutline | None = None
    summaries: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "level": self.level.value if self.level else None,
            "outline": self.outline.to_dict() if self.outline else None,
            "summaries": list(self.summaries),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MemoryState":
        return cls(
            level=CefrLevel(data["level"]) if data.get("level") else None,
            outline=StoryOutline.from_dict(data["outline"]) if data.get("outline") else None,
            summaries=list(data.get("summaries", [])),
        )


@dataclass
class GameSession:
    session_id: str
    genre: str
    premise: str | None
    config: GameConfig
    status: SessionStatus = SessionStatus.CREATED
    cursor: ProgressCursor = field(default_factory=ProgressCursor)
    memory: MemoryState = field(default_factory=MemoryState)
    samples: list[ProficiencySample] = field(default_factory=list)
    segments: list[PlotSegment] = field(default_factory=list)
    queries: list = field(default_factory=list)  # assistant.QueryRecord, appended only

    @property
    def level(self) -> CefrLevel | None:
        return self.memory.level

    @property
    def outline(self) -> StoryOutline | None:
        return self.memory.outline

    def segment_by_id(self, segment_id: str) -> PlotSegment | None:
        for segment in self.segments:
            if segment.segment_id == segment_id:
                return segment
        return None

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "genre": self.genre,
            "premise": self.premise,
            "config": self.config.to_dict(),
            "status": self.status.value,
            "cursor": self.cursor.to_dict(),
            "memory": self.memory.to_dict(),
            "samples": [s.to_dict() for s in self.samples],
            "segments": [s.to_dict() for s in self.segments],
            "queries": [q.to_dict() for q in self.queries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GameSession":
        from ..assistant import QueryRecord

        return cls(
            session_id=data["session_id"],
            genre=data["genre"],
            premise=data.get("premise"),
            config=GameConfig.from_dict(data["config"]),
            status=SessionStatus(data["status"]),
            cursor=ProgressCursor.from_dict(data["cursor"]),
            memory=MemoryState.from_dict(data["memory"]),
            samples=[ProficiencySample.from_dict(s) for s in data.get("samples", [])],
            segments=[PlotSegment.from_dict(s) for s in data.get("segments", [])],
            queries=[QueryRecord.from_dict(q) for q in data.get("queries", [])],
        )
