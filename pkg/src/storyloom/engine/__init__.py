from .engine import SessionSnapshot, StoryEngine
from .genres import Genre, GenreCatalog
from .types import (
    Awaiting,
    GameConfig,
    GameSession,
    MemoryState,
    PlotSegment,
    ProficiencySample,
    ProgressCursor,
    SessionStatus,
    StoryOutline,
)

__all__ = [
    "Awaiting",
    "GameConfig",
    "GameSession",
    "Genre",
    "GenreCatalog",
    "MemoryState",
    "PlotSegment",
    "ProficiencySample",
    "ProgressCursor",
    "SessionSnapshot",
    "SessionStatus",
    "StoryEngine",
    "StoryOutline",
]
