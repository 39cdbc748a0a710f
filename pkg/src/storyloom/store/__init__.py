from .events import ALL_KINDS, SCHEMA_VERSION, EventRecord
from .log import EventLog
from .replay import apply_event, load_session, rehydrate
from .repo import SessionRepository

__all__ = [
    "ALL_KINDS",
    "EventLog",
    "EventRecord",
    "SCHEMA_VERSION",
    "SessionRepository",
    "apply_event",
    "load_session",
    "rehydrate",
]
