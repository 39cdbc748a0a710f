from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from storyloom.assistant import LanguageAssistant
from storyloom.engine import StoryEngine
from storyloom.engine.types import Awaiting
from storyloom.gateway import LlmGateway
from storyloom.store import EventLog, SessionRepository


def ticking_clock(start: datetime | None = None):
    """Deterministic clock: advances one second per call."""
    state = {"now": start or datetime(2026, 1, 1, tzinfo=timezone.utc)}

    def tick() -> datetime:
        state["now"] += timedelta(seconds=1)
        return state["now"]

    return tick


class ScriptedProvider:
    """Returns scripted replies in order; repeats the last one when exhausted."""

    provider_id = "scripted"

    def __init__(self, replies):
        self.replies = list(replies)
        self.calls = 0
        self.prompts = []

    def generate(self, request):
        self.prompts.append(request.prompt)
        reply = self.replies[min(self.calls, len(self.replies) - 1)]
        self.calls += 1
        if isinstance(reply, Exception):
            raise reply
        return reply


@pytest.fixture
def gateway():
    return LlmGateway.with_mock(seed=7)


@pytest.fixture
def event_log(tmp_path):
    return EventLog(tmp_path / "store", fsync=False, clock=ticking_clock())


@pytest.fixture
def repo(event_log):
    return SessionRepository(event_log)


@pytest.fixture
def engine(gateway, repo):
    return StoryEngine(gateway, repo)


@pytest.fixture
def assistant(gateway, repo):
    return LanguageAssistant(gateway, repo, clock=ticking_clock())


def initialize(engine: StoryEngine, session_id: str = "s1", level: str = "B1", **kwargs) -> str:
    engine.create_session(kwargs.pop("genre", "fantasy"), session_id=session_id, **kwargs)
    engine.generate_proficiency_samples(session_id)
    engine.generate_outline(session_id)
    engine.select_proficiency(session_id, level)
    return session_id


def play_through(engine: StoryEngine, session_id: str, choices) -> None:
    """Drive an initialized session to its ending with the given choices."""
    index = 0
    session = engine.repo.get(session_id)
    while session.cursor.awaiting != Awaiting.ENDING:
        engine.generate_segment(session_id)
        session = engine.apply_choice(session_id, choices[index % len(choices)])
        index += 1
    engine.generate_ending(session_id)
