from __future__ import annotations

import json
import threading

import pytest

from storyloom.errors import IntegrityError, NotFoundError, ValidationError
from storyloom.store import EventLog, SessionRepository, load_session
from storyloom.engine.types import SessionStatus
from tests.conftest import initialize, play_through, ticking_clock


def _created_payload(session_id="s1"):
    return {
        "session_id": session_id,
        "genre": "fantasy",
        "premise": None,
        "config": {
            "milestone_count": 3,
            "decisions_per_milestone": 2,
            "ending_count": 2,
            "options_per_decision": 3,
        },
    }


class TestAppend:
    def test_first_event_gets_sequence_one(self, event_log):
        record = event_log.append("s1", "session_created", _created_payload())
        assert record.sequence == 1
        assert record.schema_version == 1

    def test_concurrent_appends_are_gapless(self, event_log):
        event_log.append("s1", "session_created", _created_payload())
        barrier = threading.Barrier(8)

        def append_one():
            barrier.wait()
            event_log.append("s1", "level_selected", {"level": "B1"})

        threads = [threading.Thread(target=append_one) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        sequences = [r.sequence for r in event_log.read("s1")]
        assert sequences == list(range(1, 10))

    def test_malformed_payload_rejected_without_consuming_a_sequence(self, event_log):
        event_log.append("s1", "session_created", _created_payload())
        with pytest.raises(ValidationError):
            event_log.append("s1", "level_selected", {"level": "Z9"})
        with pytest.raises(ValidationError):
            event_log.append("s1", "level_selected", {"level": "B1", "extra": 1})
        record = event_log.append("s1", "level_selected", {"level": "B1"})
        assert record.sequence == 2

    def test_unknown_kind_rejected(self, event_log):
        with pytest.raises(ValidationError):
            event_log.append("s1", "something_else", {})

    def test_storage_unsafe_session_id_rejected(self, event_log):
        with pytest.raises(ValidationError):
            event_log.append("../escape", "session_created", _created_payload("../escape"))


class TestReload:
    def test_mid_game_reload_matches_live_state(self, engine):
        initialize(engine, "s1")
        for _ in range(3):
            engine.generate_segment("s1")
            engine.apply_choice("s1", 1)
        live = engine.repo.get("s1")
        assert live.cursor.key() == (1, 1)
        reloaded = load_session(engine.repo.log, "s1")
        assert reloaded.to_dict() == live.to_dict()

    def test_ended_session_reload(self, engine):
        initialize(engine, "s1")
        play_through(engine, "s1", [0, 1])
        reloaded = engine.repo.load_fresh("s1")
        assert reloaded.status == SessionStatus.ENDED
        assert len(reloaded.segments) == 7

    def test_unknown_session_not_found(self, event_log):
        with pytest.raises(NotFoundError):
            event_log.read("ghost")

    def test_sequence_gap_is_an_integrity_error(self, engine, event_log):
        initialize(engine, "s1")
        path = event_log.root / "sessions" / "s1" / "events.jsonl"
        lines = path.read_text().splitlines()
        del lines[1]  # create a gap at sequence 2
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(IntegrityError) as exc_info:
            event_log.read("s1")
        assert exc_info.value.sequence == 2

    def test_corrupt_middle_line_is_an_integrity_error(self, engine, event_log):
        initialize(engine, "s1")
        path = event_log.root / "sessions" / "s1" / "events.jsonl"
        lines = path.read_text().splitlines()
        lines[1] = lines[1][: len(lines[1]) // 2]  # mangle a non-final line
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(IntegrityError) as exc_info:
            event_log.read("s1")
        assert exc_info.value.sequence == 2

    def test_torn_final_line_loses_only_the_inflight_event(self, engine, event_log):
        initialize(engine, "s1")
        path = event_log.root / "sessions" / "s1" / "events.jsonl"
        full = event_log.read("s1")
        text = path.read_text()
        lines = text.splitlines()
        torn = "\n".join(lines[:-1]) + "\n" + lines[-1][: len(lines[-1]) // 2]
        path.write_text(torn)
        records = event_log.read("s1")
        assert [r.sequence for r in records] == [r.sequence for r in full[:-1]]


class TestSnapshots:
    def test_snapshot_written_every_20_events_and_used_for_reload(self, engine, event_log):
        initialize(engine, "s1")
        play_through(engine, "s1", [2, 1, 0])  # 23 events in total
        snapshot = event_log.read_snapshot("s1")
        assert snapshot is not None and snapshot[0] == 20

        live = engine.repo.get("s1").to_dict()
        # Corrupt an event before the snapshot point: reload must still work
        path = event_log.root / "sessions" / "s1" / "events.jsonl"
        lines = path.read_text().splitlines()
        lines[4] = "corrupted-before-snapshot"
        path.write_text("\n".join(lines) + "\n")
        assert load_session(event_log, "s1").to_dict() == live

    def test_snapshot_state_round_trips_exactly(self, engine, event_log):
        from storyloom.engine.types import GameSession

        initialize(engine, "s1")
        play_through(engine, "s1", [0, 0, 1])
        _, state = event_log.read_snapshot("s1")
        assert GameSession.from_dict(state).to_dict() == state
        assert json.dumps(state, sort_keys=True)  # JSON-serializable as stored


class TestListing:
    def test_no_sessions_gives_empty_list(self, repo):
        assert repo.list_summaries() == []

    def test_filter_by_status(self, engine):
        initialize(engine, "done")
        play_through(engine, "done", [0])
        initialize(engine, "open")
        ended = engine.repo.list_summaries(status=SessionStatus.ENDED)
        assert [s["session_id"] for s in ended] == ["done"]

    def test_ten_sessions_report_correct_cursors(self, engine):
        for n in range(10):
            sid = f"s{n}"
            initialize(engine, sid)
            for _ in range(n % 3):
                engine.generate_segment(sid)
                engine.apply_choice(sid, 0)
        summaries = engine.repo.list_summaries()
        assert len(summaries) == 10
        for summary in summaries:
            n = int(summary["session_id"][1:])
            session = engine.repo.get(summary["session_id"])
            assert summary["cursor"] == session.cursor.to_dict()
            assert summary["segment_count"] == n % 3


class TestRepository:
    def test_record_on_missing_session_not_found(self, repo):
        with pytest.raises(NotFoundError):
            repo.record("ghost", "level_selected", {"level": "B1"})

    def test_cold_cache_load_then_mutate(self, engine, event_log, gateway):
        from storyloom.engine import StoryEngine

        initialize(engine, "s1")
        engine.generate_segment("s1")
        # A second repository over the same log (fresh process simulation)
        cold_repo = SessionRepository(event_log)
        cold_engine = StoryEngine(gateway, cold_repo)
        session = cold_engine.apply_choice("s1", 0)
        assert session.cursor.key() == (0, 1)
