from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from storyloom.assistant import (
    LanguageAssistant,
    QueryRecord,
    context_window,
    format_query_log,
    parse_query_log,
    read_query_log,
)
from storyloom.errors import NotFoundError, ProviderUnavailableError, ValidationError
from storyloom.gateway import LlmGateway, MockProvider, ModelRole
from storyloom.levels import CefrLevel
from storyloom.store import SessionRepository
from storyloom.engine import StoryEngine
from tests.conftest import ScriptedProvider, initialize, ticking_clock


@pytest.fixture
def game(engine, assistant):
    """An in-progress session with one segment on the table."""
    initialize(engine, "s1", level="B1")
    segment = engine.generate_segment("s1")
    return engine, assistant, segment


def _select(segment, needle):
    start = segment.text.index(needle)
    return needle, (start, start + len(needle))


class TestExplain:
    def test_word_selection_returns_persisted_record(self, game):
        engine, assistant, segment = game
        word, offsets = _select(segment, "story")
        record = assistant.explain("s1", segment.segment_id, word, offsets)
        assert record.level == CefrLevel.B1
        assert record.explanation
        assert record.selected_string == "story"
        assert [q.query_id for q in engine.repo.get("s1").queries] == [record.query_id]

    def test_full_sentence_selection_accepted(self, game):
        _, assistant, segment = game
        sentence = segment.text.split(". ")[1] + "."
        selected, offsets = _select(segment, sentence)
        record = assistant.explain("s1", segment.segment_id, selected, offsets)
        assert record.selected_string == sentence

    def test_selection_spanning_whole_segment_accepted(self, game):
        _, assistant, segment = game
        record = assistant.explain("s1", segment.segment_id, segment.text, (0, len(segment.text)))
        assert record.selected_string == segment.text

    def test_offsets_not_matching_string_rejected(self, game):
        _, assistant, segment = game
        _, offsets = _select(segment, "story")
        with pytest.raises(ValidationError):
            assistant.explain("s1", segment.segment_id, "different", offsets)

    def test_out_of_bounds_offsets_rejected(self, game):
        _, assistant, segment = game
        with pytest.raises(ValidationError):
            assistant.explain("s1", segment.segment_id, "x", (len(segment.text), len(segment.text) + 1))
        with pytest.raises(ValidationError):
            assistant.explain("s1", segment.segment_id, "", (3, 3))

    def test_unknown_segment_not_found(self, game):
        _, assistant, _ = game
        with pytest.raises(NotFoundError):
            assistant.explain("s1", "seg-99", "x", (0, 1))

    def test_substring_invariant_on_stored_record(self, game):
        _, assistant, segment = game
        word, offsets = _select(segment, "cold")
        record = assistant.explain("s1", segment.segment_id, word, offsets)
        assert record.selected_string in record.context_window
        assert record.context_window in segment.text

    def test_provider_failure_persists_nothing(self, tmp_path, event_log):
        from storyloom.gateway.providers import TransientProviderError

        providers = {role: MockProvider(seed=7) for role in ModelRole}
        providers[ModelRole.LANGUAGE] = ScriptedProvider([TransientProviderError("down")] * 5)
        gateway = LlmGateway(providers=providers, sleeper=lambda _s: None)
        repo = SessionRepository(event_log)
        engine = StoryEngine(gateway, repo)
        assistant = LanguageAssistant(gateway, repo, clock=ticking_clock())
        initialize(engine, "s1")
        segment = engine.generate_segment("s1")
        with pytest.raises(ProviderUnavailableError):
            assistant.explain("s1", segment.segment_id, "story", _select(segment, "story")[1])
        assert engine.repo.get("s1").queries == []

    def test_explain_works_while_story_lane_is_held(self, game):
        engine, assistant, segment = game
        from storyloom.engine import locks

        with engine._lanes.acquire("s1", locks.PLAY):
            word, offsets = _select(segment, "story")
            record = assistant.explain("s1", segment.segment_id, word, offsets)
        assert record.explanation

    def test_persistence_before_response_survives_process_loss(self, game, event_log, gateway):
        _, assistant, segment = game
        word, offsets = _select(segment, "story")
        record = assistant.explain("s1", segment.segment_id, word, offsets)
        # simulate a crash right after return: all in-memory state discarded
        cold_repo = SessionRepository(event_log)
        survived = cold_repo.get("s1").queries
        assert [q.query_id for q in survived] == [record.query_id]
        assert survived[0].to_dict() == record.to_dict()


class TestReviewList:
    def test_newest_first_after_three_explains(self, game):
        _, assistant, segment = game
        ids = []
        for needle in ("story", "cold", "moment"):
            word, offsets = _select(segment, needle)
            ids.append(assistant.explain("s1", segment.segment_id, word, offsets).query_id)
        page = assistant.list_queries("s1")
        assert [r.query_id for r in page.records] == list(reversed(ids))
        assert page.total == 3

    def test_empty_session_empty_list(self, engine, assistant):
        initialize(engine, "s1")
        page = assistant.list_queries("s1")
        assert page.total == 0 and page.records == []

    def test_same_string_twice_gives_two_records(self, game):
        _, assistant, segment = game
        word, offsets = _select(segment, "story")
        assistant.explain("s1", segment.segment_id, word, offsets)
        assistant.explain("s1", segment.segment_id, word, offsets)
        assert assistant.list_queries("s1").total == 2

    def test_pagination_is_stable(self, game):
        _, assistant, segment = game
        for needle in ("story", "cold", "moment", "level", "sound"):
            word, offsets = _select(segment, needle)
            assistant.explain("s1", segment.segment_id, word, offsets)
        first = assistant.list_queries("s1", offset=0, limit=2)
        second = assistant.list_queries("s1", offset=2, limit=2)
        third = assistant.list_queries("s1", offset=4, limit=2)
        collected = [r.query_id for page in (first, second, third) for r in page.records]
        assert collected == [r.query_id for r in assistant.list_queries("s1", limit=10).records]

    def test_unknown_session_not_found(self, assistant):
        with pytest.raises(NotFoundError):
            assistant.list_queries("ghost")


class TestExport:
    def test_export_row_count_matches_queries(self, game):
        _, assistant, segment = game
        for needle in ("story", "cold", "moment"):
            word, offsets = _select(segment, needle)
            assistant.explain("s1", segment.segment_id, word, offsets)
        text = assistant.export_query_log("s1")
        lines = text.strip().split("\n")
        assert len(lines) == 4  # header + 3 rows
        assert lines[0].startswith("query_id\t")

    def test_round_trip_is_lossless(self, game, tmp_path):
        engine, assistant, segment = game
        for needle in ("story", "cold"):
            word, offsets = _select(segment, needle)
            assistant.explain("s1", segment.segment_id, word, offsets)
        path = tmp_path / "log.tsv"
        assistant.write_query_log(path, "s1")
        parsed = read_query_log(path)
        assert [r.to_dict() for r in parsed] == [r.to_dict() for r in engine.repo.get("s1").queries]

    def test_all_sessions_export_keyed_by_session(self, engine, assistant):
        for sid in ("a1", "a2"):
            initialize(engine, sid)
            segment = engine.generate_segment(sid)
            word, offsets = _select(segment, "story")
            assistant.explain(sid, segment.segment_id, word, offsets)
        rows = parse_query_log(assistant.export_query_log(None))
        assert {r.session_id for r in rows} == {"a1", "a2"}


def _record(selected: str, context: str, explanation: str) -> QueryRecord:
    from datetime import datetime, timezone

    return QueryRecord(
        query_id="q-1",
        session_id="s1",
        segment_ref="seg-1",
        selected_string=selected,
        context_window=context,
        level=CefrLevel.B1,
        explanation=explanation,
        created_at=datetime(2026, 1, 2, 3, 4, 5, tzinfo=timezone.utc),
    )


@settings(max_examples=200, deadline=None)
@given(
    selected=st.text(min_size=1, max_size=40),
    pad=st.text(max_size=40),
    explanation=st.text(min_size=1, max_size=80),
)
def test_tsv_round_trip_survives_arbitrary_text(selected, pad, explanation):
    record = _record(selected, pad + selected + pad, explanation)
    (parsed,) = parse_query_log(format_query_log([record]))
    assert parsed.to_dict() == record.to_dict()


class TestContextWindow:
    TEXT = (
        "First sentence here. Second one follows the first. The third sentence "
        "contains the target word inside it. Fourth sentence trails along. Fifth ends it."
    )

    def test_window_is_neighbouring_sentences(self):
        start = self.TEXT.index("target")
        window = context_window(self.TEXT, start, start + len("target"))
        assert "Second one follows" in window
        assert "Fourth sentence trails" in window
        assert "First sentence" not in window
        assert "Fifth ends it" not in window

    def test_window_is_contiguous_slice_containing_selection(self):
        start = self.TEXT.index("target")
        window = context_window(self.TEXT, start, start + 6)
        assert window in self.TEXT
        assert "target" in window

    def test_long_single_sentence_is_capped_but_contains_selection(self):
        text = "word " * 300  # one 1500-char "sentence"
        start = text.index("word", 700)
        window = context_window(text, start, start + 4)
        assert len(window) <= 500
        assert "word" in window
        assert window in text

    def test_selection_at_text_edges(self):
        window = context_window(self.TEXT, 0, 5)
        assert window.startswith("First")
        end = len(self.TEXT)
        window = context_window(self.TEXT, end - 3, end)
        assert window.endswith("it.")
