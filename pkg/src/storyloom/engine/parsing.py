"""Parsers for the structured provider replies.

Samples, outlines, and segment option lists come back as fenced,
line-delimited blocks with labelled fields. Parse failures raise
:class:`OutputFormatError`, which the engine turns into bounded re-prompts.
"""

from __future__ import annotations

import re

from ..levels import ALL_LEVELS, CefrLevel
from .types import GameConfig, ProficiencySample, StoryOutline

_FENCE_RE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)


class OutputFormatError(ValueError):
    """Reply does not match the requested structure; the caller may re-prompt."""


def extract_fenced_block(text: str) -> str:
    match = _FENCE_RE.search(text)
    if not match:
        raise OutputFormatError("no fenced block found in reply")
    return match.group(1).strip()


_SAMPLE_LINE = re.compile(r"^(A1|A2|B1|B2|C1|C2)\s*[:.]\s*(.+)$", re.IGNORECASE)


def parse_samples(text: str) -> list[ProficiencySample]:
    """Six lines, one per CEFR level, no duplicates, no omissions."""
    block = extract_fenced_block(text)
    found: dict[CefrLevel, str] = {}
    for raw in block.splitlines():
        line = raw.strip()
        if not line:
            continue
        match = _SAMPLE_LINE.match(line)
        if not match:
            raise OutputFormatError(f"unparsable sample line: {line[:60]!r}")
        level = CefrLevel(match.group(1).upper())
        if level in found:
            raise OutputFormatError(f"duplicate sample for level {level.value}")
        if not match.group(2).strip():
            raise OutputFormatError(f"empty sample text for level {level.value}")
        found[level] = match.group(2).strip()
    missing = [lvl.value for lvl in ALL_LEVELS if lvl not in found]
    if missing:
        raise OutputFormatError(f"missing sample levels: {', '.join(missing)}")
    return [ProficiencySample(level, found[level]) for level in ALL_LEVELS]


_MILESTONE_LINE = re.compile(r"^MILESTONE\s+(\d+)\s*[:.]\s*(.+)$", re.IGNORECASE)
_DECISION_LINE = re.compile(r"^DECISION\s+(\d+)\.(\d+)\s*[:.]\s*(.+)$", re.IGNORECASE)
_ENDING_LINE = re.compile(r"^ENDING\s+(\d+)\s*[:.]\s*(.+)$", re.IGNORECASE)


def parse_outline(text: str, config: GameConfig) -> StoryOutline:
    """Labelled MILESTONE/DECISION/ENDING lines matching the config's counts."""
    block = extract_fenced_block(text)
    milestones: dict[int, str] = {}
    decisions: dict[tuple[int, int], str] = {}
    endings: dict[int, str] = {}
    for raw in block.splitlines():
        line = raw.strip()
        if not line:
            continue
        if m := _MILESTONE_LINE.match(line):
            milestones[int(m.group(1))] = m.group(2).strip()
        elif m := _DECISION_LINE.match(line):
            decisions[(int(m.group(1)), int(m.group(2)))] = m.group(3).strip()
        elif m := _ENDING_LINE.match(line):
            endings[int(m.group(1))] = m.group(2).strip()
        else:
            raise OutputFormatError(f"unparsable outline line: {line[:60]!r}")

    expected_m = list(range(1, config.milestone_count + 1))
    if sorted(milestones) != expected_m:
        raise OutputFormatError(
            f"expected milestones {expected_m}, got {sorted(milestones)}"
        )
    expected_d = [
        (i, j)
        for i in expected_m
        for j in range(1, config.decisions_per_milestone + 1)
    ]
    if sorted(decisions) != expected_d:
        raise OutputFormatError("decision slots do not cover the configured grid")
    expected_e = list(range(1, config.ending_count + 1))
    if sorted(endings) != expected_e:
        raise OutputFormatError(f"expected endings {expected_e}, got {sorted(endings)}")

    return StoryOutline(
        milestones=[milestones[i] for i in expected_m],
        decision_slots=[
            [decisions[(i, j)] for j in range(1, config.decisions_per_milestone + 1)]
            for i in expected_m
        ],
        endings=[endings[k] for k in expected_e],
    )


_OPTION_LINE = re.compile(r"^OPTION\s+(\d+)\s*[:.]\s*(.+)$", re.IGNORECASE)


def parse_segment(text: str, expected_options: int) -> tuple[str, list[str]]:
    """Narrative text outside the fence; exactly ``expected_options`` OPTION lines inside."""
    match = _FENCE_RE.search(text)
    if not match:
        raise OutputFormatError("segment reply has no fenced option block")
    narrative = (text[: match.start()] + text[match.end():]).strip()
    if not narrative:
        raise OutputFormatError("segment reply has no narrative text")
    options: dict[int, str] = {}
    for raw in match.group(1).strip().splitlines():
        line = raw.strip()
        if not line:
            continue
        m = _OPTION_LINE.match(line)
        if not m:
            raise OutputFormatError(f"unparsable option line: {line[:60]!r}")
        options[int(m.group(1))] = m.group(2).strip()
    expected = list(range(1, expected_options + 1))
    if sorted(options) != expected:
        raise OutputFormatError(
            f"expected options numbered {expected}, got {sorted(options)}"
        )
    return narrative, [options[k] for k in expected]
