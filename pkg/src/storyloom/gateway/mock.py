"""Deterministic offline provider.

Output is a pure function of (template_id, sorted bindings, seed), hashed
with sha256 so it is stable across processes and machines. For templates
whose replies must parse into a structure (samples, outline, segments) the
mock emits a syntactically valid reply with placeholder prose, so the whole
pipeline runs with zero network.
"""

from __future__ import annotations

import hashlib
import json
from typing import TYPE_CHECKING

from ..levels import ALL_LEVELS

if TYPE_CHECKING:
    from .gateway import CompletionRequest

_SUBJECTS = ["the traveller", "a stranger", "the old guide", "the young scholar", "the watchman"]
_PLACES = ["near the gate", "by the river", "under the tower", "inside the hall", "on the ridge"]
_TWISTS = [
    "a light moves where no light should be",
    "someone has been here first",
    "the way back is no longer there",
    "a voice calls a name nobody said aloud",
    "the map does not match the ground",
]
_ACTIONS = [
    "Follow the narrow path",
    "Ask the stranger for help",
    "Search the ground for tracks",
    "Wait and watch quietly",
    "Climb up for a better view",
    "Turn back toward the road",
    "Call out into the dark",
    "Hide behind the old wall",
]

# Roughly level-scaled sentence counts for the six sample texts.
_SAMPLE_SENTENCES = {"A1": 3, "A2": 3, "B1": 4, "B2": 4, "C1": 5, "C2": 5}


def _canonical(bindings: dict[str, str]) -> str:
    return json.dumps({k: str(v) for k, v in sorted(bindings.items())}, ensure_ascii=False)


class MockProvider:
    provider_id = "mock"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def _digest(self, template_id: str, bindings: dict[str, str]) -> bytes:
        material = f"{template_id}\x1f{_canonical(bindings)}\x1f{self.seed}"
        return hashlib.sha256(material.encode("utf-8")).digest()

    def generate(self, request: "CompletionRequest") -> str:
        template_id = request.template_id or ""
        bindings = dict(request.bindings or {})
        digest = self._digest(template_id, bindings)
        tag = digest.hex()[:8]

        if template_id == "proficiency_samples":
            return self._samples(bindings, digest, tag)
        if template_id == "story_outline":
            return self._outline(bindings, digest, tag)
        if template_id == "plot_segment":
            return self._segment(bindings, digest, tag)
        if template_id == "story_ending":
            return self._ending(bindings, digest, tag)
        if template_id == "segment_summary":
            return self._summary(bindings, tag)
        if template_id == "explain_selection":
            return self._explanation(bindings, tag)
        return f"mock reply for {template_id or 'ad-hoc prompt'} [{tag}]"

    # -- per-template emitters -------------------------------------------

    def _pick(self, digest: bytes, offset: int, options: list[str]) -> str:
        return options[digest[offset % len(digest)] % len(options)]

    def _samples(self, bindings: dict[str, str], digest: bytes, tag: str) -> str:
        genre = bindings.get("genre", "story")
        premise = bindings.get("premise", "").strip()
        premise_bit = f" They remember: {premise}." if premise else ""
        lines = []
        for n, level in enumerate(ALL_LEVELS):
            subject = self._pick(digest, n, _SUBJECTS)
            place = self._pick(digest, n + 7, _PLACES)
            sentences = [f"({level.value}) In this {genre} opening, {subject} stands {place}."]
            sentences += [
                f"Sentence {k + 2} keeps the same scene at level {level.value}."
                for k in range(_SAMPLE_SENTENCES[level.value] - 1)
            ]
            lines.append(f"{level.value}: " + " ".join(sentences) + premise_bit + f" [{tag}]")
        return "```\n" + "\n".join(lines) + "\n```"

    def _outline(self, bindings: dict[str, str], digest: bytes, tag: str) -> str:
        genre = bindings.get("genre", "story")
        milestones = int(bindings.get("milestone_count", 3))
        decisions = int(bindings.get("decisions_per_milestone", 2))
        endings = int(bindings.get("ending_count", 2))
        lines = []
        for i in range(1, milestones + 1):
            twist = self._pick(digest, i, _TWISTS)
            lines.append(f"MILESTONE {i}: In the {genre} tale, checkpoint {i} arrives and {twist} [{tag}]")
        for i in range(1, milestones + 1):
            for j in range(1, decisions + 1):
                place = self._pick(digest, i * 3 + j, _PLACES)
                lines.append(f"DECISION {i}.{j}: A choice {place} decides how milestone {i} plays out")
        for k in range(1, endings + 1):
            lines.append(f"ENDING {k}: The {genre} story can close in way {k} [{tag}]")
        return "```\n" + "\n".join(lines) + "\n```"

    def _segment(self, bindings: dict[str, str], digest: bytes, tag: str) -> str:
        level = bindings.get("level", "B1")
        milestone = bindings.get("milestone", "the next event")
        option_count = int(bindings.get("option_count", 3))
        subject = self._pick(digest, 1, _SUBJECTS)
        place = self._pick(digest, 5, _PLACES)
        twist = self._pick(digest, 9, _TWISTS)
        narrative = (
            f"At level {level}, the story continues toward: {milestone} "
            f"Here, {subject} pauses {place}, and {twist}. "
            f"The air is cold and every small sound feels important. "
            f"Something must be decided before the moment passes. [{tag}]"
        )
        options = []
        for k in range(option_count):
            action = _ACTIONS[(digest[k % len(digest)] + k) % len(_ACTIONS)]
            options.append(f"OPTION {k + 1}: {action} ({tag}-{k + 1})")
        return narrative + "\n\n```\n" + "\n".join(options) + "\n```"

    def _ending(self, bindings: dict[str, str], digest: bytes, tag: str) -> str:
        level = bindings.get("level", "B1")
        subject = self._pick(digest, 2, _SUBJECTS)
        return (
            f"At level {level}, the journey ends. Looking back over every choice, "
            f"{subject} understands what the road was for. The story closes quietly, "
            f"and what was lost and found stays clear in memory. THE END [{tag}]"
        )

    def _summary(self, bindings: dict[str, str], tag: str) -> str:
        chosen = bindings.get("chosen_option", "an action")
        segment = bindings.get("segment", "")
        head = segment.split(".", 1)[0].strip()
        if len(head) > 60:
            head = head[:60].rstrip()
        return f"{head}. Player chose '{chosen}'. [{tag}]"

    def _explanation(self, bindings: dict[str, str], tag: str) -> str:
        level = bindings.get("level", "B1")
        selected = bindings.get("selected", "")
        return (
            f"At {level} level: '{selected}' here describes something in the scene. "
            f"It tells you how the moment feels or what is happening. [{tag}]"
        )
