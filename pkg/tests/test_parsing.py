from __future__ import annotations

import pytest

from storyloom.engine.parsing import (
    OutputFormatError,
    parse_outline,
    parse_samples,
    parse_segment,
)
from storyloom.engine.types import GameConfig
from storyloom.levels import CefrLevel

SAMPLES_OK = """```
A1: Tom sees a map.
A2: Tom finds an old map.
B1: Tom discovers an old map in the attic.
B2: While cleaning the attic, Tom comes across an old map.
C1: Rummaging through the attic, Tom unearths a weathered map.
C2: Amid the attic's clutter, Tom happens upon a map of uncertain provenance.
```"""


def test_parse_samples_happy_path():
    samples = parse_samples(SAMPLES_OK)
    assert [s.level for s in samples] == list(CefrLevel)
    assert samples[2].text.startswith("Tom discovers")


@pytest.mark.parametrize(
    "mutation",
    [
        lambda text: text.replace("B2:", "B1:"),          # duplicate level
        lambda text: text.replace("C2: Amid the attic's clutter, Tom happens upon a map of uncertain provenance.\n", ""),  # missing level
        lambda text: text.replace("```", ""),             # no fence
        lambda text: text.replace("A1:", "??"),           # unlabelled line
    ],
)
def test_parse_samples_rejects_bad_blocks(mutation):
    with pytest.raises(OutputFormatError):
        parse_samples(mutation(SAMPLES_OK))


OUTLINE_OK = """```
MILESTONE 1: The village burns.
MILESTONE 2: The pass is crossed.
DECISION 1.1: Save the archive or the stable.
DECISION 1.2: Leave at night or at dawn.
DECISION 2.1: Bribe the guard or climb.
DECISION 2.2: Trust the stranger or not.
ENDING 1: The crown is restored.
ENDING 2: The village is rebuilt elsewhere.
```"""


def test_parse_outline_happy_path():
    config = GameConfig(milestone_count=2, decisions_per_milestone=2, ending_count=2)
    outline = parse_outline(OUTLINE_OK, config)
    assert outline.milestones == ["The village burns.", "The pass is crossed."]
    assert outline.decision_slots[1][0] == "Bribe the guard or climb."
    assert len(outline.endings) == 2
    outline.validate_against(config)


def test_parse_outline_wrong_counts_rejected():
    config = GameConfig(milestone_count=3, decisions_per_milestone=2, ending_count=2)
    with pytest.raises(OutputFormatError):
        parse_outline(OUTLINE_OK, config)


def test_parse_outline_gap_in_numbering_rejected():
    config = GameConfig(milestone_count=2, decisions_per_milestone=2, ending_count=2)
    with pytest.raises(OutputFormatError):
        parse_outline(OUTLINE_OK.replace("MILESTONE 2", "MILESTONE 3"), config)


SEGMENT_OK = """The road narrows and the light fails. Something moves ahead.

```
OPTION 1: Light the lantern
OPTION 2: Stand very still
OPTION 3: Back away slowly
```"""


def test_parse_segment_happy_path():
    narrative, options = parse_segment(SEGMENT_OK, 3)
    assert narrative.startswith("The road narrows")
    assert options == ["Light the lantern", "Stand very still", "Back away slowly"]


def test_parse_segment_wrong_option_count():
    with pytest.raises(OutputFormatError):
        parse_segment(SEGMENT_OK, 4)


def test_parse_segment_without_narrative_rejected():
    fence_only = SEGMENT_OK.split("\n\n", 1)[1]
    with pytest.raises(OutputFormatError):
        parse_segment(fence_only, 3)


def test_parse_segment_without_fence_rejected():
    with pytest.raises(OutputFormatError):
        parse_segment("Just narrative, no options.", 3)
