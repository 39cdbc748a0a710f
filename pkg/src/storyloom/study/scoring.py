"""Vocabulary test scoring: two raters, consensus on disagreement.

Per item: 1 point for a correct meaning, 0.5 for a partially correct or
approximate meaning, 0 for an incorrect meaning or a "no". Rater
disagreements are never auto-resolved; they go to a consensus worksheet.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError

TEST_SIZE = 20

JUDGMENTS = ("correct", "partial", "incorrect")

_SCORE_BY_JUDGMENT = {"correct": 1.0, "partial": 0.5, "incorrect": 0.0}


def score_item(claimed_known: bool, rater_judgment: str | None) -> float:
    """A "no" scores 0 regardless; otherwise the rater's judgment decides."""
    if not claimed_known:
        return 0.0
    if rater_judgment not in _SCORE_BY_JUDGMENT:
        raise ValidationError(
            f"rater judgment must be one of {JUDGMENTS}, got {rater_judgment!r}"
        )
    return _SCORE_BY_JUDGMENT[rater_judgment]


@dataclass
class VocabItem:
    word: str
    claimed_known: bool
    rater_scores: tuple[float, float]
    resolved: float | None = None

    @property
    def agreed(self) -> bool:
        return self.rater_scores[0] == self.rater_scores[1]


@dataclass
class VocabTest:
    participant_id: str
    items: list[VocabItem] = field(default_factory=list)

    def __post_init__(self):
        if len(self.items) != TEST_SIZE:
            raise ValidationError(
                f"participant {self.participant_id}: a vocabulary test has exactly "
                f"{TEST_SIZE} items, got {len(self.items)}"
            )

    def unresolved(self) -> list[VocabItem]:
        return [item for item in self.items if item.resolved is None]

    def total(self) -> float:
        pending = self.unresolved()
        if pending:
            raise ValidationError(
                f"participant {self.participant_id}: {len(pending)} items lack a consensus score"
            )
        return sum(item.resolved for item in self.items)


@dataclass(frozen=True)
class RaterRow:
    participant_id: str
    word: str
    claimed_known: bool
    judgment: str | None


def _parse_claimed(value: str) -> bool:
    value = value.strip().lower()
    if value in ("yes", "y"):
        return True
    if value in ("no", "n"):
        return False
    raise ValidationError(f"claimed_known must be yes or no, got {value!r}")


def parse_rater_file(text: str) -> list[RaterRow]:
    """TSV: participant, word, claimed_known (yes|no), judgment (correct|partial|incorrect|-)."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValidationError("empty rater file")
    header = lines[0].split("\t")
    if header != ["participant", "word", "claimed_known", "judgment"]:
        raise ValidationError("rater file header must be: participant, word, claimed_known, judgment")
    rows = []
    for line in lines[1:]:
        fields = line.split("\t")
        if len(fields) != 4:
            raise ValidationError(f"rater row has {len(fields)} fields, expected 4")
        participant, word, claimed_raw, judgment_raw = (f.strip() for f in fields)
        claimed = _parse_claimed(claimed_raw)
        judgment = judgment_raw.lower() if judgment_raw not in ("", "-") else None
        if claimed and judgment not in JUDGMENTS:
            raise ValidationError(
                f"{participant}/{word}: claimed 'yes' needs a judgment in {JUDGMENTS}"
            )
        rows.append(RaterRow(participant, word, claimed, judgment))
    return rows


def merge_raters(rows_a: list[RaterRow], rows_b: list[RaterRow]) -> list[VocabTest]:
    """Combine two raters' judgments into per-participant tests.

    Both files must cover the same (participant, word) items and agree on
    the participant's own yes/no claims.
    """
    by_key_a = {(r.participant_id, r.word): r for r in rows_a}
    by_key_b = {(r.participant_id, r.word): r for r in rows_b}
    if len(by_key_a) != len(rows_a) or len(by_key_b) != len(rows_b):
        raise ValidationError("duplicate (participant, word) rows in a rater file")
    if set(by_key_a) != set(by_key_b):
        raise ValidationError("rater files cover different (participant, word) items")

    tests: dict[str, list[VocabItem]] = {}
    for key in sorted(by_key_a):
        row_a, row_b = by_key_a[key], by_key_b[key]
        if row_a.claimed_known != row_b.claimed_known:
            raise ValidationError(
                f"{key[0]}/{key[1]}: rater files disagree on the participant's yes/no claim"
            )
        scores = (
            score_item(row_a.claimed_known, row_a.judgment),
            score_item(row_b.claimed_known, row_b.judgment),
        )
        item = VocabItem(
            word=key[1],
            claimed_known=row_a.claimed_known,
            rater_scores=scores,
            resolved=scores[0] if scores[0] == scores[1] else None,
        )
        tests.setdefault(key[0], []).append(item)

    return [VocabTest(participant, items) for participant, items in sorted(tests.items())]


def apply_consensus(tests: list[VocabTest], consensus: dict[tuple[str, str], float]) -> None:
    """Fill resolved scores for disagreeing items from a consensus map."""
    for test in tests:
        for item in test.items:
            if item.resolved is None:
                key = (test.participant_id, item.word)
                if key in consensus:
                    value = consensus[key]
                    if value not in (0.0, 0.5, 1.0):
                        raise ValidationError(f"consensus score for {key} must be 0, 0.5 or 1")
                    item.resolved = value


def parse_consensus_file(text: str) -> dict[tuple[str, str], float]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        return {}
    header = lines[0].split("\t")
    if header[:3] != ["participant", "word", "consensus"]:
        raise ValidationError("consensus file header must start: participant, word, consensus")
    result = {}
    for line in lines[1:]:
        fields = line.split("\t")
        if len(fields) < 3 or not fields[2].strip():
            continue  # unfilled worksheet row
        result[(fields[0].strip(), fields[1].strip())] = float(fields[2])
    return result


def format_worksheet(tests: list[VocabTest]) -> str:
    """Disagreement worksheet: one row per unresolved item, consensus blank."""
    lines = ["participant\tword\tconsensus\trater1\trater2"]
    for test in tests:
        for item in test.unresolved():
            lines.append(
                f"{test.participant_id}\t{item.word}\t\t{item.rater_scores[0]:g}\t{item.rater_scores[1]:g}"
            )
    return "\n".join(lines) + "\n"
