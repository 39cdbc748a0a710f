"""Acceptance-model survey analysis: 12 seven-point Likert items.

Items 1-6 measure perceived usefulness (PU), items 7-12 perceived ease of
use (PEOU). Construct rows summarize per-participant averages across the
construct's items; construct reliability is Cronbach's alpha over the raw
item columns.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from .stats import UndefinedStatisticError, cronbach_alpha, descriptive_stats

ITEM_COUNT = 12
SCALE = (1, 7)

CONSTRUCTS = {
    "PU": list(range(0, 6)),
    "PEOU": list(range(6, 12)),
}


@dataclass(frozen=True)
class LikertResponse:
    participant_id: str
    ratings: tuple[int, ...]  # 12 items, each 1..7

    def __post_init__(self):
        if len(self.ratings) != ITEM_COUNT:
            raise ValidationError(
                f"participant {self.participant_id}: expected {ITEM_COUNT} ratings, got {len(self.ratings)}"
            )
        for position, rating in enumerate(self.ratings, start=1):
            if not isinstance(rating, int) or not SCALE[0] <= rating <= SCALE[1]:
                raise ValidationError(
                    f"participant {self.participant_id}: item {position} rating {rating!r} outside 1..7"
                )

    def construct_average(self, construct: str) -> float:
        items = CONSTRUCTS[construct]
        return sum(self.ratings[i] for i in items) / len(items)


def construct_summary(responses: list[LikertResponse]) -> dict:
    """Per-item and per-construct (mean, SD), plus per-construct alpha.

    Construct mean/SD are computed over per-participant item averages;
    alpha is None when undefined (e.g. zero variance).
    """
    if not responses:
        raise ValidationError("no survey responses")
    seen = set()
    for response in responses:
        if response.participant_id in seen:
            raise ValidationError(f"duplicate participant {response.participant_id}")
        seen.add(response.participant_id)

    items = []
    for index in range(ITEM_COUNT):
        construct = "PU" if index in CONSTRUCTS["PU"] else "PEOU"
        mean, sd = descriptive_stats([r.ratings[index] for r in responses])
        items.append({"item": index + 1, "construct": construct, "mean": mean, "sd": sd})

    constructs = {}
    for name, columns in CONSTRUCTS.items():
        averages = [r.construct_average(name) for r in responses]
        mean, sd = descriptive_stats(averages)
        matrix = [[r.ratings[i] for i in columns] for r in responses]
        try:
            alpha = cronbach_alpha(matrix)
        except UndefinedStatisticError:
            alpha = None
        constructs[name] = {"mean": mean, "sd": sd, "alpha": alpha}

    return {"items": items, "constructs": constructs}


# -- TSV I/O -------------------------------------------------------------------

SURVEY_COLUMNS = ["participant"] + [f"item{i}" for i in range(1, ITEM_COUNT + 1)]


def parse_survey_rows(text: str) -> list[LikertResponse]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValidationError("empty survey file")
    header = lines[0].split("\t")
    if header != SURVEY_COLUMNS:
        raise ValidationError(f"survey header must be: {chr(9).join(SURVEY_COLUMNS)}")
    responses = []
    for line in lines[1:]:
        fields = line.split("\t")
        if len(fields) != len(SURVEY_COLUMNS):
            raise ValidationError(f"survey row has {len(fields)} fields, expected {len(SURVEY_COLUMNS)}")
        try:
            ratings = tuple(int(v) for v in fields[1:])
        except ValueError:
            raise ValidationError(f"non-integer rating for participant {fields[0]}") from None
        responses.append(LikertResponse(fields[0], ratings))
    return responses


def format_summary(summary: dict) -> str:
    lines = ["row\tconstruct\tmean\tsd\talpha"]
    for item in summary["items"]:
        lines.append(f"item{item['item']}\t{item['construct']}\t{item['mean']:.2f}\t{item['sd']:.2f}\t")
    for name, stats in summary["constructs"].items():
        alpha = "" if stats["alpha"] is None else f"{stats['alpha']:.2f}"
        lines.append(f"construct\t{name}\t{stats['mean']:.2f}\t{stats['sd']:.2f}\t{alpha}")
    return "\n".join(lines) + "\n"
