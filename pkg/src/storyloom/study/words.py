"""Target-word selection from the query log.

Single-word lookups count directly; multi-word lookups contribute their
content words. Ranking: query frequency first, then rarity (higher band in
the bundled frequency list, then longer words), then alphabetical. The
frequency-then-rarity rule is this toolkit's operationalization of "most
relevant"; override hooks exist because studies may want their own.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import TYPE_CHECKING, Callable

if TYPE_CHECKING:
    from ..assistant import QueryRecord

log = logging.getLogger(__name__)

_WORD_RE = re.compile(r"[A-Za-z][A-Za-z'-]*")

# Words absent from the bundled band list rank as rarest.
UNKNOWN_BAND = 4

_FUNCTION_WORDS = frozenset(
    """
    a an the and or but if then than because so nor yet both either neither
    i you he she it we they me him her us them my your his its our their
    mine yours hers ours theirs this that these those who whom whose which what
    be am is are was were been being have has had having do does did doing
    will would shall should can could may might must ought
    to of in on at by for with about against between into through during
    before after above below from up down out off over under again further
    here there when where why how all any each few more most other some such
    no not only own same too very just also as
    """.split()
)


def _load_bands() -> dict[str, int]:
    text = (resources.files("storyloom.study") / "data" / "word_bands.tsv").read_text("utf-8")
    bands = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, band = line.split("\t")
        bands[word] = int(band)
    return bands


_BANDS: dict[str, int] | None = None


def word_band(word: str) -> int:
    global _BANDS
    if _BANDS is None:
        _BANDS = _load_bands()
    return _BANDS.get(word.lower(), UNKNOWN_BAND)


def candidate_words(selected_string: str) -> list[str]:
    """Words a selection contributes: itself if single, content words if multi."""
    tokens = _WORD_RE.findall(selected_string)
    if len(tokens) <= 1:
        return tokens
    return [t for t in tokens if t.lower() not in _FUNCTION_WORDS]


@dataclass(frozen=True)
class SelectionResult:
    words: list[str]
    counts: dict[str, int]
    requested: int
    shortfall: bool


def select_test_words(
    records: list["QueryRecord"],
    n: int = 20,
    rank_key: Callable[[str, int], tuple] | None = None,
) -> SelectionResult:
    """Top-n candidate words from the query log, deterministically ranked.

    ``rank_key(word, count)`` can replace the default frequency/rarity order
    (smaller sorts first). Exact surface forms are kept: no lemmatization.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    counts: Counter[str] = Counter()
    for record in records:
        counts.update(candidate_words(record.selected_string))

    if rank_key is None:
        rank_key = lambda word, count: (-count, -word_band(word), -len(word), word)

    ranked = sorted(counts, key=lambda w: rank_key(w, counts[w]))
    shortfall = len(ranked) < n
    if shortfall:
        log.warning("query log yields %d candidate words, %d requested", len(ranked), n)
    top = ranked[:n]
    return SelectionResult(
        words=top,
        counts={w: counts[w] for w in top},
        requested=n,
        shortfall=shortfall,
    )
