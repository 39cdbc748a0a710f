"""CEFR proficiency levels shared across the whole system."""

from __future__ import annotations

from enum import Enum


class CefrLevel(str, Enum):
    """The six CEFR levels, ordered from beginner to mastery."""

    A1 = "A1"
    A2 = "A2"
    B1 = "B1"
    B2 = "B2"
    C1 = "C1"
    C2 = "C2"

    @classmethod
    def parse(cls, value: str) -> "CefrLevel":
        """Parse a level string, accepting any casing.

        Raises ValueError naming the valid levels on anything else.
        """
        try:
            return cls(value.strip().upper())
        except (ValueError, AttributeError):
            valid = ", ".join(level.value for level in cls)
            raise ValueError(f"unknown CEFR level {value!r}; expected one of: {valid}") from None


ALL_LEVELS: tuple[CefrLevel, ...] = tuple(CefrLevel)
