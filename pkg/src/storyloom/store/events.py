"""Event kinds and their payload schemas.

The store's contract is this schema set, not the storage engine behind it.
Every event carries ``schema_version`` so the payload shapes can evolve.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

import jsonschema

from ..errors import ValidationError

SCHEMA_VERSION = 1

_LEVEL = {"type": "string", "enum": ["A1", "A2", "B1", "B2", "C1", "C2"]}

_CONFIG = {
    "type": "object",
    "required": ["milestone_count", "decisions_per_milestone", "ending_count", "options_per_decision"],
    "properties": {
        "milestone_count": {"type": "integer", "minimum": 1},
        "decisions_per_milestone": {"type": "integer", "minimum": 1},
        "ending_count": {"type": "integer", "minimum": 1},
        "options_per_decision": {"type": "integer", "minimum": 2},
    },
    "additionalProperties": False,
}

_CURSOR = {
    "type": "object",
    "required": ["milestone_index", "decision_index", "awaiting"],
    "properties": {
        "milestone_index": {"type": "integer", "minimum": 0},
        "decision_index": {"type": "integer", "minimum": 0},
        "awaiting": {"type": "string", "enum": ["segment", "choice", "ending", "done"]},
    },
    "additionalProperties": False,
}


def _segment(min_options: int, max_options: int | None = None) -> dict:
    options: dict = {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": min_options}
    if max_options is not None:
        options["maxItems"] = max_options
    return {
        "type": "object",
        "required": ["segment_id", "cursor_at_generation", "text", "options"],
        "properties": {
            "segment_id": {"type": "string", "minLength": 1},
            "cursor_at_generation": _CURSOR,
            "text": {"type": "string", "minLength": 1},
            "options": options,
            "chosen_option": {"type": ["integer", "null"]},
        },
        "additionalProperties": False,
    }


_QUERY_RECORD = {
    "type": "object",
    "required": [
        "query_id", "session_id", "segment_ref", "selected_string",
        "context_window", "level", "explanation", "created_at",
    ],
    "properties": {
        "query_id": {"type": "string", "minLength": 1},
        "session_id": {"type": "string", "minLength": 1},
        "segment_ref": {"type": "string", "minLength": 1},
        "selected_string": {"type": "string", "minLength": 1},
        "context_window": {"type": "string", "minLength": 1},
        "level": _LEVEL,
        "explanation": {"type": "string", "minLength": 1},
        "created_at": {"type": "string", "minLength": 1},
    },
    "additionalProperties": False,
}

PAYLOAD_SCHEMAS: dict[str, dict] = {
    "session_created": {
        "type": "object",
        "required": ["session_id", "genre", "premise", "config"],
        "properties": {
            "session_id": {"type": "string", "minLength": 1},
            "genre": {"type": "string", "minLength": 1},
            "premise": {"type": ["string", "null"]},
            "config": _CONFIG,
        },
        "additionalProperties": False,
    },
    "samples_generated": {
        "type": "object",
        "required": ["samples"],
        "properties": {
            "samples": {
                "type": "array",
                "minItems": 6,
                "maxItems": 6,
                "items": {
                    "type": "object",
                    "required": ["level", "text"],
                    "properties": {"level": _LEVEL, "text": {"type": "string", "minLength": 1}},
                    "additionalProperties": False,
                },
            },
        },
        "additionalProperties": False,
    },
    "level_selected": {
        "type": "object",
        "required": ["level"],
        "properties": {"level": _LEVEL},
        "additionalProperties": False,
    },
    "outline_generated": {
        "type": "object",
        "required": ["outline"],
        "properties": {
            "outline": {
                "type": "object",
                "required": ["milestones", "decision_slots", "endings"],
                "properties": {
                    "milestones": {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1},
                    "decision_slots": {
                        "type": "array",
                        "items": {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1},
                        "minItems": 1,
                    },
                    "endings": {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1},
                },
                "additionalProperties": False,
            },
        },
        "additionalProperties": False,
    },
    "segment_generated": {
        "type": "object",
        "required": ["segment"],
        "properties": {"segment": _segment(min_options=2)},
        "additionalProperties": False,
    },
    "choice_applied": {
        "type": "object",
        "required": ["segment_id", "option_index"],
        "properties": {
            "segment_id": {"type": "string", "minLength": 1},
            "option_index": {"type": "integer", "minimum": 0},
        },
        "additionalProperties": False,
    },
    "summary_appended": {
        "type": "object",
        "required": ["segment_id", "summary"],
        "properties": {
            "segment_id": {"type": "string", "minLength": 1},
            "summary": {"type": "string", "minLength": 1},
        },
        "additionalProperties": False,
    },
    "ending_generated": {
        "type": "object",
        "required": ["segment"],
        "properties": {"segment": _segment(min_options=0, max_options=0)},
        "additionalProperties": False,
    },
    "query_explained": {
        "type": "object",
        "required": ["record"],
        "properties": {"record": _QUERY_RECORD},
        "additionalProperties": False,
    },
}

ALL_KINDS = tuple(PAYLOAD_SCHEMAS)

_VALIDATORS = {
    kind: jsonschema.Draft202012Validator(schema) for kind, schema in PAYLOAD_SCHEMAS.items()
}


def validate_payload(kind: str, payload: dict) -> None:
    if kind not in PAYLOAD_SCHEMAS:
        raise ValidationError(f"unknown event kind {kind!r}")
    error = jsonschema.exceptions.best_match(_VALIDATORS[kind].iter_errors(payload))
    if error is not None:
        raise ValidationError(f"invalid {kind} payload: {error.message}")


@dataclass(frozen=True)
class EventRecord:
    session_id: str
    sequence: int
    kind: str
    payload: dict
    timestamp: datetime
    schema_version: int = SCHEMA_VERSION
