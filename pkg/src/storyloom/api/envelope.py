"""The response envelope and the exception -> error-code mapping.

Every JSON body carries exactly one of ``data`` or ``error``. Error codes
form a closed set; clients switch on the code, never on the message.
"""

from __future__ import annotations

from .. import errors

# code -> (http status, retriable)
ERROR_CODES: dict[str, tuple[int, bool]] = {
    "validation": (400, False),
    "not_found": (404, False),
    "sequencing": (409, False),
    "busy": (409, True),
    "provider_unavailable": (502, True),
    "provider_config": (502, False),
    "storage": (500, False),
    "internal": (500, False),
}

ENVELOPE_SCHEMA = {
    "type": "object",
    "oneOf": [
        {"required": ["data"], "properties": {"data": {}}, "additionalProperties": False},
        {
            "required": ["error"],
            "properties": {
                "error": {
                    "type": "object",
                    "required": ["code", "message", "retriable"],
                    "properties": {
                        "code": {"type": "string", "enum": sorted(ERROR_CODES)},
                        "message": {"type": "string"},
                        "retriable": {"type": "boolean"},
                    },
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
        },
    ],
}


def success(data) -> dict:
    return {"data": data}


def error_body(code: str, message: str) -> dict:
    status, retriable = ERROR_CODES[code]
    return {"error": {"code": code, "message": message, "retriable": retriable}}


def map_exception(exc: Exception) -> tuple[int, dict]:
    """(http status, envelope body) for any exception the service raises."""
    if isinstance(exc, errors.NotFoundError):
        code = "not_found"
    elif isinstance(exc, errors.ValidationError):
        code = "validation"
    elif isinstance(exc, errors.SessionBusyError):
        code = "busy"
    elif isinstance(exc, errors.SequencingError):
        code = "sequencing"
    elif isinstance(exc, (errors.ProviderUnavailableError, errors.StructuredOutputError)):
        code = "provider_unavailable"
    elif isinstance(exc, errors.ProviderConfigError):
        code = "provider_config"
    elif isinstance(exc, errors.StorageError):
        code = "storage"
    else:
        code = "internal"
    status, _ = ERROR_CODES[code]
    return status, error_body(code, str(exc))
