"""
JSON Writer for Result Storage

This module wraps command payloads in the versioned v1 envelope documented
in docs/schema/v1.json. Output is key-sorted so equal payloads give equal bytes.
"""

import json
import math
from typing import Any

SCHEMA_VERSION = "v1"


def _sanitize(value: Any) -> Any:
    """Replace non-finite floats with None; JSON has no NaN."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


def success_envelope(command: str, payload: dict[str, Any]) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "status": "ok",
        "command": command,
        "result": _sanitize(payload),
    }


def error_envelope(
    command: str | None, error_type: str, message: str, operation: str | None
) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "status": "error",
        "command": command,
        "error": {"type": error_type, "message": message, "operation": operation},
    }


class JSONWriter:
    """Serializes envelopes to UTF-8 JSON bytes."""

    def dumps(self, envelope: dict[str, Any], indent: int | None = 2) -> str:
        return json.dumps(envelope, indent=indent, sort_keys=True, allow_nan=False)

    def generate(self, command: str, payload: dict[str, Any]) -> bytes:
        return (self.dumps(success_envelope(command, payload)) + "\n").encode("utf-8")
