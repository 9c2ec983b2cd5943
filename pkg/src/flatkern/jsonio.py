"""Canonical JSON output: byte-identical across identical invocations."""

from __future__ import annotations

import json

SCHEMA = "flatkern/1"


def canonical_dumps(obj: dict) -> str:
    """Sorted keys, compact separators, trailing newline."""
    payload = {"schema": SCHEMA}
    payload.update(obj)
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
