"""
Canonical JSON helpers shared by the graph, coloring and certificate codecs.

Canonical text = sorted keys, compact separators, no trailing newline, so the
same object always hashes to the same digest.
"""

import hashlib
import json
from typing import Any, Dict

from .errors import GraphFormatError


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def parse_json_object(text: str, what: str) -> Dict[str, Any]:
    """Parse ``text`` and insist on a JSON object at the root."""
    try:
        obj = json.loads(text)
    except (TypeError, json.JSONDecodeError) as e:
        raise GraphFormatError(what, f"invalid JSON ({e})")
    if not isinstance(obj, dict):
        raise GraphFormatError(what, "expected a JSON object at the root")
    return obj


def require_count(obj: Dict[str, Any], field: str) -> int:
    """Fetch a non-negative integer field (booleans are rejected)."""
    if field not in obj:
        raise GraphFormatError(field, "missing")
    value = obj[field]
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphFormatError(field, f"expected a non-negative integer, got {value!r}")
    if value < 0:
        raise GraphFormatError(field, f"expected a non-negative integer, got {value}")
    return value


def require_list(obj: Dict[str, Any], field: str) -> list:
    if field not in obj:
        raise GraphFormatError(field, "missing")
    value = obj[field]
    if not isinstance(value, list):
        raise GraphFormatError(field, f"expected a list, got {type(value).__name__}")
    return value
