"""
Certificates: self-contained, re-verifiable witnesses of a claimed bound.

Wire form:
    {"kind": ..., "claims": [...], "payload": {...}, "meta": {...}}

The digest is the SHA-256 of the canonical text (sorted keys, compact
separators), so two runs producing the same certificate hash identically.
``meta.created`` is only present when stamping is requested.
"""

import datetime
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from . import __version__
from .codec import canonical_json, parse_json_object, sha256_hex
from .errors import GraphFormatError

log = logging.getLogger(__name__)

GOOD_COLORING = "good-coloring"
EXTREMAL_GRAPH = "extremal-graph"
COUNTING_UPPER_BOUND = "counting-upper-bound"
LLL_LOWER_BOUND = "lll-lower-bound"
EMBEDDING = "embedding"

KINDS = (GOOD_COLORING, EXTREMAL_GRAPH, COUNTING_UPPER_BOUND, LLL_LOWER_BOUND, EMBEDDING)


def make_meta(seed: Optional[int] = None, stamp: bool = False, **extra: Any) -> Dict[str, Any]:
    """
    Build the ``meta`` block.

    :param seed: RNG seed used by the producer, if any
    :param stamp: add a UTC ``created`` timestamp (breaks byte-identical output)
    :param extra: additional producer facts (budgets, log base, ...)
    """
    meta: Dict[str, Any] = {"tool_version": __version__, "log_base": "e"}
    if seed is not None:
        meta["seed"] = int(seed)
    if stamp:
        meta["created"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    meta.update(extra)
    return meta


@dataclass
class Certificate:
    kind: str
    claims: List[str]
    payload: Dict[str, Any]
    meta: Dict[str, Any] = field(default_factory=make_meta)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "claims": list(self.claims), "payload": self.payload, "meta": self.meta}

    def canonical(self) -> str:
        return canonical_json(self.to_json())

    def digest(self) -> str:
        return sha256_hex(self.canonical())

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "Certificate":
        kind = obj.get("kind")
        if kind not in KINDS:
            raise GraphFormatError("kind", f"expected one of {list(KINDS)}, got {kind!r}")
        claims = obj.get("claims")
        if not isinstance(claims, list) or not all(isinstance(c, str) for c in claims):
            raise GraphFormatError("claims", "expected a list of strings")
        payload = obj.get("payload")
        if not isinstance(payload, dict):
            raise GraphFormatError("payload", "expected a JSON object")
        meta = obj.get("meta", {})
        if not isinstance(meta, dict):
            raise GraphFormatError("meta", "expected a JSON object")
        return cls(kind=kind, claims=claims, payload=payload, meta=meta)


def encode_certificate(cert: Certificate) -> str:
    return cert.canonical()


def decode_certificate(text: str) -> Certificate:
    return Certificate.from_json(parse_json_object(text, "certificate"))
