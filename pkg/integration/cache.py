"""
Append-only JSON-lines store of exhausted Zarankiewicz searches.

One record per line, keyed by ``ExtremalRecord.key()``; the last line for a
key wins. Records are re-verified when read, and corrupt lines are skipped.
A read-back record must have a valid witness that is also edge-maximal, so a
hand-lowered value with a trimmed witness is rejected. A maximal witness that
is not maximum still passes: the file is trusted local state, and
``verify --recheck`` re-runs the search behind any exactness claim.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Optional

from bounds_layer.zarankiewicz.extremal import ExtremalRecord
from core.codec import canonical_json
from core.errors import BrLabError
from core.patterns import ForbiddenPattern

log = logging.getLogger(__name__)


class ExtremalCache:
    def __init__(self, path):
        self.path = Path(path)
        self._records: Dict[str, ExtremalRecord] = {}
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        with open(self.path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = ExtremalRecord.from_json(json.loads(line))
                except (json.JSONDecodeError, KeyError, TypeError, ValueError, BrLabError) as e:
                    log.warning(f"[CACHE] skipping corrupt line {lineno} of {self.path}: {e}")
                    continue
                if not record.exhausted or not record.verify() or not record.saturated():
                    log.warning(f"[CACHE] skipping unverifiable record {record.key()} on line {lineno}")
                    continue
                self._records[record.key()] = record
        log.debug(f"[CACHE] loaded {len(self._records)} records from {self.path}")

    def __len__(self) -> int:
        return len(self._records)

    def get(self, r: int, pattern: ForbiddenPattern) -> Optional[ExtremalRecord]:
        hit = self._records.get(f"{r}|{pattern.cache_key()}")
        if hit is not None:
            log.info(f"[CACHE] hit for z({r};{pattern.describe()}) = {hit.value}")
        return hit

    def put(self, record: ExtremalRecord):
        if not record.exhausted:
            return
        if record.key() in self._records:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(canonical_json(record.to_json()) + "\n")
        self._records[record.key()] = record
        log.debug(f"[CACHE] stored {record.key()}")
