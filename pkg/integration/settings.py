"""
Run settings: config/defaults.json, overridden by BRLAB_* environment
variables, overridden by command-line flags.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional

from bounds_layer.partition import SearchBudget

log = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG = PROJECT_ROOT / "config" / "defaults.json"

ENV_PREFIX = "BRLAB_"
ENV_KEYS = ("threads", "seed", "node_limit", "time_limit", "cache_path", "z_max_side", "ramsey_max_side")


@dataclass
class RunSettings:
    threads: int = 1
    seed: int = 0
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    z_max_side: int = 6
    ramsey_max_side: int = 6
    phase1_node_budget: int = 200_000
    phase1_max_side: int = 8
    exact_digits: int = 4000
    resample_budget: int = 10_000
    cache_path: Optional[str] = ".brlab/extremal_cache.jsonl"

    @classmethod
    def load(cls, config_path: Optional[Path] = None, env: Optional[Dict[str, str]] = None) -> "RunSettings":
        """
        :param config_path: JSON file; defaults to config/defaults.json under the project root
        :param env: environment mapping (os.environ when None)
        """
        config_path = Path(config_path) if config_path is not None else DEFAULT_CONFIG
        values: Dict[str, Any] = {}
        if config_path.exists():
            try:
                values = json.loads(config_path.read_text())
            except json.JSONDecodeError as e:
                raise ValueError(f"config file {config_path} is not valid JSON: {e}")
        elif config_path != DEFAULT_CONFIG:
            raise FileNotFoundError(f"config file {config_path} not found")

        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            log.warning(f"[CLI] ignoring unknown config keys {sorted(unknown)}")
        settings = cls(**{k: v for k, v in values.items() if k in known})

        env = os.environ if env is None else env
        for key in ENV_KEYS:
            raw = env.get(ENV_PREFIX + key.upper())
            if raw is not None and raw != "":
                settings.set(key, raw)
        return settings

    def set(self, key: str, raw: Any):
        """Assign ``raw`` to ``key``, converting strings to the field's type."""
        if raw is None:
            return
        current = {f.name: f for f in fields(self)}[key]
        if isinstance(raw, str):
            if key == "cache_path":
                value: Any = raw
            elif key == "time_limit":
                value = float(raw)
            else:
                value = int(raw)
        else:
            value = raw
        log.debug(f"[CLI] setting {current.name} = {value!r}")
        setattr(self, key, value)

    def budget(self, max_side: int) -> SearchBudget:
        return SearchBudget(max_side=max_side, node_limit=self.node_limit, time_limit=self.time_limit, workers=self.threads)

    def to_json(self) -> dict:
        return asdict(self)
