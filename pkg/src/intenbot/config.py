"""Engine configuration: angle ranges, resolver selection, bind address.

Loadable from a JSON file; INTENBOT_* environment variables override file
values so deployments can switch resolvers without editing config.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .candidates import TaskType
from .resolvers import DEFAULT_TIMEOUT_MS, ENV_ENDPOINT, ENV_MODE, ENV_TIMEOUT
from .targeting import AngleConfig

ENV_BIND = "INTENBOT_BIND"
DEFAULT_BIND = "127.0.0.1:8080"


@dataclass
class EngineConfig:
    angles: AngleConfig = field(default_factory=AngleConfig)
    resolver_mode: str = "baseline"
    endpoint: str | None = None
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    bind: str = DEFAULT_BIND
    model: str = "gpt-4o"
    # Extra trigger words per task type, merged into the baseline lexicon.
    extra_verbs: dict[TaskType, frozenset[str]] = field(default_factory=dict)
    builder_mode: str = "rules"  # remote-builder hook reserved, unimplemented

    @classmethod
    def load(cls, path: str | Path | None = None) -> "EngineConfig":
        cfg = cls()
        if path is not None:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
            if "angles" in raw:
                cfg.angles = AngleConfig.from_dict(raw["angles"])
            resolver = raw.get("resolver", {})
            cfg.resolver_mode = resolver.get("mode", cfg.resolver_mode)
            cfg.endpoint = resolver.get("endpoint", cfg.endpoint)
            cfg.timeout_ms = int(resolver.get("timeout_ms", cfg.timeout_ms))
            cfg.model = resolver.get("model", cfg.model)
            cfg.bind = raw.get("bind", cfg.bind)
            cfg.extra_verbs = {
                TaskType.from_name(task): frozenset(str(w).lower() for w in words)
                for task, words in raw.get("verbs", {}).items()
            }
            cfg.builder_mode = raw.get("builder", {}).get("mode", cfg.builder_mode)
            if cfg.builder_mode != "rules":
                raise ValueError(f"unsupported builder mode {cfg.builder_mode!r}")
        return cfg.apply_env()

    def apply_env(self) -> "EngineConfig":
        self.resolver_mode = os.environ.get(ENV_MODE, self.resolver_mode)
        self.endpoint = os.environ.get(ENV_ENDPOINT, self.endpoint)
        if ENV_TIMEOUT in os.environ:
            self.timeout_ms = int(os.environ[ENV_TIMEOUT])
        self.bind = os.environ.get(ENV_BIND, self.bind)
        return self

    @property
    def host(self) -> str:
        return self.bind.rsplit(":", 1)[0] if ":" in self.bind else self.bind

    @property
    def port(self) -> int:
        return int(self.bind.rsplit(":", 1)[1]) if ":" in self.bind else 8080
