"""Application configuration: JSON file with environment-variable overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

ENV_API_KEY = "LLM_API_KEY"
ENV_BASE_URL = "LLM_BASE_URL"
ENV_MODEL = "LLM_MODEL"

DEFAULT_LISTEN = "127.0.0.1:8777"
DEFAULT_MODEL = "gpt-4o"


@dataclass
class AppConfig:
    listen: str = DEFAULT_LISTEN
    store_path: Optional[str] = None
    cwe_catalog: Optional[str] = None
    methods_catalog: Optional[str] = None
    provider_mode: str = "none"  # none | live | replay
    base_url: str = "https://api.openai.com/v1"
    model: str = DEFAULT_MODEL
    replay_transcript: Optional[str] = None
    ui_dir: Optional[str] = None
    api_key: Optional[str] = field(default=None, repr=False)

    @classmethod
    def load(cls, config_file: Optional[Path | str] = None) -> "AppConfig":
        config = cls()
        if config_file is not None:
            data = json.loads(Path(config_file).read_text(encoding="utf-8"))
            for key, value in data.items():
                if hasattr(config, key):
                    setattr(config, key, value)
        # Env overrides config file.
        config.api_key = os.environ.get(ENV_API_KEY, config.api_key)
        config.base_url = os.environ.get(ENV_BASE_URL, config.base_url)
        config.model = os.environ.get(ENV_MODEL, config.model)
        return config
