"""HTTP service wrapping the assignment engine for interactive sessions.

Configuration comes from a JSON file ({"data_dir", "provider", "default_cost",
"port"}) with LABELOT_DATA_DIR and LABELOT_PORT environment overrides.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from ..errors import ConfigError
from ..providers import ProviderConfig
from .app import create_app
from .store import SessionStore

DEFAULT_PORT = 8040


def load_service_config(path: str | Path | None = None) -> dict:
    """Service settings as a plain dict; env vars win over the file."""
    settings: dict = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            try:
                settings = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"service config {path}: invalid JSON ({exc.msg})") from exc
        if not isinstance(settings, dict):
            raise ConfigError(f"service config {path} must be a JSON object")
    if os.environ.get("LABELOT_DATA_DIR"):
        settings["data_dir"] = os.environ["LABELOT_DATA_DIR"]
    if os.environ.get("LABELOT_PORT"):
        settings["port"] = int(os.environ["LABELOT_PORT"])
    if "data_dir" not in settings:
        raise ConfigError("service needs a data_dir (config file or LABELOT_DATA_DIR)")
    if "provider" not in settings:
        raise ConfigError("service needs a 'provider' section for embeddings")
    settings.setdefault("port", DEFAULT_PORT)
    settings.setdefault("default_cost", "l2")
    return settings


def build_store(settings: dict) -> SessionStore:
    provider = ProviderConfig.from_dict(settings["provider"])
    return SessionStore(
        data_dir=settings["data_dir"],
        provider=provider,
        default_cost=settings.get("default_cost", "l2"),
    )


__all__ = ["create_app", "SessionStore", "build_store", "load_service_config", "DEFAULT_PORT"]
