"""Key-value config files with environment-variable overrides (PROCRUST_ prefix)."""

from __future__ import annotations

import os
from pathlib import Path

from procrust.errors import ValidationError

ENV_PREFIX = "PROCRUST_"


def load_config(path: Path | str) -> dict[str, str]:
    """Parse ``key = value`` lines; blank lines and # comments are ignored."""
    text = Path(path).read_text(encoding="utf-8")
    config: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        config[key.strip()] = value.strip()
    return config


def apply_env_overrides(config: dict[str, str], environ=None) -> dict[str, str]:
    env = os.environ if environ is None else environ
    merged = dict(config)
    for key, value in env.items():
        if key.startswith(ENV_PREFIX):
            merged[key[len(ENV_PREFIX):].lower()] = value
    return merged


def remote_agent_settings(path: Path | str, environ=None) -> dict:
    """Resolve the remote-backend settings: endpoint_url, model, temperature, retries."""
    config = apply_env_overrides(load_config(path), environ=environ)
    if "endpoint_url" not in config:
        raise ValidationError(f"remote agent config {path} is missing endpoint_url")
    if "model" not in config:
        raise ValidationError(f"remote agent config {path} is missing model")
    try:
        return {
            "endpoint_url": config["endpoint_url"],
            "model": config["model"],
            "temperature": float(config.get("temperature", "0")),
            "retry_limit": int(config.get("retry_limit", "2")),
            "timeout": float(config.get("timeout", "60")),
        }
    except ValueError as exc:
        raise ValidationError(f"remote agent config {path} has a bad numeric value: {exc}") from exc
