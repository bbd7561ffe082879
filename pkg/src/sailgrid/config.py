"""Run configuration: JSON files plus ``key=value`` command-line overrides.

Override keys may be dotted to reach nested mappings; values are parsed as
JSON when possible and fall back to plain strings. Every CLI run writes the
fully resolved configuration next to its outputs.
"""
from __future__ import annotations

import json
from pathlib import Path

__all__ = ["ConfigError", "load_config", "apply_overrides", "write_resolved"]


class ConfigError(ValueError):
    """Bad configuration file or override."""


def load_config(path) -> dict:
    try:
        cfg = json.loads(Path(path).read_text())
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(cfg, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return cfg


def apply_overrides(cfg: dict, overrides) -> dict:
    """Return cfg with ``key=value`` (dotted keys allowed) applied on top."""
    out = json.loads(json.dumps(cfg))  # deep copy of plain JSON data
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override {key!r} descends into a non-object")
        node[parts[-1]] = value
    return out


def write_resolved(cfg: dict, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "resolved_config.json").write_text(json.dumps(cfg, indent=2, sort_keys=True))
