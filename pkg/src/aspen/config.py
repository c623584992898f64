"""Config file support for the command-line interface.

A config file is a JSON object supplying defaults for bounds, seeds, and
the translator; command-line flags always win over the file.  The path
comes from ``--config`` or, failing that, the ``ASPEN_CONFIG`` environment
variable.  No file, no problem: everything has a built-in default.

    {
      "atom_bound": 22,
      "seed": 0,
      "samples": 256,
      "translator": {
        "kind": "external-process",
        "command": ["python3", "-m", "aspen.pipeline.echo"],
        "timeout": 10.0,
        "window": 8
      }
    }
"""

from __future__ import annotations

import json
import os
import shlex
from pathlib import Path

from .pipeline.run import TranslatorSpec

ENV_VAR = "ASPEN_CONFIG"

_TOP_KEYS = {"atom_bound", "seed", "samples", "translator"}
_TRANSLATOR_KEYS = {"kind", "command", "timeout", "window"}


class ConfigError(ValueError):
    """The config file exists but cannot be used."""


def load_config(path: str | None = None) -> dict:
    """Read the config mapping from ``path``, the environment, or nowhere."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return {}
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except ValueError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    translator = data.get("translator")
    if translator is not None:
        if not isinstance(translator, dict):
            raise ConfigError("config key 'translator' must be an object")
        bad = set(translator) - _TRANSLATOR_KEYS
        if bad:
            raise ConfigError(f"unknown translator keys: {', '.join(sorted(bad))}")
    return data


def translator_from_config(config: dict, plugin: str | None = None) -> TranslatorSpec:
    """Build the translator spec: ``--plugin`` flag > config file > retrieval."""
    if plugin:
        return TranslatorSpec(kind="external-process", command=tuple(shlex.split(plugin)))
    section = config.get("translator")
    if not section:
        return TranslatorSpec()
    command = section.get("command", ())
    if isinstance(command, str):
        command = tuple(shlex.split(command))
    try:
        return TranslatorSpec(
            kind=section.get("kind", "builtin-retrieval"),
            command=tuple(command),
            timeout=float(section.get("timeout", 10.0)),
            window=int(section.get("window", 8)),
        )
    except ValueError as exc:
        raise ConfigError(f"bad translator config: {exc}") from exc
