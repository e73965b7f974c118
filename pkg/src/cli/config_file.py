"""Flat key=value run configuration files.

    # comment
    scheme = yee
    cfl = 0.6
    mach = 0.1, 0.01

Values are handed to RunConfig unchanged (comma lists become lists), so
validation errors carry the line the offending key came from.
"""

import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from src.engine.errors import ConfigError
from src.models.run_config import RunConfig

logger = logging.getLogger(__name__)

LIST_KEYS = {"mach", "levels"}
KEYS = set(RunConfig.model_fields) - {"subcommand"}


def parse_lines(
    lines: list[str], source: str = "<config>"
) -> tuple[dict[str, Any], dict[str, int]]:
    """Raw values and the 1-based line of each key."""
    values: dict[str, Any] = {}
    where: dict[str, int] = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{number}: expected key = value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise ConfigError(f"{source}:{number}: unknown key {key!r}")
        if key in where:
            raise ConfigError(
                f"{source}:{number}: duplicate key {key!r} (first on line {where[key]})"
            )
        if not value:
            raise ConfigError(f"{source}:{number}: empty value for {key!r}")
        values[key] = [v.strip() for v in value.split(",")] if key in LIST_KEYS else value
        where[key] = number
    return values, where


def read_config_file(path: str | Path) -> tuple[dict[str, Any], dict[str, int]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    return parse_lines(text.splitlines(), str(path))


def build_config(
    file_values: dict[str, Any],
    overrides: dict[str, Any],
    where: dict[str, int] | None = None,
    source: str = "<config>",
) -> RunConfig:
    """Merge file values with CLI overrides (which win) and validate."""
    merged = {**file_values, **{k: v for k, v in overrides.items() if v is not None}}
    try:
        config = RunConfig(**merged)
    except ValidationError as e:
        first = e.errors()[0]
        key = str(first["loc"][0]) if first["loc"] else ""
        origin = source
        overridden = {k for k, v in overrides.items() if v is not None}
        if where and key in where and key not in overridden:
            origin = f"{source}:{where[key]}"
        raise ConfigError(f"{origin}: invalid {key or 'config'}: {first['msg']}") from e
    logger.debug("Effective config: %s", config.echo())
    return config


def format_config(config: RunConfig) -> str:
    """Effective config in the file format; readable by read_config_file."""
    return "".join(f"{k} = {v}\n" for k, v in config.echo() if k in KEYS)
