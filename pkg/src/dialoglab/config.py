"""Runtime configuration: flags > environment > config file > defaults.

Paths default to the packaged data files for the configured language.
Startup validates every path and fails fast with a field-level diagnostic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path

import yaml

ENV_PREFIX = "DIALOGLAB_"

LANGUAGES = ("en", "de")


class ConfigError(ValueError):
    """Invalid configuration; message names the offending field."""

    def __init__(self, field_name: str, reason: str):
        super().__init__(f"{field_name}: {reason}")
        self.field_name = field_name


@dataclass(frozen=True, slots=True)
class AppConfig:
    language: str = "en"
    data_dir: str = "./data/contexts"
    claims_dir: str = "./data/claims"
    catalog_path: str = ""  # empty -> packaged default for language
    templates_path: str = ""
    phones_path: str = ""
    jokes_path: str = ""
    host: str = "127.0.0.1"
    port: int = 8080
    seed: int = 0
    log_level: str = "info"
    static_dir: str = ""
    watch_templates: bool = False

    def resolved_catalog(self) -> Path:
        return Path(self.catalog_path) if self.catalog_path else packaged_data(f"catalog_{self.language}.yaml")

    def resolved_templates(self) -> Path:
        return Path(self.templates_path) if self.templates_path else packaged_data(f"templates_{self.language}.yaml")

    def resolved_phones(self) -> Path:
        return Path(self.phones_path) if self.phones_path else packaged_data("phones.yaml")

    def resolved_jokes(self) -> Path:
        return Path(self.jokes_path) if self.jokes_path else packaged_data("jokes.yaml")


def packaged_data(name: str) -> Path:
    return Path(str(resources.files("dialoglab").joinpath(f"data/{name}")))


_INT_FIELDS = {"port", "seed"}
_BOOL_FIELDS = {"watch_templates"}


def resolve_config(
    cli_values: dict | None = None,
    env: dict | None = None,
    config_file: str | Path | None = None,
) -> AppConfig:
    """Merge the precedence chain and validate the result."""
    merged: dict = {}

    if config_file:
        path = Path(config_file)
        if not path.exists():
            raise ConfigError("config", f"config file not found: {path}")
        try:
            loaded = yaml.safe_load(path.read_text("utf-8")) or {}
        except yaml.YAMLError as exc:
            raise ConfigError("config", f"invalid YAML: {exc}")
        if not isinstance(loaded, dict):
            raise ConfigError("config", "config file must contain a mapping")
        merged.update(loaded)

    env = dict(os.environ if env is None else env)
    for f in fields(AppConfig):
        env_name = ENV_PREFIX + f.name.upper()
        if env_name in env:
            merged[f.name] = env[env_name]

    for name, value in (cli_values or {}).items():
        if value is not None:
            merged[name] = value

    known = {f.name for f in fields(AppConfig)}
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown configuration field")

    for name in _INT_FIELDS & set(merged):
        try:
            merged[name] = int(merged[name])
        except (TypeError, ValueError):
            raise ConfigError(name, f"not an integer: {merged[name]!r}")
    for name in _BOOL_FIELDS & set(merged):
        merged[name] = str(merged[name]).lower() in ("1", "true", "yes", "on")

    config = AppConfig(**merged)
    _validate(config)
    return config


def _validate(config: AppConfig) -> None:
    if config.language not in LANGUAGES:
        raise ConfigError("language", f"must be one of {LANGUAGES}, got {config.language!r}")
    if not (0 < config.port < 65536):
        raise ConfigError("port", f"out of range: {config.port}")
    if config.log_level.lower() not in ("debug", "info", "warning", "error"):
        raise ConfigError("log_level", f"unknown level {config.log_level!r}")
    for field_name, path in (
        ("catalog_path", config.resolved_catalog()),
        ("templates_path", config.resolved_templates()),
        ("phones_path", config.resolved_phones()),
        ("jokes_path", config.resolved_jokes()),
    ):
        if not Path(path).exists():
            raise ConfigError(field_name, f"file not found: {path}")
    if config.static_dir and not Path(config.static_dir).is_dir():
        raise ConfigError("static_dir", f"directory not found: {config.static_dir}")
