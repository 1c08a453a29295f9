"""Configuration management for the qalign command-line tools."""
from __future__ import annotations

import enum
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Optional, TypeVar

from dotenv import dotenv_values

from qalign.utils.seqdb import AlphabetKind, HammingMode

T = TypeVar("T")


class ConfigError(RuntimeError):
    """A configuration value is missing, malformed, or out of range."""


class Subcommand(str, enum.Enum):
    EXACT = "exact"
    ALIGN = "align"
    TRACE = "trace"
    STATS = "stats"
    ENCODE = "encode"


class OutputFormat(str, enum.Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(slots=True)
class SearchDefaults:
    """Defaults loaded from environment variables or a .env file."""

    seed: int
    alphabet: AlphabetKind
    hamming_mode: HammingMode
    repeats: int
    growth_factor: float
    timeout_factor: float
    workers: int
    log_level: int
    allow_domain_crossing: bool


@dataclass(slots=True)
class RunConfig:
    """Validated settings for one CLI invocation."""

    subcommand: Subcommand
    db_path: Optional[Path]
    query: Optional[str]
    query_path: Optional[Path]
    alphabet: AlphabetKind
    hamming_mode: HammingMode
    r: int
    n_max: Optional[int]
    growth_factor: float
    timeout_factor: float
    seed: int
    trials: int
    workers: int
    distance: int
    max_k: Optional[int]
    enumerate_all: bool
    compressed: bool
    allow_domain_crossing: bool
    stats_mode: str
    output_path: Optional[Path]
    output_format: OutputFormat


def load_config(env_file: Optional[str | Path] = None) -> SearchDefaults:
    """Load process-wide defaults, optionally from a specific ``.env`` file."""

    env_path = Path(env_file) if env_file is not None else Path(".env")
    file_values = dotenv_values(env_path)
    values = {**file_values, **os.environ}

    return SearchDefaults(
        seed=_parse(values, "QALIGN_SEED", "0", int),
        alphabet=_parse(values, "QALIGN_ALPHABET", "protein", AlphabetKind),
        hamming_mode=_parse(values, "QALIGN_HAMMING_MODE", "bit", HammingMode),
        repeats=_parse(values, "QALIGN_REPEATS", "3", int),
        growth_factor=_parse(values, "QALIGN_LAMBDA", "1.2", float),
        timeout_factor=_parse(values, "QALIGN_TIMEOUT_FACTOR", "4.0", float),
        workers=_parse(values, "QALIGN_WORKERS", "4", int),
        log_level=_parse(values, "QALIGN_LOG_LEVEL", "INFO", _parse_level),
        allow_domain_crossing=_parse_bool(values.get("QALIGN_DOMAIN_CROSSING", "true")),
    )


def build_run_config(args: object, defaults: SearchDefaults) -> RunConfig:
    """Merge parsed CLI arguments over the loaded defaults and validate ranges."""

    def arg(name: str, fallback: T) -> T:
        value = getattr(args, name, None)
        return fallback if value is None else value

    config = RunConfig(
        subcommand=Subcommand(getattr(args, "command")),
        db_path=arg("db", None),
        query=arg("query", None),
        query_path=arg("query_file", None),
        alphabet=AlphabetKind(arg("alphabet", defaults.alphabet)),
        hamming_mode=HammingMode(arg("mode", defaults.hamming_mode)),
        r=arg("repeats", defaults.repeats),
        n_max=arg("n_max", None),
        growth_factor=arg("growth_factor", defaults.growth_factor),
        timeout_factor=arg("timeout_factor", defaults.timeout_factor),
        seed=arg("seed", defaults.seed),
        trials=arg("trials", 1000),
        workers=arg("workers", defaults.workers),
        distance=arg("distance", 0),
        max_k=arg("max_k", None),
        enumerate_all=bool(arg("all", False)),
        compressed=bool(arg("compressed", False)),
        allow_domain_crossing=not arg("no_domain_crossing", not defaults.allow_domain_crossing),
        stats_mode=arg("stats_mode", "bbht"),
        output_path=arg("output", None),
        output_format=OutputFormat(arg("format", OutputFormat.CSV)),
    )
    _validate(config)
    return config


def _validate(config: RunConfig) -> None:
    if not 1.0 < config.growth_factor < 4.0 / 3.0:
        raise ConfigError(f"--lambda must lie in (1, 4/3), got {config.growth_factor}")
    if config.timeout_factor <= 0:
        raise ConfigError(f"--timeout-factor must be positive, got {config.timeout_factor}")
    if config.r < 1:
        raise ConfigError(f"--repeats must be at least 1, got {config.r}")
    if config.n_max is not None and config.n_max < 0:
        raise ConfigError(f"--n-max must be non-negative, got {config.n_max}")
    if config.trials < 1:
        raise ConfigError(f"--trials must be at least 1, got {config.trials}")
    if config.workers < 1:
        raise ConfigError(f"--workers must be at least 1, got {config.workers}")
    if config.distance < 0:
        raise ConfigError(f"--distance must be non-negative, got {config.distance}")
    if config.max_k is not None and config.max_k < 0:
        raise ConfigError(f"--max-k must be non-negative, got {config.max_k}")
    if config.subcommand is not Subcommand.ENCODE and config.db_path is None:
        raise ConfigError("--db is required for this command.")
    if config.query is None and config.query_path is None:
        raise ConfigError("Provide a query via --query or --query-file.")
    if config.query is not None and config.query_path is not None:
        raise ConfigError("Use either --query or --query-file, not both.")


def _parse(values: Mapping[str, Optional[str]], key: str, default: str, cast: Callable[[str], T]) -> T:
    raw = values.get(key) or default
    try:
        return cast(str(raw).strip())
    except ValueError as exc:
        raise ConfigError(f"Invalid value for {key}: {raw!r}") from exc


def _parse_level(value: str) -> int:
    level = logging.getLevelName(value.upper())
    if not isinstance(level, int):
        raise ValueError(value)
    return level


def _parse_bool(value: Optional[str]) -> bool:
    """Parse typical truthy string values into a boolean."""

    if value is None:
        return False

    return str(value).strip().lower() in {"1", "true", "yes", "on"}
