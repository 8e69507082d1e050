"""Run configuration: defaults, key=value config files, flag overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .sieve import MAX_SPAN

__all__ = ["RunConfig", "load_config_file", "ConfigError"]


class ConfigError(ValueError):
    """Invalid configuration value or file."""


@dataclass(frozen=True)
class RunConfig:
    bound: int = 1_000_000
    segment_size: int = 1_000_000
    imax: int | None = None  # None -> per-subject default budget
    rounds: int = 64
    cache_dir: Path = Path(".primekin-cache")
    fmt: str = "table"  # "table" or "machine"

    def __post_init__(self) -> None:
        for name in ("bound", "segment_size", "rounds"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.imax is not None and self.imax <= 0:
            raise ConfigError("imax must be positive")
        if self.segment_size > MAX_SPAN:
            raise ConfigError(f"segment_size exceeds the memory ceiling ({MAX_SPAN})")
        if self.fmt not in ("table", "machine"):
            raise ConfigError(f"unknown format {self.fmt!r}")


_INT_KEYS = {"bound", "segment_size", "imax", "rounds"}
_KEY_ALIASES = {"format": "fmt"}


def load_config_file(path: Path, base: RunConfig | None = None) -> RunConfig:
    """Parse a line-oriented key=value file over a base config.

    Blank lines and #-comments are ignored; unknown keys are errors so a
    typo never silently falls back to a default.
    """
    cfg = base or RunConfig()
    known = {f.name for f in fields(RunConfig)}
    overrides: dict[str, object] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = _KEY_ALIASES.get(key.strip(), key.strip())
        value = value.strip()
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in _INT_KEYS:
            try:
                overrides[key] = int(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: {key} needs an integer") from None
        elif key == "cache_dir":
            overrides[key] = Path(value)
        else:
            overrides[key] = value
    return replace(cfg, **overrides)
