"""Engine configuration and the key=value config file loader."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from mcforge.errors import ConfigurationError

DEFAULT_PART_OF = "http://purl.obolibrary.org/obo/BFO_0000050"
DEFAULT_HAS_PART = "http://purl.obolibrary.org/obo/BFO_0000051"


@dataclass(frozen=True)
class EngineConfig:
    part_of_iri: str = DEFAULT_PART_OF
    has_part_iri: Optional[str] = None
    root_class_iri: Optional[str] = None
    base_iri: Optional[str] = None
    inherit_inverse: bool = False
    aux_category_iris: Optional[tuple[str, ...]] = None
    cache_dir: Optional[str] = None
    session_ttl_hours: float = 24.0
    cors_origins: tuple[str, ...] = field(default_factory=tuple)


# Keys accepted in a config file; anything else is a hard error so typos
# like part_of_uri cannot silently fall back to defaults.
_FILE_KEYS = {
    "part_of_iri",
    "has_part_iri",
    "root_class_iri",
    "cache_dir",
    "session_ttl_hours",
}


def _unquote(value: str) -> str:
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = _unquote(value.strip())
        if key not in _FILE_KEYS:
            allowed = ", ".join(sorted(_FILE_KEYS))
            raise ConfigurationError(
                f"{source}:{lineno}: unknown config key {key!r} (allowed: {allowed})"
            )
        if key in entries:
            raise ConfigurationError(f"{source}:{lineno}: duplicate config key {key!r}")
        entries[key] = value
    return entries


def apply_config_file(config: EngineConfig, path: str | Path) -> EngineConfig:
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    entries = parse_config_text(text, source=str(path))
    updates: dict[str, object] = {}
    if "part_of_iri" in entries:
        updates["part_of_iri"] = entries["part_of_iri"]
    if "has_part_iri" in entries:
        value = entries["has_part_iri"]
        updates["has_part_iri"] = value or None
    if "root_class_iri" in entries:
        updates["root_class_iri"] = entries["root_class_iri"] or None
    if "cache_dir" in entries:
        updates["cache_dir"] = entries["cache_dir"]
    if "session_ttl_hours" in entries:
        raw = entries["session_ttl_hours"]
        try:
            hours = float(raw)
        except ValueError as exc:
            raise ConfigurationError(
                f"{path}: session_ttl_hours must be a number, got {raw!r}"
            ) from exc
        if hours <= 0:
            raise ConfigurationError(f"{path}: session_ttl_hours must be positive")
        updates["session_ttl_hours"] = hours
    return replace(config, **updates)
