"""Configuration loader"""

import logging
import re
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml
from pydantic import ValidationError

from .errors import ConfigError

logger = logging.getLogger(__name__)

_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*$")
_RATIO = re.compile(r"^\s*(-?\d+(?:\.\d*)?)\s*/\s*(\d+(?:\.\d*)?)\s*$")
_SCIENTIFIC = re.compile(r"^\s*[-+]?(\d+\.?\d*|\.\d+)[eE][-+]?\d+\s*$")


def _scalar(text: str, lineno: int) -> Any:
    """YAML scalar or flow sequence; a literal ratio like 10/3 becomes a float"""
    match = _RATIO.match(text)
    if match:
        return float(match.group(1)) / float(match.group(2))
    if _SCIENTIFIC.match(text):
        # YAML 1.1 reads 1e-10 as a string
        return float(text)
    try:
        return yaml.safe_load(text) if text else None
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse value {text!r}: {e}", [lineno]) from e


def _read_entries(text: str) -> Dict[str, Tuple[Optional[int], Any]]:
    entries: Dict[str, Tuple[Optional[int], Any]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", [lineno])
        key, value = (part.strip() for part in line.split("=", 1))
        if not _KEY.match(key):
            raise ConfigError(f"invalid key {key!r}", [lineno])
        if key in entries:
            first = entries[key][0]
            raise ConfigError(f"duplicate key '{key}'", [first, lineno])
        entries[key] = (lineno, _scalar(value, lineno))
    return entries


def _nest(entries: Dict[str, Tuple[Optional[int], Any]]) -> Dict[str, Any]:
    nested: Dict[str, Any] = {}
    for key, (lineno, value) in entries.items():
        *parents, leaf = key.split(".")
        node = nested
        for part in parents:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"'{key}' conflicts with scalar key '{part}'", [lineno])
            node = child
        if isinstance(node.get(leaf), dict):
            raise ConfigError(f"'{key}' conflicts with its own subkeys", [lineno])
        node[leaf] = value
    return nested


def _line_of(loc: Tuple[Any, ...], entries: Dict[str, Tuple[Optional[int], Any]]) -> Optional[int]:
    """Line of the longest dotted prefix of a validation error location"""
    parts = [str(p) for p in loc if isinstance(p, str)]
    for end in range(len(parts), 0, -1):
        key = ".".join(parts[:end])
        if key in entries:
            return entries[key][0]
    return None


def parse_config(text: str, overrides: Optional[Dict[str, Any]] = None):
    """
    Parse flat 'key = value' run configuration text

    Keys are dotted section paths (grid.M, time.T, randomization.law, ...);
    values are YAML scalars or flow sequences. Blank lines and '#' comments
    are ignored.

    Args:
        text: UTF-8 configuration text
        overrides: Dotted keys applied on top of the file (CLI flags)

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: on the first error, naming its line(s)
    """
    from ..models.config import RunConfig

    entries = _read_entries(text)
    for key, value in (overrides or {}).items():
        entries[key] = (None, value)
    try:
        return RunConfig.model_validate(_nest(entries))
    except ValidationError as e:
        first = e.errors()[0]
        loc = tuple(first.get("loc", ()))
        where = ".".join(str(p) for p in loc) or "config"
        line = _line_of(loc, entries)
        raise ConfigError(f"{where}: {first['msg']}", [line] if line else None) from e


class ConfigLoader:
    """Load run configuration files"""

    def __init__(self, config_dir: str = "config"):
        self.config_dir = Path(config_dir)

    def resolve(self, filename: str) -> Path:
        path = Path(filename)
        if path.exists() or path.is_absolute():
            return path
        return self.config_dir / filename

    def load(self, filename: str, overrides: Optional[Dict[str, Any]] = None):
        """
        Load and validate a configuration file

        Args:
            filename: Path, or a name relative to the config directory
            overrides: Dotted keys applied on top of the file

        Returns:
            Validated RunConfig
        """
        path = self.resolve(filename)
        if not path.exists():
            raise ConfigError(f"configuration file not found: {path}")
        logger.info(f"Loading configuration from {path}")
        return parse_config(path.read_text(encoding="utf-8"), overrides)
