"""Run-configuration file loading."""

import logging
from pathlib import Path
from typing import Any

import yaml

logger = logging.getLogger(__name__)


class RunConfigLoader:
    """Loads per-command defaults from a YAML or JSON file.

    Top-level keys apply to every command; a mapping named after a command
    applies to that command only and wins over them.
    """

    def __init__(self, config_path: Path | None = None) -> None:
        self._config_path = config_path

    @property
    def config_path(self) -> Path | None:
        """Return the configuration file path."""
        return self._config_path

    def load(self) -> dict[str, Any]:
        """Read the whole file; missing or unreadable files give an empty mapping."""
        if self._config_path is None:
            return {}
        if not self._config_path.is_file():
            logger.warning("Config file %s not found; using defaults", self._config_path)
            return {}
        try:
            text = self._config_path.read_text(encoding="utf-8")
        except OSError as e:
            logger.warning("Cannot read config file %s: %s; using defaults", self._config_path, e)
            return {}
        data = yaml.safe_load(text)
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ValueError(
                f"Config file {self._config_path} must hold a mapping, got {type(data).__name__}"
            )
        return data

    def defaults_for(
        self, command: str, commands: tuple[str, ...] = ()
    ) -> dict[str, Any]:
        """Flat option defaults for one command, keys normalised to option names.

        Keys listed in ``commands`` are sections; only the one for ``command`` is read.
        """
        data = self.load()
        values = {k: v for k, v in data.items() if k not in commands and k != command}
        section = data.get(command, {})
        if not isinstance(section, dict):
            raise ValueError(f"Config section '{command}' must be a mapping")
        values.update(section)
        return {str(k).replace("-", "_"): v for k, v in values.items()}
