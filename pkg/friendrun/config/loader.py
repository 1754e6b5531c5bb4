"""
Unified configuration - loader.

Precedence: environment variables > config file > code defaults.
"""

import json
import os
from typing import Any, Dict, Optional, Sequence

import toml
import yaml

from friendrun.config.constants import ExceptionConstants
from friendrun.utils.logging_utils import LoggingUtils

DEFAULT_CONFIG_FILES = (
    "friendrun.yaml",
    "friendrun.yml",
    "friendrun.toml",
    ".friendrun.yaml",
    ".friendrun.yml",
    ".friendrun.toml",
)


class ConfigLoader:
    """Loads environment overrides and the first config file found."""

    def __init__(self, search_dir: Optional[str] = None, config_files: Sequence[str] = DEFAULT_CONFIG_FILES):
        self.search_dir = search_dir or os.getcwd()
        self.config_files = tuple(config_files)
        self.env_mapping = {
            "FRIENDRUN_DEBUG": "system.debug",
            "FRIENDRUN_LOG_LEVEL": "system.log_level",
            "FRIENDRUN_SCENARIO": "scenario.scenario",
            "FRIENDRUN_THETA": "scenario.theta",
            "FRIENDRUN_MODEL": "scenario.model",
            "FRIENDRUN_QUERY": "scenario.query",
            "FRIENDRUN_OUTPUT": "scenario.output",
            "FRIENDRUN_TRAJECTORIES": "bet.n_trajectories",
            "FRIENDRUN_SEED": "bet.master_seed",
            "FRIENDRUN_WORKERS": "bet.workers",
        }

    def _load_env_vars(self) -> Dict[str, Any]:
        env_config: Dict[str, Any] = {}
        for env_var, config_path in self.env_mapping.items():
            value = os.getenv(env_var)
            if value is None:
                continue
            converted = self._convert_env_value(value)
            self._set_nested_value(env_config, config_path, converted)
            LoggingUtils.log_debug(
                "ConfigLoader", "Loaded env var {env_var} -> {config_path}={converted}",
                env_var=env_var, config_path=config_path, converted=converted,
            )
        return env_config

    @staticmethod
    def _convert_env_value(value: str) -> Any:
        if value.lower() in ("true", "false"):
            return value.lower() == "true"
        try:
            return float(value) if "." in value or "e" in value.lower() else int(value)
        except ValueError:
            return value

    @staticmethod
    def _set_nested_value(config: Dict[str, Any], path: str, value: Any) -> None:
        keys = path.split(".")
        current = config
        for key in keys[:-1]:
            current = current.setdefault(key, {})
        current[keys[-1]] = value

    def _load_file_config(self) -> Dict[str, Any]:
        for name in self.config_files:
            path = os.path.join(self.search_dir, name)
            if not os.path.exists(path):
                continue
            try:
                LoggingUtils.log_debug("ConfigLoader", "Loading config from: {file}", file=path)
                return self.parse_config_file(path)
            except ExceptionConstants.FILE_OPERATION_EXCEPTIONS + (yaml.YAMLError, toml.TomlDecodeError) as e:
                LoggingUtils.log_warning(
                    "ConfigLoader", "Failed to load config from {file}: {error}", file=path, error=e
                )
        LoggingUtils.log_debug("ConfigLoader", "No config file found, using defaults")
        return {}

    @staticmethod
    def parse_config_file(filepath: str) -> Dict[str, Any]:
        """Parse YAML, TOML or JSON; a top-level ``friendrun`` key is unwrapped."""
        with open(filepath, "r", encoding="utf-8") as f:
            if filepath.endswith((".yaml", ".yml")):
                data = yaml.safe_load(f)
            elif filepath.endswith(".toml"):
                data = toml.load(f)
            else:
                data = json.load(f)
        if isinstance(data, dict) and "friendrun" in data:
            return data["friendrun"] or {}
        return data if isinstance(data, dict) else {}

    @classmethod
    def deep_update(cls, base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
        result = dict(base)
        for key, value in update.items():
            if isinstance(result.get(key), dict) and isinstance(value, dict):
                result[key] = cls.deep_update(result[key], value)
            else:
                result[key] = value
        return result

    def load(self) -> Dict[str, Any]:
        """Load and merge configuration."""
        env_config = self._load_env_vars()
        file_config = self._load_file_config()
        merged = self.deep_update(file_config, env_config)
        LoggingUtils.log_debug(
            "ConfigLoader", "Configuration loaded: {env_count} env sections, {file_count} file sections",
            env_count=len(env_config), file_count=len(file_config),
        )
        return merged
