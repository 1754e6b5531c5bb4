"""
Unified configuration manager - main entry point.
"""

import logging
from typing import Any, Dict, Optional

import yaml

from friendrun.config.constants import ExceptionConstants
from friendrun.config.loader import ConfigLoader
from friendrun.config.unified_config import (
    BetConfig,
    FriendRunUnifiedConfig,
    ReportConfig,
    ScenarioDefaults,
    SweepConfig,
    SystemConfig,
)

logger = logging.getLogger("friendrun")


class UnifiedConfigManager:
    """Process-wide configuration manager."""

    _instance: Optional["UnifiedConfigManager"] = None
    _initialized: bool = False

    def __new__(cls, *args, **kwargs):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self, loader: Optional[ConfigLoader] = None):
        if not self._initialized:
            self.loader = loader or ConfigLoader()
            self.config = self._load_configuration()
            self._initialized = True
            logger.debug("🔧 UnifiedConfigManager initialized")

    def _load_configuration(self) -> FriendRunUnifiedConfig:
        default_config = FriendRunUnifiedConfig.create_default()
        try:
            external = self.loader.load()
            merged = ConfigLoader.deep_update(default_config.to_dict(), external)
            final_config = FriendRunUnifiedConfig.from_dict(merged)
        except ExceptionConstants.DATA_PARSING_EXCEPTIONS as e:
            logger.error(f"Failed to load configuration: {e}")
            logger.info("Using default configuration")
            return default_config

        if final_config.validate():
            logger.debug("✅ Configuration loaded and validated successfully")
            return final_config
        logger.warning("⚠️ Configuration validation failed, using defaults")
        return default_config

    def get(self, path: str, default: Any = None) -> Any:
        return self.config.get(path, default)

    def set(self, path: str, value: Any) -> bool:
        return self.config.set(path, value)

    def get_system_config(self) -> SystemConfig:
        return self.config.system

    def get_scenario_defaults(self) -> ScenarioDefaults:
        return self.config.scenario

    def get_bet_config(self) -> BetConfig:
        return self.config.bet

    def get_sweep_config(self) -> SweepConfig:
        return self.config.sweep

    def get_report_config(self) -> ReportConfig:
        return self.config.report

    def reload(self, loader: Optional[ConfigLoader] = None) -> None:
        """Re-read environment and config files."""
        logger.debug("🔄 Reloading configuration...")
        if loader is not None:
            self.loader = loader
        self.config = self._load_configuration()

    def save_to_file(self, filepath: str) -> bool:
        """Write the current configuration as YAML."""
        try:
            data: Dict[str, Any] = {"friendrun": self.config.to_dict()}
            with open(filepath, "w", encoding="utf-8") as f:
                yaml.safe_dump(data, f, default_flow_style=False, allow_unicode=True, sort_keys=False)
            logger.info(f"💾 Configuration saved to: {filepath}")
            return True
        except ExceptionConstants.FILE_OPERATION_EXCEPTIONS as e:
            logger.error(f"Failed to save configuration to {filepath}: {e}")
            return False

    def get_summary(self) -> str:
        c = self.config
        return f"""
🔧 friendrun Configuration Summary
==================================
📊 System:
  - Debug: {c.system.debug}
  - Log Level: {c.system.log_level}

🐱 Scenario defaults:
  - Scenario: {c.scenario.scenario}
  - Theta: {c.scenario.theta}
  - Model: {c.scenario.model}
  - Query: {c.scenario.query}
  - Output: {c.scenario.output}

🎲 Bet:
  - Trajectories: {c.bet.n_trajectories}
  - Master Seed: {c.bet.master_seed}
  - Workers: {c.bet.workers}

📈 Sweep:
  - Range: [{c.sweep.theta_min}, {c.sweep.theta_max}] in {c.sweep.steps} steps
"""


def get_config_manager() -> UnifiedConfigManager:
    """Return the global configuration manager, creating it on first use."""
    return UnifiedConfigManager()
