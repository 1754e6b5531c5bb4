"""
friendrun configuration.

Layers:
- unified config (unified_config.py): user-tunable runtime parameters
- constants (constants.py): fixed code-level constants such as tolerances and exit codes
"""

from .constants import ExceptionConstants, ExitCodes, Registers, StepLabels, Tolerances
from .unified_config import (
    BetConfig,
    FriendRunUnifiedConfig,
    ReportConfig,
    ScenarioDefaults,
    SweepConfig,
    SystemConfig,
)
from .unified_manager import UnifiedConfigManager, get_config_manager

__all__ = [
    "UnifiedConfigManager",
    "get_config_manager",
    "FriendRunUnifiedConfig",
    "SystemConfig",
    "ScenarioDefaults",
    "BetConfig",
    "SweepConfig",
    "ReportConfig",
    "ExceptionConstants",
    "ExitCodes",
    "Registers",
    "StepLabels",
    "Tolerances",
]
