"""
Unified configuration - layered section definitions.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

from friendrun.utils.logging_utils import LoggingUtils

VALID_SCENARIOS = ("wigner", "necker")
VALID_MODELS = ("unitary", "collapse")
VALID_QUERIES = ("definite", "which")
VALID_OUTPUTS = ("json", "csv", "text")
VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class SystemConfig:
    """Process-wide settings."""

    debug: bool = False
    log_level: str = "INFO"


@dataclass
class ScenarioDefaults:
    """Defaults for a single scenario invocation; angles may be strings such as ``pi/2``."""

    scenario: str = "wigner"
    theta: Any = "pi/2"
    omega_t: Any = "pi/2"
    model: str = "unitary"
    query: str = "definite"
    collapse_step: Optional[str] = None
    output: str = "text"


@dataclass
class BetConfig:
    """Monte-Carlo settings for the bet."""

    n_trajectories: int = 10000
    master_seed: int = 42
    workers: int = 1


@dataclass
class SweepConfig:
    """Default angle sweep."""

    theta_min: Any = "pi/6"
    theta_max: Any = "pi/2"
    steps: int = 4


@dataclass
class ReportConfig:
    """Report rendering."""

    json_indent: int = 2
    out_dir: Optional[str] = None


@dataclass
class FriendRunUnifiedConfig:
    """Aggregate configuration."""

    system: SystemConfig
    scenario: ScenarioDefaults
    bet: BetConfig
    sweep: SweepConfig
    report: ReportConfig

    def to_dict(self) -> Dict[str, Any]:
        return {
            "system": asdict(self.system),
            "scenario": asdict(self.scenario),
            "bet": asdict(self.bet),
            "sweep": asdict(self.sweep),
            "report": asdict(self.report),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FriendRunUnifiedConfig":
        return cls(
            system=SystemConfig(**data.get("system", {})),
            scenario=ScenarioDefaults(**data.get("scenario", {})),
            bet=BetConfig(**data.get("bet", {})),
            sweep=SweepConfig(**data.get("sweep", {})),
            report=ReportConfig(**data.get("report", {})),
        )

    @classmethod
    def create_default(cls) -> "FriendRunUnifiedConfig":
        return cls(
            system=SystemConfig(),
            scenario=ScenarioDefaults(),
            bet=BetConfig(),
            sweep=SweepConfig(),
            report=ReportConfig(),
        )

    def validate(self) -> bool:
        """Check value ranges; angles are checked later, when a scenario is resolved."""
        checks = [
            (str(self.system.log_level).upper() in VALID_LOG_LEVELS, "system.log_level", self.system.log_level),
            (self.scenario.scenario in VALID_SCENARIOS, "scenario.scenario", self.scenario.scenario),
            (self.scenario.model in VALID_MODELS, "scenario.model", self.scenario.model),
            (self.scenario.query in VALID_QUERIES, "scenario.query", self.scenario.query),
            (self.scenario.output in VALID_OUTPUTS, "scenario.output", self.scenario.output),
            (isinstance(self.bet.n_trajectories, int) and self.bet.n_trajectories >= 1,
             "bet.n_trajectories", self.bet.n_trajectories),
            (isinstance(self.bet.master_seed, int) and self.bet.master_seed >= 0,
             "bet.master_seed", self.bet.master_seed),
            (isinstance(self.bet.workers, int) and self.bet.workers >= 1, "bet.workers", self.bet.workers),
            (isinstance(self.sweep.steps, int) and self.sweep.steps >= 2, "sweep.steps", self.sweep.steps),
            (isinstance(self.report.json_indent, int) and self.report.json_indent >= 0,
             "report.json_indent", self.report.json_indent),
        ]
        for ok, path, value in checks:
            if not ok:
                LoggingUtils.log_error("UnifiedConfig", "Invalid {path}: {value}", path=path, value=value)
                return False
        LoggingUtils.log_debug("UnifiedConfig", "Unified config validation passed")
        return True

    def get(self, path: str, default: Any = None) -> Any:
        """Dotted-path lookup, e.g. ``bet.master_seed``."""
        value: Any = self
        for key in path.split("."):
            if not hasattr(value, key):
                return default
            value = getattr(value, key)
        return value

    def set(self, path: str, value: Any) -> bool:
        """Dotted-path assignment; returns False when the path does not exist."""
        keys = path.split(".")
        target: Any = self
        for key in keys[:-1]:
            if not hasattr(target, key):
                return False
            target = getattr(target, key)
        if not hasattr(target, keys[-1]):
            LoggingUtils.log_warning("UnifiedConfig", "Unknown config path '{path}'", path=path)
            return False
        setattr(target, keys[-1], value)
        return True
