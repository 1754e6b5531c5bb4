"""
Scenario configuration for a single command invocation.

Resolution order: unified-config defaults, then the scenario file given with
``--config``, then command-line flags.

Scenario file format, one setting per line::

    # comment
    scenario = wigner
    theta = pi/3
    model: collapse
    collapse_step = bob_observes
"""

import math
import re
from pathlib import Path
from typing import Any, Dict, Iterable, Literal, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from friendrun.config import FriendRunUnifiedConfig
from friendrun.config.constants import ExceptionConstants
from friendrun.dynamics import CollapseAt, DynamicsModel, UnitaryOnly
from friendrun.errors import ScenarioConfigError
from friendrun.protocol import ProtocolScript, build_necker_script, build_wigner_script
from friendrun.utils import LoggingUtils

_ANGLE = re.compile(
    r"^(?P<sign>[-+])?\s*(?:(?P<num>\d+(?:\.\d*)?)\s*\*?\s*)?pi(?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?$"
)

# literals written back by scenario_text
NAMED_ANGLES = {"pi/2": math.pi / 2, "pi/3": math.pi / 3, "pi/4": math.pi / 4, "pi/6": math.pi / 6}


def parse_angle(value: Union[str, float, int]) -> float:
    """
    Radians from a number or a ``pi`` expression such as ``pi/2``, ``2*pi/3`` or ``-pi``.

    Only the syntax is checked here; the range is checked by the model.
    """
    if isinstance(value, bool):
        raise ValueError(f"not an angle: {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().lower().replace("π", "pi")
    match = _ANGLE.match(text)
    if match:
        angle = math.pi * float(match.group("num") or 1.0)
        if match.group("den"):
            den = float(match.group("den"))
            if den == 0:
                raise ValueError(f"division by zero in angle {value!r}")
            angle /= den
        return -angle if match.group("sign") == "-" else angle
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"not an angle: {value!r} (use radians or pi/2, pi/3, pi/4, pi/6)") from None


def format_angle(value: float) -> str:
    for name, angle in NAMED_ANGLES.items():
        if math.isclose(value, angle, rel_tol=0.0, abs_tol=1e-15):
            return name
    return repr(float(value))


class ScenarioConfig(BaseModel):
    """Fully resolved settings of one invocation."""

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    scenario: Literal["wigner", "necker"] = "wigner"
    theta: float = math.pi / 2
    omega_t: float = math.pi / 2
    model: Literal["unitary", "collapse"] = "unitary"
    collapse_step: Optional[str] = None
    collapse_subsystem: Optional[str] = None
    query: Literal["definite", "which"] = "definite"
    keep_record: bool = False
    n_trajectories: int = Field(default=10000, ge=1)
    master_seed: int = Field(default=42, ge=0)
    workers: int = Field(default=1, ge=1)
    output: Literal["json", "csv", "text"] = "text"

    @field_validator("theta", "omega_t", mode="before")
    @classmethod
    def _parse_angle(cls, value: Any) -> float:
        return parse_angle(value)

    @field_validator("theta", "omega_t")
    @classmethod
    def _angle_in_range(cls, value: float) -> float:
        if not math.isfinite(value) or not 0.0 < value < math.pi:
            raise ValueError(f"angle must lie in (0, pi), got {value!r}")
        return value

    @field_validator("collapse_step", "collapse_subsystem", mode="before")
    @classmethod
    def _blank_is_none(cls, value: Any) -> Any:
        if isinstance(value, str) and value.strip().lower() in ("", "none", "null"):
            return None
        return value

    @model_validator(mode="after")
    def _collapse_step_iff_collapse(self) -> "ScenarioConfig":
        if self.model == "collapse" and self.collapse_step is None:
            raise ValueError("collapse_step is required when model=collapse")
        if self.model != "collapse" and self.collapse_step is not None:
            raise ValueError("collapse_step is only allowed when model=collapse")
        return self

    @property
    def angle(self) -> float:
        """The angle the chosen scenario uses."""
        return self.theta if self.scenario == "wigner" else self.omega_t

    def build_script(self) -> ProtocolScript:
        if self.scenario == "wigner":
            return build_wigner_script(self.theta, query=self.query)
        return build_necker_script(self.omega_t, keep_record=self.keep_record)

    def collapse_model(self, script: ProtocolScript) -> CollapseAt:
        """
        The collapse alternative for ``script``.

        Without an explicit step the collapse happens at the script's
        observation step, on the observing register. Without an explicit
        subsystem it hits the register the chosen step writes: the last
        target of a gate, or the record of a query.
        """
        if script.observation is None and self.collapse_step is None:
            raise ScenarioConfigError("collapse_step", f"script '{script.name}' has no default observation step")
        step = self.collapse_step or script.observation[0]
        subsystem = self.collapse_subsystem or _written_register(script, step)
        return CollapseAt(step_label=step, subsystem=subsystem)

    def dynamics_model(self, script: ProtocolScript) -> DynamicsModel:
        if self.model == "unitary":
            return UnitaryOnly()
        return self.collapse_model(script)


def _written_register(script: ProtocolScript, label: str) -> str:
    if script.observation is not None and label == script.observation[0]:
        return script.observation[1]
    if label not in script.labels:
        raise ScenarioConfigError("collapse_step", f"script '{script.name}' has no step labelled '{label}'")
    registers = script.step(label).registers()
    if not registers:
        raise ScenarioConfigError(
            "collapse_subsystem", f"step '{label}' touches no register; name the collapse_subsystem"
        )
    return registers[-1]


def _first_error(error: ValidationError) -> ScenarioConfigError:
    item = error.errors()[0]
    field = ".".join(str(p) for p in item.get("loc", ())) or "config"
    if field == "config" and "collapse_step" in item.get("msg", ""):
        field = "collapse_step"
    message = str(item.get("msg", "invalid value")).removeprefix("Value error, ")
    return ScenarioConfigError(field, message)


def load_scenario_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    Read a flat ``key = value`` scenario file.

    Raises:
        ScenarioConfigError: unreadable file, malformed line, unknown or repeated key
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except ExceptionConstants.FILE_OPERATION_EXCEPTIONS as e:
        raise ScenarioConfigError("config", f"cannot read scenario file {path}: {e}") from None

    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        positions = [p for p in (line.find("="), line.find(":")) if p >= 0]
        if not positions:
            raise ScenarioConfigError(f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}")
        cut = min(positions)
        key, value = line[:cut].strip(), line[cut + 1:].strip()
        if key not in ScenarioConfig.model_fields:
            raise ScenarioConfigError(key or f"line {lineno}", "unknown scenario field")
        if key in values:
            raise ScenarioConfigError(key, f"repeated on line {lineno}")
        values[key] = value
    LoggingUtils.log_debug("Scenario", "Loaded {n} setting(s) from {path}", n=len(values), path=path)
    return values


def scenario_text(config: ScenarioConfig) -> str:
    """The scenario in the file format read by ``load_scenario_file``."""
    lines = ["# friendrun scenario"]
    for name, value in config.model_dump().items():
        if value is None:
            continue
        if name in ("theta", "omega_t"):
            value = format_angle(value)
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{name} = {value}")
    return "\n".join(lines) + "\n"


def defaults_from_unified(config: FriendRunUnifiedConfig) -> Dict[str, Any]:
    scenario = config.scenario
    bet = config.bet
    return {
        "scenario": scenario.scenario,
        "theta": scenario.theta,
        "omega_t": scenario.omega_t,
        "model": scenario.model,
        "collapse_step": scenario.collapse_step,
        "query": scenario.query,
        "output": scenario.output,
        "n_trajectories": bet.n_trajectories,
        "master_seed": bet.master_seed,
        "workers": bet.workers,
    }


def _merge(
    unified: FriendRunUnifiedConfig,
    config_path: Optional[Union[str, Path]],
    overrides: Optional[Mapping[str, Any]],
) -> Dict[str, Any]:
    merged: Dict[str, Any] = defaults_from_unified(unified)
    if config_path is not None:
        merged.update(load_scenario_file(config_path))
    given = {k: v for k, v in (overrides or {}).items() if v is not None}
    merged.update(given)
    # switching to unitary on the command line drops a collapse target inherited from defaults
    if given.get("model") == "unitary":
        for key in ("collapse_step", "collapse_subsystem"):
            if key not in given:
                merged[key] = None
    return merged


def _validate(values: Mapping[str, Any]) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(values)
    except ValidationError as e:
        raise _first_error(e) from None


def resolve_scenario(
    unified: FriendRunUnifiedConfig,
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ScenarioConfig:
    """
    Merge defaults, scenario file and flags into a validated ``ScenarioConfig``.

    ``None`` values in ``overrides`` mean "flag not given".

    Raises:
        ScenarioConfigError: the merged settings are invalid; ``field`` names the culprit
    """
    return _validate(_merge(unified, config_path, overrides))


def resolve_fields(
    unified: FriendRunUnifiedConfig,
    fields: Iterable[str],
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> ScenarioConfig:
    """
    Like ``resolve_scenario``, but only ``fields`` are read from the sources.

    Every other field keeps its default, so settings a command never uses
    cannot make it fail.
    """
    merged = _merge(unified, config_path, overrides)
    return _validate({key: merged[key] for key in fields if key in merged})
