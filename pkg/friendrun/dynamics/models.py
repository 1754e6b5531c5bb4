"""
The two competing dynamics: unitary evolution throughout, or an objective
collapse at the friend's observation.
"""

from typing import TYPE_CHECKING, Annotated, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from friendrun.dynamics.collapse import collapse_step
from friendrun.errors import DynamicsError, LayoutError, ProtocolError

if TYPE_CHECKING:
    from friendrun.protocol.steps import ProtocolScript, ProtocolStep
    from friendrun.qstate import PureState


class CollapseEvent(BaseModel):
    """A projective collapse that happened during a run."""

    step_label: str
    subsystem: str
    outcome: int
    probability: float


class UnitaryOnly(BaseModel):
    """Quantum mechanics holds for the whole laboratory; nothing ever collapses."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["unitary"] = "unitary"

    def validate_for(self, script: "ProtocolScript") -> None:
        return None

    def collapses_after(self, step: "ProtocolStep") -> bool:
        return False

    def after_step(
        self, step: "ProtocolStep", state: "PureState", rng: np.random.Generator
    ) -> Tuple["PureState", Optional[CollapseEvent]]:
        return state, None

    def describe(self) -> str:
        return "unitary"


class CollapseAt(BaseModel):
    """
    The state collapses onto a pointer basis state of ``subsystem`` right
    after the step labelled ``step_label``.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["collapse"] = "collapse"
    step_label: str
    subsystem: str

    def validate_for(self, script: "ProtocolScript") -> None:
        """
        Raises:
            DynamicsError: the step label or the subsystem is not part of the script
        """
        try:
            script.step_index(self.step_label)
            script.layout.index_of(self.subsystem)
        except (ProtocolError, LayoutError) as e:
            raise DynamicsError(f"collapse model does not fit script '{script.name}': {e}") from None

    def collapses_after(self, step: "ProtocolStep") -> bool:
        return step.label == self.step_label

    def after_step(
        self, step: "ProtocolStep", state: "PureState", rng: np.random.Generator
    ) -> Tuple["PureState", Optional[CollapseEvent]]:
        if not self.collapses_after(step):
            return state, None
        branch, outcome, probability = collapse_step(state, self.subsystem, rng)
        event = CollapseEvent(
            step_label=step.label, subsystem=self.subsystem, outcome=outcome, probability=probability
        )
        return branch, event

    def describe(self) -> str:
        return f"collapse({self.subsystem}@{self.step_label})"


DynamicsModel = Annotated[Union[UnitaryOnly, CollapseAt], Field(discriminator="kind")]
