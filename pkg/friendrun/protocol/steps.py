"""
Protocol steps and scripts.

A script is an ordered, labelled list of steps over a register layout.
Only gate steps can be reversible; record writes, classical messages,
collapse points and snapshots are never undone.
"""

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Mapping, Optional, Tuple, Union

from friendrun.config.constants import StepLabels
from friendrun.errors import LayoutError, ProtocolError
from friendrun.qstate import GateSpec, PureState, RegisterLayout, make_basis_state


class StepKind(str, Enum):
    GATE = "gate"
    QUERY_DEFINITE = "query_definite"
    QUERY_WHICH = "query_which"
    CLASSICAL_MESSAGE = "classical_message"
    COLLAPSE_POINT = "collapse_point"
    SNAPSHOT = "snapshot"


QUERY_KINDS = (StepKind.QUERY_DEFINITE, StepKind.QUERY_WHICH)

StepPayload = Union[GateSpec, Tuple[str, ...], str, None]


@dataclass(frozen=True, eq=False)
class ProtocolStep:
    """
    One labelled step.

    Payload by kind:
        gate: GateSpec
        query_definite / query_which: (memory register, record register)
        classical_message: message text
        collapse_point: registers the marker refers to
        snapshot: None
    """

    label: str
    kind: StepKind
    payload: StepPayload = None
    reversible: bool = False

    def __post_init__(self):
        kind = StepKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not self.label:
            raise ProtocolError("step label must be non-empty")
        if kind is StepKind.GATE and not isinstance(self.payload, GateSpec):
            raise ProtocolError(f"gate step '{self.label}' must carry a GateSpec")
        if kind in QUERY_KINDS:
            if not (isinstance(self.payload, tuple) and len(self.payload) == 2):
                raise ProtocolError(f"query step '{self.label}' needs a (memory, record) payload")
        if kind is StepKind.CLASSICAL_MESSAGE and not isinstance(self.payload, str):
            raise ProtocolError(f"message step '{self.label}' must carry text")
        if kind is StepKind.COLLAPSE_POINT and isinstance(self.payload, str):
            object.__setattr__(self, "payload", (self.payload,))
        if self.reversible and kind is not StepKind.GATE:
            raise ProtocolError(f"only gate steps can be reversible; '{self.label}' is {kind.value}")

    @property
    def gate(self) -> GateSpec:
        if self.kind is not StepKind.GATE:
            raise ProtocolError(f"step '{self.label}' is not a gate step")
        return self.payload

    def registers(self) -> Tuple[str, ...]:
        """Registers the step refers to."""
        if self.kind is StepKind.GATE:
            return self.payload.targets
        if self.kind in QUERY_KINDS or self.kind is StepKind.COLLAPSE_POINT:
            return tuple(self.payload or ())
        return ()

    def inverse(self, reversible: bool = True) -> "ProtocolStep":
        """
        The undo step of a reversible gate step.

        Undo steps placed inside a script are built with ``reversible=False``
        so that a later reversal does not undo the undo.
        """
        if not self.reversible:
            raise ProtocolError(f"step '{self.label}' is not reversible")
        prefix = StepLabels.UNDO_PREFIX
        label = self.label[len(prefix):] if self.label.startswith(prefix) else prefix + self.label
        return ProtocolStep(label, StepKind.GATE, self.gate.dagger(), reversible=reversible)

    def describe(self) -> str:
        if self.kind is StepKind.GATE:
            return self.payload.describe()
        if self.kind in QUERY_KINDS:
            memory, record = self.payload
            return f"write on {record} from {memory}"
        if self.kind is StepKind.CLASSICAL_MESSAGE:
            return self.payload
        if self.kind is StepKind.COLLAPSE_POINT:
            return f"collapse marker on {', '.join(self.payload or ())}"
        return ""


@dataclass(frozen=True, eq=False)
class ProtocolScript:
    """
    A complete experiment.

    Attributes:
        name: scenario name
        layout: registers
        steps: ordered steps
        theta: the scenario angle (decay angle, or omega*t for the perception preset)
        initial: basis values of the prepared state
        target: basis values the reversal should return to
        record: register whose purity is tracked in traces
        observation: (step label, register) where the friend's observation completes
        readout: registers read out at the end of each trajectory
        checkpoints: expected states at given step labels, for global verification
    """

    name: str
    layout: RegisterLayout
    steps: Tuple[ProtocolStep, ...]
    theta: float
    initial: Mapping[str, int]
    target: Mapping[str, int]
    record: Optional[str] = None
    observation: Optional[Tuple[str, str]] = None
    readout: Tuple[str, ...] = ()
    checkpoints: Mapping[str, PureState] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "initial", dict(self.initial))
        object.__setattr__(self, "target", dict(self.target))
        object.__setattr__(self, "readout", tuple(self.readout))
        object.__setattr__(self, "checkpoints", dict(self.checkpoints))
        self.validate()

    def validate(self) -> None:
        labels = [step.label for step in self.steps]
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise ProtocolError(f"duplicate step labels {duplicates}")
        try:
            self.layout.multi_index(self.initial)
            self.layout.multi_index(self.target)
            for step in self.steps:
                self.layout.axes_of(step.registers())
                if step.kind is StepKind.GATE:
                    dims = [self.layout.dim_of(t) for t in step.gate.targets]
                    span = 1
                    for d in dims:
                        span *= d
                    if span != step.gate.dim:
                        raise ProtocolError(
                            f"gate step '{step.label}' has dimension {step.gate.dim}, targets span {span}"
                        )
            self.layout.axes_of(self.readout)
            if self.record is not None:
                self.layout.index_of(self.record)
            if self.observation is not None:
                self.step_index(self.observation[0])
                self.layout.index_of(self.observation[1])
        except LayoutError as e:
            raise ProtocolError(f"script '{self.name}': {e}") from None
        for label, state in self.checkpoints.items():
            self.step_index(label)
            if state.layout != self.layout:
                raise ProtocolError(f"checkpoint '{label}' is defined on another layout")

    def step_index(self, label: str) -> int:
        for i, step in enumerate(self.steps):
            if step.label == label:
                return i
        raise ProtocolError(f"script '{self.name}' has no step labelled '{label}'")

    def step(self, label: str) -> ProtocolStep:
        return self.steps[self.step_index(label)]

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(step.label for step in self.steps)

    def reversible_steps(self) -> Tuple[ProtocolStep, ...]:
        return tuple(step for step in self.steps if step.reversible)

    def initial_state(self) -> PureState:
        return make_basis_state(self.layout, self.initial)

    def target_state(self) -> PureState:
        return make_basis_state(self.layout, self.target)

    def describe(self) -> Dict[str, object]:
        """Plain-data description for reports."""
        return {
            "name": self.name,
            "registers": dict(self.layout.subsystems),
            "theta": self.theta,
            "steps": [
                {"label": s.label, "kind": s.kind.value, "reversible": s.reversible, "detail": s.describe()}
                for s in self.steps
            ],
        }

    def signature(self) -> str:
        """Short stable digest of the script, used to check two reports describe the same experiment."""
        payload = json.dumps(self.describe(), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def reverse_steps(script: ProtocolScript) -> ProtocolScript:
    """
    Script of inverse gates for the reversible steps of ``script``, in reverse order.

    Record writes and classical messages are never reversible, so they are
    excluded by construction.
    """
    reversible = script.reversible_steps()
    if not reversible:
        raise ProtocolError(f"script '{script.name}' has no reversible steps")
    return ProtocolScript(
        name=f"{script.name}:reversed",
        layout=script.layout,
        steps=tuple(step.inverse() for step in reversed(reversible)),
        theta=script.theta,
        initial=script.initial,
        target=script.target,
        record=script.record,
        readout=script.readout,
    )
