"""
Script execution and run traces.
"""

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Dict, Iterable, List, Optional

import numpy as np
from pydantic import BaseModel

from friendrun.config.constants import Tolerances
from friendrun.errors import NumericalInvariantError
from friendrun.protocol.queries import query_definite, query_which
from friendrun.protocol.steps import ProtocolScript, ProtocolStep, StepKind
from friendrun.qstate import (
    PureState,
    apply_gate,
    expectation_projector,
    fidelity,
    partial_trace,
    purity,
    von_neumann_entropy,
)
from friendrun.utils import LoggingUtils

if TYPE_CHECKING:
    from friendrun.dynamics.models import CollapseEvent, DynamicsModel


class StepRecord(BaseModel):
    """Snapshot of the laboratory right after one step."""

    index: int
    label: str
    kind: str
    norm: float
    fidelity_to_initial: float
    fidelity_to_target: float
    entropies: Dict[str, float]
    record_purity: Optional[float] = None
    verification: Optional[float] = None


@dataclass
class RunTrace:
    """Per-step records of one run plus its final state."""

    script: ProtocolScript
    records: List[StepRecord] = field(default_factory=list)
    final_state: Optional[PureState] = None
    collapse_events: List["CollapseEvent"] = field(default_factory=list)

    @property
    def final_fidelity(self) -> float:
        """Return fidelity: overlap of the final state with the script's target."""
        return fidelity(self.final_state, self.script.target_state())

    def record_for(self, label: str) -> StepRecord:
        for record in self.records:
            if record.label == label:
                return record
        raise KeyError(label)

    def __len__(self) -> int:
        return len(self.records)


def apply_step(step: ProtocolStep, state: PureState) -> PureState:
    """
    Apply one step to ``state``.

    Messages, collapse markers and snapshots return ``state`` itself, so they
    can never alter amplitudes.
    """
    if step.kind is StepKind.GATE:
        return apply_gate(state, step.gate)
    if step.kind is StepKind.QUERY_DEFINITE:
        memory, record = step.payload
        return query_definite(state, memory, record)
    if step.kind is StepKind.QUERY_WHICH:
        memory, record = step.payload
        return query_which(state, memory, record)
    return state


def evolve(steps: Iterable[ProtocolStep], state: PureState) -> PureState:
    """Apply ``steps`` in order without recording anything."""
    for step in steps:
        state = apply_step(step, state)
    return state


def snapshot(
    index: int,
    step: ProtocolStep,
    state: PureState,
    script: ProtocolScript,
    initial: PureState,
    target: PureState,
) -> StepRecord:
    norm = float(np.sqrt(state.norm_squared))
    if abs(norm - 1.0) > Tolerances.NORM:
        raise NumericalInvariantError(f"norm drifted to {norm!r} at step '{step.label}'", value=norm)

    entropies = {
        name: von_neumann_entropy(partial_trace(state, [name])) for name in script.layout.names
    }
    record_purity = None
    if script.record is not None:
        record_purity = purity(partial_trace(state, [script.record]))
    verification = None
    checkpoint = script.checkpoints.get(step.label)
    if checkpoint is not None:
        verification = expectation_projector(state, checkpoint)

    return StepRecord(
        index=index,
        label=step.label,
        kind=step.kind.value,
        norm=norm,
        fidelity_to_initial=fidelity(state, initial),
        fidelity_to_target=fidelity(state, target),
        entropies=entropies,
        record_purity=record_purity,
        verification=verification,
    )


def run_script(
    script: ProtocolScript,
    model: "DynamicsModel",
    rng: Optional[np.random.Generator] = None,
    record: bool = True,
    on_event: Optional[Callable[[BaseModel], None]] = None,
) -> RunTrace:
    """
    Execute ``script`` under a dynamics model.

    After every step the model may collapse the state; collapses are kept in
    ``RunTrace.collapse_events``.

    Args:
        script: experiment to run
        model: ``UnitaryOnly`` or ``CollapseAt``
        rng: generator for collapse outcomes; a fresh unseeded one when omitted
        record: build a ``StepRecord`` per step
        on_event: callback receiving each ``StepRecord`` and ``CollapseEvent``

    Raises:
        DynamicsError: the model does not fit the script
        NumericalInvariantError: norm drift beyond tolerance
    """
    model.validate_for(script)
    if rng is None:
        rng = np.random.default_rng()

    initial = script.initial_state()
    target = script.target_state()
    trace = RunTrace(script=script)
    state = initial

    LoggingUtils.log_debug(
        "Runner", "Running {name} ({n} steps) under {model}",
        name=script.name, n=len(script.steps), model=model.describe(),
    )
    for index, step in enumerate(script.steps):
        state = apply_step(step, state)
        state, event = model.after_step(step, state, rng)
        if event is not None:
            trace.collapse_events.append(event)
            if on_event is not None:
                on_event(event)
        if record:
            step_record = snapshot(index, step, state, script, initial, target)
            trace.records.append(step_record)
            if on_event is not None:
                on_event(step_record)

    trace.final_state = state
    LoggingUtils.log_debug(
        "Runner", "Finished {name}: return fidelity {fid:.12f}", name=script.name, fid=trace.final_fidelity
    )
    return trace
