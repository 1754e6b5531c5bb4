"""
The two questions Alice can ask her friend through the door.

Both are record writes on the paper register controlled by the friend's
memory register. They differ only in which memory values trigger the write:

* definite query: "do you see a definite state?" The write fires when the
  memory sits in any pointer basis state. On a qubit memory every basis value
  is a pointer value, so the gate is an X on the paper and the paper stays a
  tensor factor. For a larger memory with a restricted pointer set the gate is a
  genuine projector-controlled write.
* which query: "dead or alive?" The write fires only for the nonzero memory
  values, so the paper copies the branch and becomes entangled with it.
"""

from typing import Collection, Optional

from friendrun.config.constants import Registers, Tolerances
from friendrun.errors import ProtocolError
from friendrun.qstate import GateSpec, PureState, RegisterLayout, apply_gate, controlled_write, outcome_probabilities


def _require_blank(state: PureState, record: str) -> None:
    probabilities = outcome_probabilities(state, record)
    written = float(probabilities[1:].sum())
    if written > Tolerances.BLANK_RECORD:
        raise ProtocolError(f"record '{record}' is not blank (P(written) = {written:.3e})")


def definite_query_gate(
    state_layout,
    memory: str = Registers.BOB,
    record: str = Registers.PAPER,
    pointer_values: Optional[Collection[int]] = None,
) -> GateSpec:
    """Unitary behind the definite query; ``pointer_values=None`` selects every basis value."""
    return controlled_write(
        memory,
        record,
        control_values=pointer_values,
        control_dim=state_layout.dim_of(memory),
        target_dim=state_layout.dim_of(record),
        name="definite_write",
    )


def which_query_gate(state_layout, memory: str = Registers.BOB, record: str = Registers.PAPER) -> GateSpec:
    """Unitary behind the which query: write when the memory is not in its ground value."""
    memory_dim = state_layout.dim_of(memory)
    return controlled_write(
        memory,
        record,
        control_values=range(1, memory_dim),
        control_dim=memory_dim,
        target_dim=state_layout.dim_of(record),
        name="which_write",
    )


def query_definite(
    state: PureState,
    memory: str = Registers.BOB,
    record: str = Registers.PAPER,
    pointer_values: Optional[Collection[int]] = None,
) -> PureState:
    """
    Ask whether the friend sees a definite state and write the answer on the record.

    Raises:
        ProtocolError: the record is not blank
    """
    _require_blank(state, record)
    return apply_gate(state, definite_query_gate(state.layout, memory, record, pointer_values))


def query_which(state: PureState, memory: str = Registers.BOB, record: str = Registers.PAPER) -> PureState:
    """
    Ask which outcome the friend saw and write it on the record.

    Raises:
        ProtocolError: the record is not blank
    """
    _require_blank(state, record)
    return apply_gate(state, which_query_gate(state.layout, memory, record))


def query_gate(step, layout: RegisterLayout) -> GateSpec:
    """Gate realising a query step on ``layout``."""
    from friendrun.protocol.steps import StepKind

    memory, record = step.payload
    if step.kind is StepKind.QUERY_DEFINITE:
        return definite_query_gate(layout, memory, record)
    if step.kind is StepKind.QUERY_WHICH:
        return which_query_gate(layout, memory, record)
    raise ProtocolError(f"step '{step.label}' is not a query step")
